//! Minimum-power precoder that puts every user antenna exactly on the phase
//! of its symbol with at least the target amplitude.

use dirmod::channel::rayleigh;
use dirmod::linear_to_db;
use dirmod::modulation::Constellation;
use dirmod::precoder::{build, solve_problem, DesignMode};
use dirmod::solvers::{PenaltyConfig, SolverKind};

fn main() -> dirmod::Result<()> {
    let (n_u, n_t, gamma) = (6, 10, dirmod::db_to_linear(15.56));
    let psk = Constellation::psk8();
    let h_u = rayleigh(n_u, n_t, 42);
    let s = psk.symbols(&[1, 4, 7, 2, 0, 5]);

    let problem = build(DesignMode::PowerFixed, &h_u, &s, gamma, psk.order())?;
    println!("null space dimension {} (rank {})", problem.dof(), problem.rank);

    let sol = solve_problem(&problem, &h_u, &s, SolverKind::Nnls, &PenaltyConfig::default(), psk.order())?;
    println!("transmit power {:.3} ({:.2} dB)", sol.objective, linear_to_db(sol.objective));
    println!(
        "max phase error {:.2e}, min slack {:.2e}, feasible {}",
        sol.report.max_phase_error, sol.report.min_slack, sol.report.feasible
    );
    let y = &h_u * &sol.w;
    for (k, (yk, sk)) in y.iter().zip(s.iter()).enumerate() {
        println!("  user {k}: |y| {:.3}  arg y {:+.4}  arg s {:+.4}", yk.norm(), yk.arg(), sk.arg());
    }
    Ok(())
}
