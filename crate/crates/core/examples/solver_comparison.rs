//! The same reduced QP through the NNLS solver, the penalty iteration with
//! and without Newton steps, and the exhaustive active-set oracle.

use std::time::Instant;

use dirmod::channel::rayleigh;
use dirmod::modulation::Constellation;
use dirmod::precoder::{build, DesignMode};
use dirmod::solvers::{solve, PenaltyConfig, SolverKind};

fn main() -> dirmod::Result<()> {
    let psk = Constellation::psk8();
    let h_u = rayleigh(4, 5, 17);
    let s = psk.symbols(&[2, 5, 1, 6]);
    let problem = build(DesignMode::PowerFixed, &h_u, &s, 36.0, 8)?;
    let qp = problem.qp();
    println!("QP: {} constraints, {} unknowns", qp.constraint.nrows(), qp.constraint.ncols());

    let runs = [
        ("nnls", SolverKind::Nnls, PenaltyConfig::default()),
        ("penalty", SolverKind::Iterative, PenaltyConfig::default()),
        ("penalty plain", SolverKind::Iterative, PenaltyConfig::plain()),
        ("oracle", SolverKind::Oracle, PenaltyConfig::default()),
    ];
    for (name, kind, cfg) in runs {
        let t0 = Instant::now();
        let sol = solve(&qp, kind, &cfg)?;
        let dt = t0.elapsed();
        println!(
            "{name:>14}: objective {:.9}  min slack {:+.2e}  iterations {:5}  {:?}",
            sol.objective,
            qp.min_slack(&sol.lambda),
            sol.iterations,
            dt
        );
        if let Some(trace) = &sol.trace {
            let h = &trace.objective;
            println!("{:>14}  penalty objective {:.6} -> {:.6}", "", h[0], h[h.len() - 1]);
        }
    }
    Ok(())
}
