//! Signal-level design: minimize the total power received by the users, which
//! pulls every antenna down to the target SNR.

use dirmod::channel::rayleigh;
use dirmod::linear_to_db;
use dirmod::modulation::Constellation;
use dirmod::precoder::{design, DesignMode};
use dirmod::solvers::{PenaltyConfig, SolverKind};

fn main() -> dirmod::Result<()> {
    let psk = Constellation::psk8();
    let gamma_db = 15.56;
    let gamma = dirmod::db_to_linear(gamma_db);
    let h_u = rayleigh(10, 10, 9);
    let s = psk.symbols(&[0, 1, 2, 3, 4, 5, 6, 7, 1, 3]);
    let cfg = PenaltyConfig::default();

    for mode in [DesignMode::PowerFixed, DesignMode::SignalLevel] {
        let sol = design(&h_u, &s, gamma, mode, SolverKind::Nnls, &cfg, 8)?;
        let snr: Vec<String> = (&h_u * &sol.w).iter().map(|y| format!("{:.2}", linear_to_db(y.norm_sqr()))).collect();
        println!("{mode:?}: ‖w‖² {:.2} dB", linear_to_db(sol.w.norm_squared()));
        println!("  per-antenna SNR (dB, target {gamma_db}): {}", snr.join(" "));
    }
    Ok(())
}
