//! Relaxed design: received samples may land anywhere inside the detection
//! wedge of their symbol, which saves power over fixing the phase.

use dirmod::channel::rayleigh;
use dirmod::modulation::Constellation;
use dirmod::precoder::{design, DesignMode};
use dirmod::solvers::{PenaltyConfig, SolverKind};
use dirmod::{db_to_linear, linear_to_db};

fn main() -> dirmod::Result<()> {
    let psk = Constellation::psk8();
    let gamma = db_to_linear(15.56);
    let cfg = PenaltyConfig::default();
    let (mut fixed, mut relaxed) = (0.0, 0.0);
    let draws = 50;
    for seed in 0..draws {
        let h_u = rayleigh(8, 12, seed);
        let idx: Vec<usize> = (0..8).map(|i| (i * 3 + seed as usize) % 8).collect();
        let s = psk.symbols(&idx);
        let a = design(&h_u, &s, gamma, DesignMode::PowerFixed, SolverKind::Nnls, &cfg, 8)?;
        let b = design(&h_u, &s, gamma, DesignMode::PowerRelaxed, SolverKind::Nnls, &cfg, 8)?;
        assert!(b.report.feasible);
        let detected = psk.detect_all(&(&h_u * &b.w));
        assert_eq!(detected, idx);
        fixed += a.objective;
        relaxed += b.objective;
    }
    let n = draws as f64;
    println!("mean power fixed   {:.2} dB", linear_to_db(fixed / n));
    println!("mean power relaxed {:.2} dB", linear_to_db(relaxed / n));
    Ok(())
}
