//! ZF and MMSE attacks by a multi-antenna eavesdropper that knows every
//! channel but not the per-symbol precoder.

use dirmod::channel::{awgn, ChannelSet};
use dirmod::eavesdropper::{decode_users, estimate_c_w, min_norm_zf_matrix, CwProtocol, MmseEstimator, MmseForm};
use dirmod::modulation::Constellation;
use dirmod::precoder::{design, DesignMode};
use dirmod::solvers::{PenaltyConfig, SolverKind};

fn main() -> dirmod::Result<()> {
    let psk = Constellation::psk8();
    let gamma = dirmod::db_to_linear(15.56);
    let cfg = PenaltyConfig::default();
    let mode = DesignMode::PowerFixed;
    let ch = ChannelSet::rayleigh(&[1; 8], 12, 12, 5);

    let cov = estimate_c_w(mode, &ch.h_u, gamma, &psk, 400, 6, CwProtocol::FixedChannel, SolverKind::Nnls, &cfg)?;
    let mmse = MmseEstimator::new(&ch.h_e, &cov, 1.0, MmseForm::Textbook)?;
    let zf = min_norm_zf_matrix(&ch.h_e);

    let (mut users, mut eve_zf, mut eve_mmse, mut total) = (0, 0, 0, 0);
    for v in 0..300u64 {
        let idx: Vec<usize> = (0..8).map(|k| ((v * 7 + k * 3 + v / 5) % 8) as usize).collect();
        let s = psk.symbols(&idx);
        let sol = design(&ch.h_u, &s, gamma, mode, SolverKind::Nnls, &cfg, 8)?;
        let y_u = awgn(&(&ch.h_u * &sol.w), 1.0, 2 * v)?;
        let y_e = awgn(&(&ch.h_e * &sol.w), 1.0, 2 * v + 1)?;
        let miss = |d: Vec<usize>| d.iter().zip(&idx).filter(|(a, b)| a != b).count();
        users += miss(psk.detect_all(&y_u));
        eve_zf += miss(decode_users(&ch.h_u, &(&zf * &y_e), &psk));
        eve_mmse += miss(decode_users(&ch.h_u, &mmse.estimate(&y_e), &psk));
        total += idx.len();
    }
    let t = total as f64;
    println!("SER users {:.4}", users as f64 / t);
    println!("SER eve ZF {:.4}", eve_zf as f64 / t);
    println!("SER eve MMSE {:.4}", eve_mmse as f64 / t);
    Ok(())
}
