//! Conventional ZF transmit precoding against directional modulation: the
//! benchmark hands the eavesdropper a fixed linear map it can invert.

use dirmod::benchmark::{bench_eve_zf, BenchmarkLink};
use dirmod::channel::{awgn, ChannelSet};
use dirmod::modulation::Constellation;
use dirmod::precoder::{design, DesignMode};
use dirmod::linear_to_db;
use dirmod::solvers::{PenaltyConfig, SolverKind};

fn main() -> dirmod::Result<()> {
    let psk = Constellation::psk8();
    let gamma = dirmod::db_to_linear(15.56);
    let ch = ChannelSet::rayleigh(&[1; 6], 10, 10, 21);
    let link = BenchmarkLink::new(&ch.h_u, gamma.sqrt())?;
    let cfg = PenaltyConfig::default();

    let (mut p_bench, mut p_dm, mut eve_bench, mut n) = (0.0, 0.0, 0, 0);
    for v in 0..200u64 {
        let idx: Vec<usize> = (0..6).map(|k| ((v * 5 + k * 3 + v / 3) % 8) as usize).collect();
        let s = psk.symbols(&idx);
        let x = link.transmit(&s);
        p_bench += x.norm_squared();
        p_dm += design(&ch.h_u, &s, gamma, DesignMode::PowerFixed, SolverKind::Nnls, &cfg, 8)?.objective;
        let y_e = awgn(&(&ch.h_e * &x), 1.0, v)?;
        let s_hat = bench_eve_zf(&ch.h_e, &link.w, &y_e)?;
        eve_bench += psk.detect_all(&s_hat).iter().zip(&idx).filter(|(a, b)| a != b).count();
        n += idx.len();
    }
    println!("mean power benchmark {:.2} dB", linear_to_db(p_bench / 200.0));
    println!("mean power fixed-phase design {:.2} dB", linear_to_db(p_dm / 200.0));
    println!("eve ZF SER against benchmark {:.4}", eve_bench as f64 / n as f64);
    Ok(())
}
