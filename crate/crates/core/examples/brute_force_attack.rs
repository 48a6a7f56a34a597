//! Exhaustive maximum-likelihood attack: the eavesdropper designs the
//! precoder for every possible symbol vector and picks the closest match.
//! Feasible only for tiny alphabets; the table grows as M^N_U.

use dirmod::channel::{awgn, ChannelSet};
use dirmod::eavesdropper::{brute_force_log2, brute_force_ml, build_lookup, index_to_symbols, DEFAULT_TABLE_CAP};
use dirmod::modulation::Constellation;
use dirmod::precoder::DesignMode;
use dirmod::simulator::{brute_force_timing, TimingConfig};
use dirmod::solvers::{PenaltyConfig, SolverKind};

fn main() -> dirmod::Result<()> {
    let bpsk = Constellation::new(2, 0.0)?;
    let gamma = dirmod::db_to_linear(15.56);
    let ch = ChannelSet::rayleigh(&[1; 4], 6, 6, 8);
    let mode = DesignMode::PowerFixed;
    let cfg = PenaltyConfig::default();
    let table = build_lookup(&ch.h_u, &ch.h_e, gamma, &bpsk, mode, SolverKind::Nnls, &cfg, DEFAULT_TABLE_CAP)?;
    println!("table entries {}", table.entries.len());

    let (mut errors, mut total) = (0, 0);
    for i in 0..table.entries.len() {
        let Some((w, _)) = &table.entries[i] else { continue };
        let truth = index_to_symbols(i, 2, 4);
        for rep in 0..20u64 {
            let y_e = awgn(&(&ch.h_e * w), 1.0, (i as u64) * 100 + rep)?;
            let (_, guess) = brute_force_ml(&y_e, &table).expect("table has entries");
            errors += guess.iter().zip(&truth).filter(|(a, b)| a != b).count();
            total += truth.len();
        }
    }
    println!("ML attack SER {:.4}", errors as f64 / total as f64);

    let rows = brute_force_timing(&TimingConfig {
        n_u_values: vec![2, 4, 6],
        lookups: 50,
        ..TimingConfig::default()
    })?;
    for r in rows {
        println!(
            "M {} N_U {}: {:5} entries, build {:.3e} s, lookup {:.3e} s",
            r.order, r.n_u, r.table_size, r.build_seconds, r.lookup_seconds
        );
    }
    println!("32-PSK with 52 users: log2 table size {}", brute_force_log2(32, 52));
    Ok(())
}
