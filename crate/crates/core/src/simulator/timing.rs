//! Wall-clock cost of the brute-force eavesdropper.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{awgn_from, rayleigh_from};
use crate::eavesdropper::{brute_force_ml, build_lookup, table_size, DEFAULT_TABLE_CAP};
use crate::modulation::Constellation;
use crate::precoder::DesignMode;
use crate::solvers::{PenaltyConfig, SolverKind};
use crate::{CVector, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TimingConfig {
    pub orders: Vec<usize>,
    pub n_u_values: Vec<usize>,
    /// `N_t = N_e = N_U + extra_tx`.
    pub extra_tx: usize,
    pub mode: DesignMode,
    pub gamma_db: f64,
    pub noise_var: f64,
    /// Timed lookups per point.
    pub lookups: usize,
    pub table_cap: usize,
    pub seed: u64,
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self {
            orders: vec![2, 4],
            n_u_values: vec![2, 4, 6, 8],
            extra_tx: 2,
            mode: DesignMode::PowerFixed,
            gamma_db: 15.56,
            noise_var: 1.0,
            lookups: 200,
            table_cap: DEFAULT_TABLE_CAP,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimingRow {
    pub order: usize,
    pub n_u: usize,
    pub n_t: usize,
    /// `M^{N_U}`.
    pub table_size: usize,
    /// Seconds to design the whole table.
    pub build_seconds: f64,
    /// Mean seconds per lookup and argmin.
    pub lookup_seconds: f64,
}

/// Times table construction and ML lookups for every `(M, N_U)` whose table fits the cap.
///
/// Combinations over the cap are skipped; they are reported by
/// [`table_size`] when requested individually.
pub fn brute_force_timing(cfg: &TimingConfig) -> Result<Vec<TimingRow>> {
    let gamma = crate::db_to_linear(cfg.gamma_db);
    let pen = PenaltyConfig::default();
    let mut rows = Vec::new();
    for &order in &cfg.orders {
        let c = Constellation::new(order, 0.0)?;
        for &n_u in &cfg.n_u_values {
            let Ok(size) = table_size(order, n_u, cfg.table_cap) else {
                continue;
            };
            let n_t = n_u + cfg.extra_tx;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((order as u64) << 32 | n_u as u64));
            let h_u = rayleigh_from(&mut rng, n_u, n_t);
            let h_e = rayleigh_from(&mut rng, n_t, n_t);
            let start = Instant::now();
            let table = build_lookup(&h_u, &h_e, gamma, &c, cfg.mode, SolverKind::Nnls, &pen, cfg.table_cap)?;
            let build_seconds = start.elapsed().as_secs_f64();

            let feasible: Vec<&CVector> = table.entries.iter().flatten().map(|(_, y)| y).collect();
            let mut observations = Vec::with_capacity(cfg.lookups);
            for _ in 0..cfg.lookups {
                let y = feasible[rng.random_range(0..feasible.len())];
                observations.push(awgn_from(&mut rng, y, cfg.noise_var)?);
            }
            let start = Instant::now();
            let mut sink = 0usize;
            for y in &observations {
                if let Some((_, idx)) = brute_force_ml(y, &table) {
                    sink = sink.wrapping_add(idx[0]);
                }
            }
            let lookup_seconds = start.elapsed().as_secs_f64() / cfg.lookups.max(1) as f64;
            std::hint::black_box(sink);
            rows.push(TimingRow {
                order,
                n_u,
                n_t,
                table_size: size,
                build_seconds,
                lookup_seconds,
            });
        }
    }
    Ok(rows)
}

/// Writes `order,n_u,n_t,table_size,build_seconds,lookup_seconds`.
pub fn write_timing_csv<W: std::io::Write>(rows: &[TimingRow], out: W) -> Result<()> {
    use super::report::fmt_f64;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["order", "n_u", "n_t", "table_size", "build_seconds", "lookup_seconds"])?;
    for r in rows {
        w.write_record([
            r.order.to_string(),
            r.n_u.to_string(),
            r.n_t.to_string(),
            r.table_size.to_string(),
            fmt_f64(r.build_seconds),
            fmt_f64(r.lookup_seconds),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_follow_order_power() {
        let cfg = TimingConfig {
            orders: vec![2, 4],
            n_u_values: vec![2, 3],
            lookups: 5,
            ..TimingConfig::default()
        };
        let rows = brute_force_timing(&cfg).unwrap();
        let sizes: Vec<usize> = rows.iter().map(|r| r.table_size).collect();
        assert_eq!(sizes, vec![4, 8, 16, 64]);
        assert!(rows.iter().all(|r| r.build_seconds > 0.0));
    }

    #[test]
    fn skips_over_cap() {
        let cfg = TimingConfig {
            orders: vec![8],
            n_u_values: vec![2, 5],
            lookups: 2,
            ..TimingConfig::default()
        };
        let rows = brute_force_timing(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].table_size, 64);
    }
}
