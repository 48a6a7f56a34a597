//! Angular SER profile of a line-of-sight uniform linear array.
//!
//! Single-antenna users sit at fixed bearings around the array. The
//! precoders are designed for the users only; a probe receiver is then swept
//! over bearing and decodes the symbol meant for the angularly nearest user.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{awgn_from, ula_los};
use crate::modulation::Constellation;
use crate::precoder::{design, DesignMode};
use crate::solvers::{PenaltyConfig, SolverKind};
use crate::{CVector, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct UlaConfig {
    pub user_angles_deg: Vec<f64>,
    pub n_t: usize,
    /// Element spacing in wavelengths.
    pub spacing: f64,
    /// Bearing of the array axis. A cosine steering phase cannot tell θ
    /// from −θ about the axis; rotating it keeps mirrored users apart.
    pub axis_deg: f64,
    pub mode: DesignMode,
    pub gamma_db: f64,
    pub noise_var: f64,
    pub order: usize,
    pub grid_step_deg: f64,
    /// Symbol vectors sent (and probed at every bearing).
    pub symbols: usize,
    pub seed: u64,
}

impl Default for UlaConfig {
    fn default() -> Self {
        Self {
            user_angles_deg: vec![10.0, 50.0, 110.0, 260.0, 310.0],
            n_t: 5,
            spacing: 0.5,
            axis_deg: 10.0,
            mode: DesignMode::SignalLevel,
            gamma_db: 15.56,
            noise_var: 1.0,
            order: 8,
            grid_step_deg: 1.0,
            symbols: 10_000,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UlaPoint {
    pub angle_deg: f64,
    pub ser: f64,
    pub nearest_user: usize,
    /// Angular distance to that user.
    pub distance_deg: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UlaProfile {
    pub points: Vec<UlaPoint>,
    /// Symbol vectors actually transmitted.
    pub symbols: usize,
    pub infeasible: usize,
}

impl UlaProfile {
    /// Point closest to `angle_deg`.
    pub fn at(&self, angle_deg: f64) -> &UlaPoint {
        self.points
            .iter()
            .min_by(|a, b| {
                circular_distance(a.angle_deg, angle_deg).total_cmp(&circular_distance(b.angle_deg, angle_deg))
            })
            .expect("profile has points")
    }
}

/// Distance between two bearings in degrees, in `[0, 180]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

fn nearest(angles: &[f64], theta: f64) -> (usize, f64) {
    angles
        .iter()
        .enumerate()
        .map(|(k, &a)| (k, circular_distance(a, theta)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one user")
}

/// Sweeps the probe over `[0°, 360°)` in `grid_step_deg` steps.
pub fn ula_scenario(cfg: &UlaConfig) -> Result<UlaProfile> {
    if cfg.user_angles_deg.is_empty() || !(cfg.grid_step_deg > 0.0) || cfg.symbols == 0 {
        return Err(Error::Config("ULA needs users, a positive grid step and symbols >= 1".into()));
    }
    let c = Constellation::new(cfg.order, 0.0)?;
    let gamma = crate::db_to_linear(cfg.gamma_db);
    let rotated: Vec<f64> = cfg.user_angles_deg.iter().map(|a| a - cfg.axis_deg).collect();
    let h_u = ula_los(&rotated, cfg.n_t, cfg.spacing);
    let n_u = rotated.len();
    let pen = PenaltyConfig::default();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sent: Vec<(CVector, Vec<usize>)> = Vec::with_capacity(cfg.symbols);
    let mut infeasible = 0;
    for _ in 0..cfg.symbols {
        let idx: Vec<usize> = (0..n_u).map(|_| rng.random_range(0..c.order())).collect();
        match design(&h_u, &c.symbols(&idx), gamma, cfg.mode, SolverKind::Nnls, &pen, c.order()) {
            Ok(sol) => sent.push((sol.w, idx)),
            Err(Error::Infeasible | Error::EmptyNullSpace { .. }) => infeasible += 1,
            Err(e) => return Err(e),
        }
    }
    if sent.is_empty() {
        return Err(Error::AllInfeasible("no ULA symbol vector admits a precoder".into()));
    }

    let steps = (360.0 / cfg.grid_step_deg).round() as usize;
    let points = (0..steps)
        .into_par_iter()
        .map(|k| {
            let theta = k as f64 * cfg.grid_step_deg;
            let h = ula_los(&[theta - cfg.axis_deg], cfg.n_t, cfg.spacing);
            let (user, distance_deg) = nearest(&cfg.user_angles_deg, theta);
            let mut noise_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            noise_rng.set_stream(k as u64 + 1);
            let mut errors = 0usize;
            for (w, idx) in &sent {
                let y = awgn_from(&mut noise_rng, &(&h * w), cfg.noise_var)?;
                if c.detect(y[0]) != idx[user] {
                    errors += 1;
                }
            }
            Ok(UlaPoint {
                angle_deg: theta,
                ser: errors as f64 / sent.len() as f64,
                nearest_user: user,
                distance_deg,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UlaProfile {
        points,
        symbols: sent.len(),
        infeasible,
    })
}

/// Writes `angle_deg,ser,nearest_user,distance_deg`.
pub fn write_ula_csv<W: std::io::Write>(p: &UlaProfile, out: W) -> Result<()> {
    use super::report::fmt_f64;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["angle_deg", "ser", "nearest_user", "distance_deg"])?;
    for pt in &p.points {
        w.write_record([
            fmt_f64(pt.angle_deg),
            fmt_f64(pt.ser),
            pt.nearest_user.to_string(),
            fmt_f64(pt.distance_deg),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circular_distances() {
        assert_eq!(circular_distance(10.0, 350.0), 20.0);
        assert_eq!(circular_distance(0.0, 180.0), 180.0);
        assert_eq!(nearest(&[10.0, 310.0], 330.0), (1, 20.0));
    }

    #[test]
    fn rotated_axis_separates_mirrored_users() {
        // 50° and 310° mirror each other about a 0° axis.
        let plain = ula_los(&[50.0, 310.0], 5, 0.5);
        assert!((plain.row(0) - plain.row(1)).camax() < 1e-12);
        let rot = ula_los(&[40.0, 300.0], 5, 0.5);
        assert!((rot.row(0) - rot.row(1)).camax() > 0.1);
    }

    #[test]
    fn small_profile_dips_at_users() {
        let cfg = UlaConfig {
            symbols: 400,
            grid_step_deg: 5.0,
            ..UlaConfig::default()
        };
        let p = ula_scenario(&cfg).unwrap();
        assert_eq!(p.points.len(), 72);
        for &a in &cfg.user_angles_deg {
            assert!(p.at(a).ser < 0.05, "{a}: {}", p.at(a).ser);
        }
        assert_eq!(p, ula_scenario(&cfg).unwrap());
    }
}
