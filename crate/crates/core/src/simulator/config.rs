//! Scenario configuration and its TOML file format.
//!
//! A config file holds one table per scenario:
//!
//! ```toml
//! [strong_eve]
//! n_t = 16
//! n_e = 18
//! user_antenna_counts = [1, 1, 1, 1, 1, 1, 1, 1, 1, 1]
//! gamma_db = 15.56
//! design = "signal_level"
//! eve_strategies = ["zf", "mmse"]
//! sweep = { param = "n_t", values = [12.0, 14.0, 16.0] }
//! ```
//!
//! Unknown keys are rejected. Omitted keys take the [`ScenarioConfig::default`] values.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::eavesdropper::{CwProtocol, MmseForm, DEFAULT_TABLE_CAP};
use crate::precoder::DesignMode;
use crate::solvers::{PenaltyConfig, SolverKind};
use crate::{Error, Result};

/// Transmit scheme under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignChoice {
    PowerFixed,
    PowerRelaxed,
    SignalLevel,
    /// Block-level ZF transmit precoding.
    Benchmark,
}

impl DesignChoice {
    pub const ALL: [DesignChoice; 4] = [
        DesignChoice::PowerFixed,
        DesignChoice::PowerRelaxed,
        DesignChoice::SignalLevel,
        DesignChoice::Benchmark,
    ];

    pub fn mode(self) -> Option<DesignMode> {
        match self {
            DesignChoice::PowerFixed => Some(DesignMode::PowerFixed),
            DesignChoice::PowerRelaxed => Some(DesignMode::PowerRelaxed),
            DesignChoice::SignalLevel => Some(DesignMode::SignalLevel),
            DesignChoice::Benchmark => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DesignChoice::PowerFixed => "power_fixed",
            DesignChoice::PowerRelaxed => "power_relaxed",
            DesignChoice::SignalLevel => "signal_level",
            DesignChoice::Benchmark => "benchmark",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    Nnls,
    Iterative,
}

impl From<SolverChoice> for SolverKind {
    fn from(s: SolverChoice) -> Self {
        match s {
            SolverChoice::Nnls => SolverKind::Nnls,
            SolverChoice::Iterative => SolverKind::Iterative,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EveStrategy {
    Zf,
    Mmse,
    BruteForce,
    /// Alternate closed-form MMSE gain; needs `N_e = N_t`.
    MmseAlternate,
}

impl EveStrategy {
    pub const ALL: [EveStrategy; 4] = [
        EveStrategy::Zf,
        EveStrategy::Mmse,
        EveStrategy::BruteForce,
        EveStrategy::MmseAlternate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EveStrategy::Zf => "zf",
            EveStrategy::Mmse => "mmse",
            EveStrategy::BruteForce => "bf",
            EveStrategy::MmseAlternate => "mmse_alt",
        }
    }
}

/// Parameter swept by [`crate::simulator::sweep`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: String,
    pub values: Vec<f64>,
}

/// One Monte Carlo scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n_t: usize,
    pub n_e: usize,
    /// Antennas per user; `N_U` is the sum.
    pub user_antenna_counts: Vec<usize>,
    /// PSK order M.
    pub order: usize,
    /// Requested constellation offset in radians (moved off ±π/2 if needed).
    pub phase_offset: f64,
    pub gamma_db: f64,
    /// Benchmark symbol power β² in dB; defaults to `gamma_db`.
    pub beta2_db: Option<f64>,
    pub noise_var_users: f64,
    pub noise_var_eve: f64,
    pub design: DesignChoice,
    pub solver: SolverChoice,
    pub eve_strategies: Vec<EveStrategy>,
    /// Channel draws.
    pub trials: usize,
    pub symbols_per_channel: usize,
    pub base_seed: u64,
    pub sweep: Option<SweepSpec>,
    /// Precoder samples per channel for the MMSE covariance.
    pub cw_samples: usize,
    pub cw_randomize_channel: bool,
    pub mmse_textbook: bool,
    pub table_cap: usize,
    pub eta: f64,
    pub max_iterations: usize,
    /// Keep per-antenna received SNR for every designed symbol vector.
    pub record_snr: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_t: 16,
            n_e: 15,
            user_antenna_counts: vec![1; 10],
            order: 8,
            phase_offset: 0.0,
            gamma_db: 15.56,
            beta2_db: None,
            noise_var_users: 1.0,
            noise_var_eve: 1.0,
            design: DesignChoice::PowerFixed,
            solver: SolverChoice::Nnls,
            eve_strategies: vec![EveStrategy::Zf],
            trials: 200,
            symbols_per_channel: 50,
            base_seed: 1,
            sweep: None,
            cw_samples: 500,
            cw_randomize_channel: false,
            mmse_textbook: true,
            table_cap: DEFAULT_TABLE_CAP,
            eta: 1e6,
            max_iterations: 10_000,
            record_snr: false,
        }
    }
}

impl ScenarioConfig {
    pub fn n_u(&self) -> usize {
        self.user_antenna_counts.iter().sum()
    }

    pub fn gamma(&self) -> f64 {
        crate::db_to_linear(self.gamma_db)
    }

    pub fn beta(&self) -> f64 {
        crate::db_to_linear(self.beta2_db.unwrap_or(self.gamma_db)).sqrt()
    }

    pub fn penalty(&self) -> PenaltyConfig {
        PenaltyConfig {
            eta: self.eta,
            max_iterations: self.max_iterations,
            ..PenaltyConfig::default()
        }
    }

    pub fn cw_protocol(&self) -> CwProtocol {
        if self.cw_randomize_channel {
            CwProtocol::ChannelRandomized
        } else {
            CwProtocol::FixedChannel
        }
    }

    pub fn mmse_form(&self) -> MmseForm {
        if self.mmse_textbook {
            MmseForm::Textbook
        } else {
            MmseForm::Alternate
        }
    }

    /// Checks the invariants that do not depend on random draws.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n_t == 0 || self.n_e == 0 || self.n_u() == 0 {
            return bad(format!("antenna counts must be positive (N_t = {}, N_e = {}, N_U = {})", self.n_t, self.n_e, self.n_u()));
        }
        if self.user_antenna_counts.contains(&0) {
            return bad("every user needs at least one antenna".into());
        }
        if self.order < 2 {
            return Err(Error::InvalidOrder(self.order));
        }
        if !self.gamma_db.is_finite() || !self.beta2_db.unwrap_or(0.0).is_finite() {
            return bad("gamma_db and beta2_db must be finite".into());
        }
        if self.trials == 0 || self.symbols_per_channel == 0 {
            return bad("trials and symbols_per_channel must be >= 1".into());
        }
        if !(self.noise_var_users >= 0.0) || !(self.noise_var_eve >= 0.0) {
            return bad("noise variances must be >= 0".into());
        }
        if self.eve_strategies.contains(&EveStrategy::BruteForce) {
            let need = (self.order as f64).powi(self.n_u() as i32);
            if need > self.table_cap as f64 {
                return bad(format!(
                    "brute force needs {need} table entries, cap is {}",
                    self.table_cap
                ));
            }
        }
        if self.eve_strategies.contains(&EveStrategy::Mmse) && self.design != DesignChoice::Benchmark && self.cw_samples < 2 {
            return bad("cw_samples must be >= 2 for the MMSE attack".into());
        }
        if self.eve_strategies.contains(&EveStrategy::MmseAlternate) {
            let dim = if self.design == DesignChoice::Benchmark { self.n_u() } else { self.n_t };
            if self.n_e != dim {
                return bad(format!("mmse_alternate needs N_e = {dim}, got {}", self.n_e));
            }
        }
        self.penalty().validate()
    }

    /// Sets a sweepable parameter by name.
    ///
    /// Accepted names (case-insensitive): `n_t`/`nt`, `n_e`/`ne`, `n_u`/`nu`
    /// (that many single-antenna users), `gamma_db`/`gamma`, `beta2_db`,
    /// `order`/`m`, `noise_var` (users and eavesdropper), `noise_var_users`,
    /// `noise_var_eve`, `trials`, `symbols_per_channel`.
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        let as_count = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::Config(format!("{name} needs a non-negative integer, got {v}")))
            }
        };
        match name.to_ascii_lowercase().as_str() {
            "n_t" | "nt" => self.n_t = as_count(value)?,
            "n_e" | "ne" => self.n_e = as_count(value)?,
            "n_u" | "nu" => self.user_antenna_counts = vec![1; as_count(value)?],
            "gamma_db" | "gamma" => self.gamma_db = value,
            "beta2_db" => self.beta2_db = Some(value),
            "order" | "m" => self.order = as_count(value)?,
            "noise_var" | "sigma2" => {
                self.noise_var_users = value;
                self.noise_var_eve = value;
            }
            "noise_var_users" => self.noise_var_users = value,
            "noise_var_eve" => self.noise_var_eve = value,
            "trials" => self.trials = as_count(value)?,
            "symbols_per_channel" => self.symbols_per_channel = as_count(value)?,
            other => return Err(Error::Config(format!("unknown sweep parameter {other:?}"))),
        }
        Ok(())
    }
}

/// Parses a config file: one table per scenario, in name order.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, ScenarioConfig>> {
    let map: BTreeMap<String, ScenarioConfig> =
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    if map.is_empty() {
        return Err(Error::Config("config defines no scenario".into()));
    }
    for (name, cfg) in &map {
        cfg.validate()
            .map_err(|e| Error::Config(format!("scenario {name}: {e}")))?;
    }
    Ok(map)
}

/// Parses `a..b` (inclusive, step 1), `a..b:step`, or a comma list.
pub fn parse_values(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::Config(format!("bad number {s:?}: {e}")))
    };
    let spec = spec.trim();
    if let Some((lo, rest)) = spec.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((h, s)) => (num(h)?, num(s)?),
            None => (num(rest)?, 1.0),
        };
        let lo = num(lo)?;
        if !(step > 0.0) || hi < lo {
            return Err(Error::Config(format!("bad range {spec:?}")));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|k| lo + k as f64 * step).collect());
    }
    let v: Vec<f64> = spec.split(',').map(num).collect::<Result<_>>()?;
    if v.is_empty() {
        return Err(Error::Config("empty value list".into()));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_example() {
        let text = r#"
            [a]
            n_t = 12
            n_e = 13
            user_antenna_counts = [2, 2, 2]
            design = "power_relaxed"
            eve_strategies = ["zf", "mmse"]
            sweep = { param = "gamma_db", values = [5.0, 10.0] }

            [b]
            design = "benchmark"
        "#;
        let m = parse_config(text).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m["a"].n_u(), 6);
        assert_eq!(m["a"].design, DesignChoice::PowerRelaxed);
        assert_eq!(m["a"].sweep.as_ref().unwrap().values, vec![5.0, 10.0]);
        assert_eq!(m["b"].n_t, 16);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(parse_config("[a]\nn_tx = 4\n").is_err());
        assert!(parse_config("[a]\nsweep = { param = \"n_t\", values = [1.0], step = 2 }\n").is_err());
    }

    #[test]
    fn rejects_oversized_brute_force() {
        let err = parse_config("[a]\neve_strategies = [\"brute_force\"]\n").unwrap_err();
        assert!(err.to_string().contains("table"));
    }

    #[test]
    fn value_specs() {
        assert_eq!(parse_values("10..13").unwrap(), vec![10.0, 11.0, 12.0, 13.0]);
        assert_eq!(parse_values("0..1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_values("1, 4,9").unwrap(), vec![1.0, 4.0, 9.0]);
        assert!(parse_values("5..1").is_err());
        assert!(parse_values("x").is_err());
    }

    #[test]
    fn set_params() {
        let mut c = ScenarioConfig::default();
        c.set_param("Nt", 20.0).unwrap();
        c.set_param("nu", 4.0).unwrap();
        c.set_param("noise_var", 0.5).unwrap();
        assert_eq!((c.n_t, c.n_u()), (20, 4));
        assert_eq!((c.noise_var_users, c.noise_var_eve), (0.5, 0.5));
        assert!(c.set_param("nt", 2.5).is_err());
        assert!(c.set_param("bogus", 1.0).is_err());
    }

    #[test]
    fn beta_follows_gamma() {
        let c = ScenarioConfig::default();
        assert!((c.beta() * c.beta() - c.gamma()).abs() < 1e-12);
        assert!((c.gamma() - 35.975).abs() < 0.01);
    }
}
