//! Result rows and their CSV encoding.
//!
//! Scenario CSV columns, in order:
//!
//! | column | meaning |
//! |---|---|
//! | `label` | scenario name |
//! | `sweep_param`, `sweep_value` | swept parameter and its value (empty without a sweep) |
//! | `design`, `solver` | transmit scheme and QP back end |
//! | `n_t`, `n_u`, `n_e`, `order`, `gamma_db` | point parameters |
//! | `trials`, `symbol_vectors` | channel draws and total symbol vectors |
//! | `infeasible` | symbol vectors skipped because no precoder could be designed |
//! | `violations` | designed precoders failing the constraint check |
//! | `mean_power`, `mean_power_db`, `power_stderr` | transmit power `‖x‖²` over designed vectors |
//! | `mean_rx_power` | `‖H_U x‖²` |
//! | `ser_users`, `ser_users_stderr` | user symbol error rate and its binomial standard error |
//! | `ser_eve_zf`, `ser_eve_mmse`, `ser_eve_bf`, `ser_eve_mmse_alt` | eavesdropper SER per attack (empty when not run) |
//! | `mean_iterations` | mean solver iterations per design |
//! | `eve_zf_min_norm` | 1 when the ZF attack fell back to the pseudo-inverse |
//!
//! Floats are written with 9 significant digits.

use std::io::Write;

use serde::Serialize;

use super::config::{DesignChoice, SolverChoice};
use crate::Result;

/// Per-antenna received SNR of one designed symbol vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SnrTrace {
    pub trial: usize,
    pub vector: usize,
    pub snr_db: Vec<f64>,
    /// Every receive constraint holds with equality.
    pub all_bind: bool,
}

/// Aggregates for one scenario point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointReport {
    pub label: String,
    pub sweep_param: Option<String>,
    pub sweep_value: Option<f64>,
    pub design: DesignChoice,
    pub solver: SolverChoice,
    pub n_t: usize,
    pub n_u: usize,
    pub n_e: usize,
    pub order: usize,
    pub gamma_db: f64,
    pub trials: usize,
    pub symbol_vectors: usize,
    pub infeasible: usize,
    pub violations: usize,
    pub mean_power: f64,
    pub power_stderr: f64,
    pub mean_rx_power: f64,
    pub ser_users: f64,
    pub ser_users_stderr: f64,
    pub ser_eve_zf: Option<f64>,
    pub ser_eve_mmse: Option<f64>,
    pub ser_eve_bf: Option<f64>,
    pub ser_eve_mmse_alt: Option<f64>,
    pub mean_iterations: f64,
    pub eve_zf_min_norm: bool,
    pub snr_traces: Vec<SnrTrace>,
}

impl PointReport {
    pub fn mean_power_db(&self) -> f64 {
        crate::linear_to_db(self.mean_power)
    }

    /// Fraction of symbol vectors that produced a precoder.
    pub fn feasibility_rate(&self) -> f64 {
        (self.symbol_vectors - self.infeasible) as f64 / self.symbol_vectors as f64
    }
}

pub const COLUMNS: [&str; 26] = [
    "label",
    "sweep_param",
    "sweep_value",
    "design",
    "solver",
    "n_t",
    "n_u",
    "n_e",
    "order",
    "gamma_db",
    "trials",
    "symbol_vectors",
    "infeasible",
    "violations",
    "mean_power",
    "mean_power_db",
    "power_stderr",
    "mean_rx_power",
    "ser_users",
    "ser_users_stderr",
    "ser_eve_zf",
    "ser_eve_mmse",
    "ser_eve_bf",
    "ser_eve_mmse_alt",
    "mean_iterations",
    "eve_zf_min_norm",
];

/// 9 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.8e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn solver_name(s: SolverChoice) -> &'static str {
    match s {
        SolverChoice::Nnls => "nnls",
        SolverChoice::Iterative => "iterative",
    }
}

fn record(r: &PointReport) -> Vec<String> {
    vec![
        r.label.clone(),
        r.sweep_param.clone().unwrap_or_default(),
        opt(r.sweep_value),
        r.design.name().to_string(),
        solver_name(r.solver).to_string(),
        r.n_t.to_string(),
        r.n_u.to_string(),
        r.n_e.to_string(),
        r.order.to_string(),
        fmt_f64(r.gamma_db),
        r.trials.to_string(),
        r.symbol_vectors.to_string(),
        r.infeasible.to_string(),
        r.violations.to_string(),
        fmt_f64(r.mean_power),
        fmt_f64(r.mean_power_db()),
        fmt_f64(r.power_stderr),
        fmt_f64(r.mean_rx_power),
        fmt_f64(r.ser_users),
        fmt_f64(r.ser_users_stderr),
        opt(r.ser_eve_zf),
        opt(r.ser_eve_mmse),
        opt(r.ser_eve_bf),
        opt(r.ser_eve_mmse_alt),
        fmt_f64(r.mean_iterations),
        u8::from(r.eve_zf_min_norm).to_string(),
    ]
}

/// Writes a header and one row per report.
pub fn write_reports<W: Write>(rows: &[PointReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record(record(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes SNR traces as `label,sweep_value,trial,vector,antenna,snr_db,all_bind`.
pub fn write_snr_traces<W: Write>(rows: &[PointReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["label", "sweep_value", "trial", "vector", "antenna", "snr_db", "all_bind"])?;
    for r in rows {
        for t in &r.snr_traces {
            for (a, s) in t.snr_db.iter().enumerate() {
                w.write_record([
                    r.label.clone(),
                    opt(r.sweep_value),
                    t.trial.to_string(),
                    t.vector.to_string(),
                    a.to_string(),
                    fmt_f64(*s),
                    u8::from(t.all_bind).to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
