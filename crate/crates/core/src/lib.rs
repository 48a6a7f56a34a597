//! Symbol-level directional modulation for multi-user MIMO downlinks.
//!
//! The transmitter recomputes its antenna weights `w` for every symbol
//! vector so that each user antenna directly receives its intended M-PSK
//! point, while an eavesdropper with a different channel sees a scrambled
//! constellation. This crate provides:
//!
//! - [`modulation`]: M-PSK constellations, per-antenna detection, and the
//!   wedge geometry used by the relaxed-phase design.
//! - [`channel`]: Rayleigh and line-of-sight ULA channels, AWGN, the
//!   real/imaginary stacking transform, and CSV channel dumps.
//! - [`precoder`]: the three design problems (fixed-phase power
//!   minimization, relaxed-phase power minimization, signal-level
//!   minimization) in null-space-reduced form, plus solution assembly and
//!   constraint verification.
//! - [`solvers`]: the alternating penalty iteration, Lawson-Hanson NNLS,
//!   pseudo-inverse/Cholesky helpers, and an exhaustive active-set oracle.
//! - [`eavesdropper`]: ZF, MMSE, and brute-force maximum-likelihood attacks
//!   and the associated complexity counts.
//! - [`benchmark`]: conventional ZF transmit precoding and its attacks.
//! - [`simulator`]: Monte Carlo scenarios, sweeps, figure presets, and CSV
//!   reports.
//!
//! Successive interference cancellation and sphere decoding are not offered
//! as attacks: both rely on a finite alphabet for the unknown, while the
//! eavesdropper's unknown here is the continuous-valued precoder `w`.
//!
//! ```
//! use dirmod::channel::rayleigh;
//! use dirmod::modulation::Constellation;
//! use dirmod::precoder::{design, DesignMode};
//! use dirmod::solvers::{PenaltyConfig, SolverKind};
//!
//! let psk = Constellation::new(8, 0.0).unwrap();
//! let h_u = rayleigh(4, 6, 7);
//! let s = psk.symbols(&[0, 3, 5, 6]);
//! let sol = design(&h_u, &s, 10.0, DesignMode::PowerFixed, SolverKind::Nnls, &PenaltyConfig::default(), psk.order())
//!     .unwrap();
//! assert!(sol.report.feasible);
//! ```

// `!(x > 0.0)` style checks are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmark;
pub mod channel;
pub mod eavesdropper;
pub mod error;
pub mod modulation;
pub mod precoder;
pub mod simulator;
pub mod solvers;

pub use error::{Error, Result};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Complex dense matrix.
pub type CMatrix = DMatrix<Complex64>;
/// Complex dense vector.
pub type CVector = DVector<Complex64>;
/// Real dense matrix.
pub type RMatrix = DMatrix<f64>;
/// Real dense vector.
pub type RVector = DVector<f64>;

/// Converts a power ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to dB.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
