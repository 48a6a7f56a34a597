//! Conventional ZF transmit precoding and the eavesdropper attacks against it.
//!
//! The transmitter sends `x = β·W·s` with `W = H_Uᴴ(H_U H_Uᴴ)⁻¹`, so every
//! user antenna receives `β·s_n` plus noise. `W` depends only on the channel
//! and is reused for the whole block. The eavesdropper sees the effective
//! channel `H_E·W` and estimates `β·s` directly.

use nalgebra::Cholesky;
use num_complex::Complex64;

use crate::eavesdropper::MmseForm;
use crate::{CMatrix, CVector, Error, Result};

fn cond_c(a: &CMatrix) -> f64 {
    let s = a.clone().singular_values();
    if s.min() == 0.0 {
        f64::INFINITY
    } else {
        s.max() / s.min()
    }
}

/// `W = H_Uᴴ(H_U H_Uᴴ)⁻¹`; rejects `N_t < N_U` and rank-deficient channels.
pub fn zf_transmit(h_u: &CMatrix) -> Result<CMatrix> {
    let (n_u, n_t) = h_u.shape();
    if n_t < n_u {
        return Err(Error::Capability(format!(
            "ZF transmit precoding needs N_t >= N_U (N_t = {n_t}, N_U = {n_u})"
        )));
    }
    let gram = h_u * h_u.adjoint();
    let s = gram.clone().singular_values();
    if s.min() <= 1e-12 * s.max() {
        return Err(Error::numerical("H_U is rank deficient", cond_c(&gram)));
    }
    let chol = Cholesky::new(gram.clone()).ok_or_else(|| Error::numerical("H_U H_U^H not PD", cond_c(&gram)))?;
    // W = H_Uᴴ G⁻¹ = (G⁻¹ H_U)ᴴ with G Hermitian.
    Ok(chol.solve(h_u).adjoint())
}

/// A ZF-precoded downlink with symbol amplification `β`.
#[derive(Clone, Debug)]
pub struct BenchmarkLink {
    pub w: CMatrix,
    pub beta: f64,
}

impl BenchmarkLink {
    pub fn new(h_u: &CMatrix, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        Ok(Self {
            w: zf_transmit(h_u)?,
            beta,
        })
    }

    /// Transmit vector `β·W·s`.
    pub fn transmit(&self, s: &CVector) -> CVector {
        &self.w * s * Complex64::new(self.beta, 0.0)
    }

    /// `‖β·W·s‖²`.
    pub fn power(&self, s: &CVector) -> f64 {
        self.transmit(s).norm_squared()
    }
}

/// `[(H_E W)ᴴ H_E W]⁻¹(H_E W)ᴴ`; requires `N_e ≥ N_U`.
pub fn bench_zf_matrix(h_e: &CMatrix, w: &CMatrix) -> Result<CMatrix> {
    let n_e = h_e.nrows();
    let n_u = w.ncols();
    if n_e < n_u {
        return Err(Error::Capability(format!(
            "benchmark ZF attack needs N_e >= N_U (N_e = {n_e}, N_U = {n_u})"
        )));
    }
    let f = h_e * w;
    let gram = f.adjoint() * &f;
    let chol = Cholesky::new(gram.clone())
        .ok_or_else(|| Error::numerical("(H_E W)^H H_E W is singular", cond_c(&gram)))?;
    Ok(chol.solve(&f.adjoint()))
}

/// Estimate of `β·s` from `y_E`.
pub fn bench_eve_zf(h_e: &CMatrix, w: &CMatrix, y_e: &CVector) -> Result<CVector> {
    Ok(bench_zf_matrix(h_e, w)? * y_e)
}

/// Linear MMSE gain for `β·s` with symbol covariance `c_s` (`N_U × N_U`).
pub fn bench_mmse_matrix(h_e: &CMatrix, w: &CMatrix, c_s: &CMatrix, noise_var: f64, form: MmseForm) -> Result<CMatrix> {
    let n_e = h_e.nrows();
    let n_u = w.ncols();
    if c_s.shape() != (n_u, n_u) {
        return Err(Error::dim(format!("symbol covariance is {:?}, need {n_u}x{n_u}", c_s.shape())));
    }
    let f = h_e * w;
    let nv = Complex64::new(noise_var, 0.0);
    match form {
        MmseForm::Textbook => {
            let inner = &f * c_s * f.adjoint() + CMatrix::identity(n_e, n_e) * nv;
            let x = inner
                .clone()
                .lu()
                .solve(&(&f * c_s))
                .ok_or_else(|| Error::numerical("benchmark MMSE matrix is singular", cond_c(&inner)))?;
            Ok(x.adjoint())
        }
        MmseForm::Alternate => {
            if n_e != n_u {
                return Err(Error::dim(format!(
                    "alternate benchmark MMSE form needs N_e = N_U (N_e = {n_e}, N_U = {n_u})"
                )));
            }
            if noise_var == 0.0 {
                return Err(Error::InvalidParameter("alternate MMSE form needs noise variance > 0".into()));
            }
            let cs_inv = c_s
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::numerical("C_w is singular", cond_c(c_s)))?;
            let inner = f.adjoint() * &cs_inv * &f + CMatrix::identity(n_u, n_u) / nv;
            inner
                .clone()
                .lu()
                .solve(&(f.adjoint() * cs_inv))
                .ok_or_else(|| Error::numerical("benchmark MMSE matrix is singular", cond_c(&inner)))
        }
    }
}

/// MMSE estimate of `β·s`.
pub fn bench_eve_mmse(
    h_e: &CMatrix,
    w: &CMatrix,
    y_e: &CVector,
    c_s: &CMatrix,
    noise_var: f64,
    form: MmseForm,
) -> Result<CVector> {
    Ok(bench_mmse_matrix(h_e, w, c_s, noise_var, form)? * y_e)
}

/// Covariance `β²·I` of i.i.d. unit-energy PSK symbols scaled by β.
pub fn symbol_covariance(n_u: usize, beta: f64) -> CMatrix {
    CMatrix::identity(n_u, n_u) * Complex64::new(beta * beta, 0.0)
}
