//! Eavesdropper attacks: ZF and MMSE estimation of the precoder, brute-force
//! maximum likelihood over a precomputed lookup table, and complexity counts.
//!
//! Every attack estimates `w` first and then decodes all users by mapping
//! the estimate through `H_U` and running the per-antenna detector.
//! Successive interference cancellation and sphere decoding are absent on
//! purpose: both search a finite alphabet, and `w` is continuous-valued.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use nalgebra::Cholesky;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::rayleigh_from;
use crate::modulation::Constellation;
use crate::precoder::{design, DesignMode};
use crate::solvers::{PenaltyConfig, SolverKind};
use crate::{CMatrix, CVector, Error, Result};

/// What the eavesdropper receives and knows.
#[derive(Clone, Debug)]
pub struct EveObservation {
    pub y_e: CVector,
    pub h_e: CMatrix,
    pub h_u: CMatrix,
    pub noise_var: f64,
}

fn cond_c(a: &CMatrix) -> f64 {
    let s = a.clone().singular_values();
    let lo = s.min();
    if lo == 0.0 {
        f64::INFINITY
    } else {
        s.max() / lo
    }
}

/// `G₁ = (H_EᴴH_E)⁻¹H_Eᴴ`; requires `N_e ≥ N_t`.
pub fn zf_matrix(h_e: &CMatrix) -> Result<CMatrix> {
    let (n_e, n_t) = h_e.shape();
    if n_e < n_t {
        return Err(Error::Capability(format!(
            "ZF needs N_e >= N_t (N_e = {n_e}, N_t = {n_t}): H_E has no left inverse"
        )));
    }
    let gram = h_e.adjoint() * h_e;
    let chol = Cholesky::new(gram.clone())
        .ok_or_else(|| Error::numerical("H_E^H H_E is singular", cond_c(&gram)))?;
    Ok(chol.solve(&h_e.adjoint()))
}

/// Minimum-norm ZF `H_E†`, defined for any `N_e`.
///
/// Equal to [`zf_matrix`] when `N_e ≥ N_t`; below that it recovers only the
/// component of `w` in the row space of `H_E`.
pub fn min_norm_zf_matrix(h_e: &CMatrix) -> CMatrix {
    let (m, n) = h_e.shape();
    if m >= n {
        if let Ok(g) = zf_matrix(h_e) {
            return g;
        }
    } else if let Some(chol) = Cholesky::new(h_e * h_e.adjoint()) {
        // Full row rank: H_E† = H_Eᴴ(H_E H_Eᴴ)⁻¹.
        return chol.solve(h_e).adjoint();
    }
    let svd = h_e.clone().svd(true, true);
    let tol = f64::EPSILON * m.max(n) as f64 * svd.singular_values.max();
    svd.pseudo_inverse(tol).expect("u and v_t were computed")
}

/// `ŵ = G₁ y_E`.
pub fn zf_estimate(obs: &EveObservation) -> Result<CVector> {
    Ok(zf_matrix(&obs.h_e)? * &obs.y_e)
}

/// Signals the eavesdropper would see at the user antennas: `H_U ŵ`.
pub fn map_to_users(h_u: &CMatrix, w_hat: &CVector) -> CVector {
    h_u * w_hat
}

/// Symbol decisions for all users from an estimate of `w`.
pub fn decode_users(h_u: &CMatrix, w_hat: &CVector, c: &Constellation) -> Vec<usize> {
    c.detect_all(&map_to_users(h_u, w_hat))
}

/// Empirical mean and covariance of designed precoders.
#[derive(Clone, Debug)]
pub struct WCovariance {
    pub c_w: CMatrix,
    pub mean: CVector,
    pub sample_count: usize,
    /// Symbol draws skipped because the design was infeasible.
    pub skipped: usize,
}

impl WCovariance {
    /// Covariance `c·I` with zero mean, for synthetic tests.
    pub fn scaled_identity(n_t: usize, c: f64) -> Self {
        Self {
            c_w: CMatrix::identity(n_t, n_t) * Complex64::new(c, 0.0),
            mean: CVector::zeros(n_t),
            sample_count: 0,
            skipped: 0,
        }
    }

    /// Mean and Hermitian-symmetrized covariance of `samples`.
    pub fn from_samples(samples: &[CVector]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidParameter("covariance needs at least 2 samples".into()));
        }
        let n = samples[0].len();
        let k = samples.len() as f64;
        let mean = samples.iter().fold(CVector::zeros(n), |acc, w| acc + w) / Complex64::new(k, 0.0);
        let mut c = CMatrix::zeros(n, n);
        for w in samples {
            let d = w - &mean;
            c += &d * d.adjoint();
        }
        c /= Complex64::new(k - 1.0, 0.0);
        let c_w = (&c + c.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(Self {
            c_w,
            mean,
            sample_count: samples.len(),
            skipped: 0,
        })
    }
}

/// How `C_w` is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CwProtocol {
    /// Channel held fixed, symbols redrawn (the eavesdropper knows the channels).
    #[default]
    FixedChannel,
    /// Fresh Rayleigh `H_U` of the same shape for each sample.
    ChannelRandomized,
}

/// Designs `samples` precoders for random symbol vectors and returns their covariance.
#[allow(clippy::too_many_arguments)]
pub fn estimate_c_w(
    mode: DesignMode,
    h_u: &CMatrix,
    gamma: f64,
    c: &Constellation,
    samples: usize,
    seed: u64,
    protocol: CwProtocol,
    solver: SolverKind,
    cfg: &PenaltyConfig,
) -> Result<WCovariance> {
    if samples < 2 {
        return Err(Error::InvalidParameter("C_w estimation needs samples >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n_u, n_t) = h_u.shape();
    let mut ws = Vec::with_capacity(samples);
    let mut skipped = 0;
    let mut last_skip = None;
    for _ in 0..samples {
        let h = match protocol {
            CwProtocol::FixedChannel => None,
            CwProtocol::ChannelRandomized => Some(rayleigh_from(&mut rng, n_u, n_t)),
        };
        let idx: Vec<usize> = (0..n_u).map(|_| rng.random_range(0..c.order())).collect();
        let s = c.symbols(&idx);
        match design(h.as_ref().unwrap_or(h_u), &s, gamma, mode, solver, cfg, c.order()) {
            Ok(sol) => ws.push(sol.w),
            Err(e @ (Error::Infeasible | Error::EmptyNullSpace { .. })) => {
                skipped += 1;
                last_skip = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    // Too few feasible draws: report why they failed.
    if ws.len() < 2 {
        if let Some(e) = last_skip {
            return Err(e);
        }
    }
    let mut out = WCovariance::from_samples(&ws)?;
    out.skipped = skipped;
    Ok(out)
}

/// Which closed form the MMSE estimator uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MmseForm {
    /// Linear MMSE: `G = C_w H_Eᴴ(H_E C_w H_Eᴴ + σ²I)⁻¹`, applied around the mean.
    #[default]
    Textbook,
    /// `G₂ = (H_Eᴴ C_w⁻¹ H_E + C_N⁻¹)⁻¹ H_Eᴴ C_w⁻¹`. Conforms only
    /// when `N_e = N_t` and needs `σ² > 0`.
    Alternate,
}

/// A fixed linear estimator `ŵ = w̄ + G(y − H_E w̄)`.
#[derive(Clone, Debug)]
pub struct MmseEstimator {
    pub g: CMatrix,
    pub mean: CVector,
    h_e: CMatrix,
    /// `δI` was added to a rank-deficient `C_w`.
    pub regularized: bool,
    pub form: MmseForm,
}

/// Returns `C_w` or `C_w + δI` (δ = 1e-8·trace/N_t) when `C_w` is not positive definite.
pub fn regularize(c_w: &CMatrix) -> (CMatrix, bool) {
    if Cholesky::new(c_w.clone()).is_some() {
        return (c_w.clone(), false);
    }
    let n = c_w.nrows();
    let tr = c_w.trace().re.max(f64::MIN_POSITIVE);
    let delta = 1e-8 * tr / n as f64;
    (c_w + CMatrix::identity(n, n) * Complex64::new(delta, 0.0), true)
}

impl MmseEstimator {
    pub fn new(h_e: &CMatrix, cov: &WCovariance, noise_var: f64, form: MmseForm) -> Result<Self> {
        let (n_e, n_t) = h_e.shape();
        if cov.c_w.shape() != (n_t, n_t) {
            return Err(Error::dim(format!("C_w is {:?}, need {n_t}x{n_t}", cov.c_w.shape())));
        }
        if !(noise_var >= 0.0) {
            return Err(Error::InvalidParameter(format!("noise variance {noise_var}")));
        }
        let (c_w, regularized) = regularize(&cov.c_w);
        let g = match form {
            MmseForm::Textbook => textbook_gain(h_e, &c_w, noise_var)?,
            MmseForm::Alternate => {
                if n_e != n_t {
                    return Err(Error::dim(format!(
                        "alternate MMSE form needs N_e = N_t (N_e = {n_e}, N_t = {n_t})"
                    )));
                }
                if noise_var == 0.0 {
                    return Err(Error::InvalidParameter("alternate MMSE form needs noise variance > 0".into()));
                }
                let cw_inv = c_w
                    .clone()
                    .try_inverse()
                    .ok_or_else(|| Error::numerical("C_w is singular", cond_c(&c_w)))?;
                let inner = h_e.adjoint() * &cw_inv * h_e
                    + CMatrix::identity(n_e, n_e) * Complex64::new(1.0 / noise_var, 0.0);
                let lu = inner.clone().lu();
                lu.solve(&(h_e.adjoint() * cw_inv))
                    .ok_or_else(|| Error::numerical("MMSE inner matrix is singular", cond_c(&inner)))?
            }
        };
        Ok(Self {
            g,
            mean: cov.mean.clone(),
            h_e: h_e.clone(),
            regularized,
            form,
        })
    }

    /// Wraps a precomputed gain `g` applied around `mean` for the effective channel `h_e`.
    pub fn from_gain(g: CMatrix, mean: CVector, h_e: CMatrix, form: MmseForm) -> Self {
        Self {
            g,
            mean,
            h_e,
            regularized: false,
            form,
        }
    }

    pub fn estimate(&self, y_e: &CVector) -> CVector {
        &self.mean + &self.g * (y_e - &self.h_e * &self.mean)
    }
}

fn textbook_gain(h_e: &CMatrix, c_w: &CMatrix, noise_var: f64) -> Result<CMatrix> {
    let (n_e, n_t) = h_e.shape();
    let nv = Complex64::new(noise_var, 0.0);
    if n_e >= n_t {
        // Information form (H_EᴴH_E + σ²C_w⁻¹)⁻¹H_Eᴴ; tends to ZF as σ² → 0.
        let cw_inv = c_w
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::numerical("C_w is singular", cond_c(c_w)))?;
        let inner = h_e.adjoint() * h_e + cw_inv * nv;
        let lu = inner.clone().lu();
        lu.solve(&h_e.adjoint())
            .ok_or_else(|| Error::numerical("MMSE information matrix is singular", cond_c(&inner)))
    } else {
        let inner = h_e * c_w * h_e.adjoint() + CMatrix::identity(n_e, n_e) * nv;
        let lu = inner.clone().lu();
        let x = lu
            .solve(&(h_e * c_w))
            .ok_or_else(|| Error::numerical("MMSE covariance matrix is singular", cond_c(&inner)))?;
        // G = C_w H_Eᴴ inner⁻¹ = (inner⁻¹ H_E C_w)ᴴ since both factors are Hermitian.
        Ok(x.adjoint())
    }
}

/// `ŵ = G y_E` with the MMSE gain for covariance `cov`.
pub fn mmse_estimate(obs: &EveObservation, cov: &WCovariance, form: MmseForm) -> Result<CVector> {
    Ok(MmseEstimator::new(&obs.h_e, cov, obs.noise_var, form)?.estimate(&obs.y_e))
}

/// Default lookup-table cap.
pub const DEFAULT_TABLE_CAP: usize = 4096;

/// Precomputed precoders and eavesdropper observations for every symbol vector.
#[derive(Clone, Debug)]
pub struct LookupTable {
    /// Entry `i` holds `(w_i, H_E w_i)`, or `None` when the design was infeasible.
    pub entries: Vec<Option<(CVector, CVector)>>,
    pub order: usize,
    pub n_u: usize,
    pub key: u64,
}

/// Symbol indices of lookup entry `i`; user antenna 0 is the most significant digit.
pub fn index_to_symbols(mut i: usize, order: usize, n_u: usize) -> Vec<usize> {
    let mut out = vec![0; n_u];
    for k in (0..n_u).rev() {
        out[k] = i % order;
        i /= order;
    }
    out
}

/// Inverse of [`index_to_symbols`].
pub fn symbols_to_index(idx: &[usize], order: usize) -> usize {
    idx.iter().fold(0, |acc, &d| acc * order + d)
}

fn hash_matrix<H: Hasher>(m: &CMatrix, h: &mut H) {
    m.shape().hash(h);
    for z in m.iter() {
        z.re.to_bits().hash(h);
        z.im.to_bits().hash(h);
    }
}

/// Cache key: changes whenever any channel entry or design input changes.
pub fn channel_key(h_u: &CMatrix, h_e: &CMatrix, gamma: f64, c: &Constellation, mode: DesignMode) -> u64 {
    let mut h = DefaultHasher::new();
    hash_matrix(h_u, &mut h);
    hash_matrix(h_e, &mut h);
    gamma.to_bits().hash(&mut h);
    c.order().hash(&mut h);
    c.offset().to_bits().hash(&mut h);
    mode.hash(&mut h);
    h.finish()
}

/// Table size `M^{N_U}` if it fits under `cap`.
pub fn table_size(order: usize, n_u: usize, cap: usize) -> Result<usize> {
    let required = (order as f64).powi(n_u as i32);
    if required > cap as f64 {
        return Err(Error::TableTooLarge { required, cap });
    }
    Ok(order.pow(n_u as u32))
}

/// Designs one precoder per symbol vector, in lexicographic order.
#[allow(clippy::too_many_arguments)]
pub fn build_lookup(
    h_u: &CMatrix,
    h_e: &CMatrix,
    gamma: f64,
    c: &Constellation,
    mode: DesignMode,
    solver: SolverKind,
    cfg: &PenaltyConfig,
    cap: usize,
) -> Result<LookupTable> {
    let n_u = h_u.nrows();
    let size = table_size(c.order(), n_u, cap)?;
    let mut entries = Vec::with_capacity(size);
    for i in 0..size {
        let s = c.symbols(&index_to_symbols(i, c.order(), n_u));
        match design(h_u, &s, gamma, mode, solver, cfg, c.order()) {
            Ok(sol) => {
                let y = h_e * &sol.w;
                entries.push(Some((sol.w, y)));
            }
            Err(Error::Infeasible) | Err(Error::EmptyNullSpace { .. }) => entries.push(None),
            Err(e) => return Err(e),
        }
    }
    Ok(LookupTable {
        entries,
        order: c.order(),
        n_u,
        key: channel_key(h_u, h_e, gamma, c, mode),
    })
}

/// Lookup tables keyed by [`channel_key`].
#[derive(Default)]
pub struct LookupCache {
    tables: HashMap<u64, Arc<LookupTable>>,
    pub builds: usize,
}

impl LookupCache {
    #[allow(clippy::too_many_arguments)]
    pub fn get_or_build(
        &mut self,
        h_u: &CMatrix,
        h_e: &CMatrix,
        gamma: f64,
        c: &Constellation,
        mode: DesignMode,
        solver: SolverKind,
        cfg: &PenaltyConfig,
        cap: usize,
    ) -> Result<Arc<LookupTable>> {
        let key = channel_key(h_u, h_e, gamma, c, mode);
        if let Some(t) = self.tables.get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(build_lookup(h_u, h_e, gamma, c, mode, solver, cfg, cap)?);
        self.builds += 1;
        self.tables.insert(key, t.clone());
        Ok(t)
    }
}

/// Table entry minimizing `‖y_E − H_E w_i‖`; ties go to the lowest index.
///
/// Returns `(ŵ, ŝ indices)`, or `None` if every entry is infeasible.
pub fn brute_force_ml(y_e: &CVector, table: &LookupTable) -> Option<(CVector, Vec<usize>)> {
    let mut best: Option<(f64, usize)> = None;
    for (i, e) in table.entries.iter().enumerate() {
        if let Some((_, y)) = e {
            let d = (y_e - y).norm_squared();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, i));
            }
        }
    }
    best.map(|(_, i)| {
        let w = table.entries[i].as_ref().expect("feasible entry").0.clone();
        (w, index_to_symbols(i, table.order, table.n_u))
    })
}

/// Cost models with unit constants, for trend comparison only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ComplexityMethod {
    /// Interior-point NNLS: `N_t³ ln(1/ε)`.
    InteriorPoint,
    /// Fast projected gradient NNLS: `N_t² ε^{-1/2}` (unit `λ₀` and start distance).
    FastProjectedGradient,
    /// One residual norm of length `N_e` on `n`-digit operands: `4N_e·n + 2N_e·n^1.465`.
    Norm { digits: f64 },
    /// `M^{N_U}(c_norm + c_design)` with the interior-point design cost.
    BruteForce { digits: f64 },
    /// ZF transmit precoding: `2N_tN_U² + N_U³ + N_tN_U`.
    Benchmark,
}

/// Evaluates the operation-count model for `method`.
pub fn complexity_estimate(
    n_t: usize,
    n_u: usize,
    n_e: usize,
    order: usize,
    epsilon: f64,
    method: ComplexityMethod,
) -> f64 {
    let (nt, nu, ne) = (n_t as f64, n_u as f64, n_e as f64);
    let norm = |n: f64| 4.0 * ne * n + 2.0 * ne * n.powf(1.465);
    match method {
        ComplexityMethod::InteriorPoint => nt.powi(3) * (1.0 / epsilon).ln(),
        ComplexityMethod::FastProjectedGradient => nt * nt / epsilon.sqrt(),
        ComplexityMethod::Norm { digits } => norm(digits),
        ComplexityMethod::BruteForce { digits } => {
            brute_force_count(order, n_u) * (norm(digits) + nt.powi(3) * (1.0 / epsilon).ln())
        }
        ComplexityMethod::Benchmark => 2.0 * nt * nu * nu + nu.powi(3) + nt * nu,
    }
}

/// `M^{N_U}` as a float.
pub fn brute_force_count(order: usize, n_u: usize) -> f64 {
    (order as f64).powi(n_u as i32)
}

/// `log2(M^{N_U}) = N_U·log2 M`.
pub fn brute_force_log2(order: usize, n_u: usize) -> f64 {
    n_u as f64 * (order as f64).log2()
}
