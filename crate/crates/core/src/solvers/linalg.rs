//! Dense factorization helpers: pseudo-inverse, Cholesky, null spaces, square-root factors.

use nalgebra::{Cholesky, SymmetricEigen, SVD};

use crate::{Error, RMatrix, RVector, Result};

/// Thin SVD `A = U·diag(s)·Vᵀ` with `s` descending; `k = min(m, n)` columns.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: RMatrix,
    pub s: RVector,
    pub v: RMatrix,
}

impl Svd {
    /// `Σ_{σ_i > tol} v_i u_iᵀ b / σ_i`.
    pub fn solve(&self, b: &RVector, tol: f64) -> RVector {
        let mut x = RVector::zeros(self.v.nrows());
        for i in 0..self.s.len() {
            if self.s[i] > tol {
                let c = self.u.column(i).dot(b) / self.s[i];
                x.axpy(c, &self.v.column(i), 1.0);
            }
        }
        x
    }

    pub fn pseudo_inverse(&self, tol: f64) -> RMatrix {
        let mut p = RMatrix::zeros(self.v.nrows(), self.u.nrows());
        for i in 0..self.s.len() {
            if self.s[i] > tol {
                p.ger(1.0 / self.s[i], &self.v.column(i), &self.u.column(i), 1.0);
            }
        }
        p
    }

    fn sorted(u: RMatrix, s: RVector, v: RMatrix) -> Self {
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
        Self {
            u: u.select_columns(&order),
            s: RVector::from_iterator(s.len(), order.iter().map(|&i| s[i])),
            v: v.select_columns(&order),
        }
    }

    fn residual(&self, a: &RMatrix) -> f64 {
        let us = RMatrix::from_fn(self.u.nrows(), self.s.len(), |r, c| self.u[(r, c)] * self.s[c]);
        (us * self.v.transpose() - a).amax()
    }
}

/// One-sided Jacobi SVD of a matrix with `m ≥ n`.
fn jacobi_tall(a: &RMatrix) -> Svd {
    let (m, n) = a.shape();
    let mut u = a.clone();
    let mut v = RMatrix::identity(n, n);
    let rotate = |x: &mut RMatrix, i: usize, j: usize, c: f64, s: f64| {
        for r in 0..x.nrows() {
            let (p, q) = (x[(r, i)], x[(r, j)]);
            x[(r, i)] = c * p - s * q;
            x[(r, j)] = s * p + c * q;
        }
    };
    for _ in 0..60 {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let alpha = u.column(i).norm_squared();
                let beta = u.column(j).norm_squared();
                let gamma = u.column(i).dot(&u.column(j));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                rotate(&mut u, i, j, c, c * t);
                rotate(&mut v, i, j, c, c * t);
            }
        }
        if !rotated {
            break;
        }
    }
    let s = RVector::from_iterator(n, (0..n).map(|i| u.column(i).norm()));
    for i in 0..n {
        if s[i] > 0.0 {
            let si = s[i];
            u.column_mut(i).scale_mut(1.0 / si);
        }
    }
    debug_assert_eq!(u.nrows(), m);
    Svd::sorted(u, s, v)
}

/// Thin SVD with a reconstruction check.
///
/// nalgebra's bidiagonal QR can stop early on clustered singular values and
/// return factors that do not reproduce `a`; those cases are redone with
/// one-sided Jacobi, which is slower but reliable at these sizes.
pub fn svd(a: &RMatrix) -> Svd {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Svd {
            u: RMatrix::zeros(m, 0),
            s: RVector::zeros(0),
            v: RMatrix::zeros(n, 0),
        };
    }
    let scale = a.amax().max(f64::MIN_POSITIVE);
    let tol = 1e3 * f64::EPSILON * m.max(n) as f64 * scale;
    let raw = SVD::new(a.clone(), true, true);
    let first = Svd::sorted(
        raw.u.expect("u requested"),
        raw.singular_values,
        raw.v_t.expect("v_t requested").transpose(),
    );
    if first.residual(a) <= tol {
        return first;
    }
    if m >= n {
        jacobi_tall(a)
    } else {
        let t = jacobi_tall(&a.transpose());
        Svd { u: t.v, s: t.s, v: t.u }
    }
}

/// Singular values (descending) with matching left and right singular vectors.
///
/// Wide inputs are padded with zero rows so V is always square.
pub fn full_svd(a: &RMatrix) -> (RVector, RMatrix, RMatrix) {
    let (m, n) = a.shape();
    let padded;
    let src = if m < n {
        let mut p = RMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        padded = p;
        &padded
    } else {
        a
    };
    let d = svd(src);
    (d.s, d.u, d.v)
}

/// Numerical rank with the relative threshold `rel_tol · σ_max`.
pub fn rank(a: &RMatrix, rel_tol: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let s = svd(a).s;
    let smax = s.max();
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * smax).count()
}

/// Orthonormal null-space basis of `a` and its numerical rank.
pub fn null_space(a: &RMatrix, rel_tol: f64) -> (RMatrix, usize) {
    let n = a.ncols();
    let (s, _, v) = full_svd(a);
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let r = if smax == 0.0 {
        0
    } else {
        s.iter().filter(|&&x| x > rel_tol * smax).count()
    };
    (v.columns(r, n - r).into_owned(), r)
}

/// Moore-Penrose pseudo-inverse via SVD.
pub fn pinv(a: &RMatrix) -> RMatrix {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return RMatrix::zeros(n, m);
    }
    let d = svd(a);
    let tol = f64::EPSILON * m.max(n) as f64 * d.s.max();
    d.pseudo_inverse(tol)
}

/// Lower-triangular `L` with `Q = L·Lᵀ`.
pub fn cholesky(q: &RMatrix) -> Result<RMatrix> {
    Cholesky::new(q.clone())
        .map(|c| c.l())
        .ok_or_else(|| Error::numerical("matrix is not positive definite", condition(q)))
}

/// 2-norm condition estimate from singular values.
pub fn condition(a: &RMatrix) -> f64 {
    if a.is_empty() {
        return 1.0;
    }
    let s = svd(a).s;
    let lo = s.min();
    if lo == 0.0 {
        f64::INFINITY
    } else {
        s.max() / lo
    }
}

/// How a [`SqrtFactor`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorMethod {
    Cholesky,
    /// Eigen-decomposition restricted to eigenvalues above the rank threshold.
    Eigen,
}

/// Whitening map `F` for a PSD weight `Q`: with `λ = F·ν`, `λᵀQλ = ‖ν‖²` on range(Q).
#[derive(Clone, Debug)]
pub struct SqrtFactor {
    pub f: RMatrix,
    pub method: FactorMethod,
}

/// Builds the whitening map; tries Cholesky first, falls back to the eigen route.
pub fn sqrt_factor(q: &RMatrix, rel_tol: f64) -> SqrtFactor {
    if let Ok(l) = cholesky(q) {
        let n = q.nrows();
        // F = L^{-T}
        if let Some(f) = l.transpose().solve_upper_triangular(&RMatrix::identity(n, n)) {
            if f.iter().all(|x| x.is_finite()) {
                return SqrtFactor {
                    f,
                    method: FactorMethod::Cholesky,
                };
            }
        }
    }
    let (v, d) = range_eigen(q, rel_tol);
    let f = RMatrix::from_fn(v.nrows(), v.ncols(), |r, c| v[(r, c)] / d[c].sqrt());
    SqrtFactor {
        f,
        method: FactorMethod::Eigen,
    }
}

/// Eigenvectors and eigenvalues of a symmetric `q` above `rel_tol · max eigenvalue`.
pub fn range_eigen(q: &RMatrix, rel_tol: f64) -> (RMatrix, RVector) {
    let sym = (q + q.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let emax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] > rel_tol * emax)
        .collect();
    let v = RMatrix::from_fn(q.nrows(), keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]);
    let d = RVector::from_iterator(keep.len(), keep.iter().map(|&i| eig.eigenvalues[i]));
    (v, d)
}

/// Solves the symmetric positive definite system `k·x = b`.
pub struct SpdSolver {
    chol: Cholesky<f64, nalgebra::Dyn>,
}

impl SpdSolver {
    pub fn new(k: &RMatrix) -> Result<Self> {
        let chol = Cholesky::new(k.clone()).ok_or_else(|| {
            Error::numerical("regularized system is not positive definite", condition(k))
        })?;
        Ok(Self { chol })
    }

    pub fn solve(&self, b: &RVector) -> RVector {
        self.chol.solve(b)
    }
}
