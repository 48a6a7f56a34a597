//! Lawson-Hanson non-negative least squares and least-distance programming.


use super::linalg;
use crate::{Error, RMatrix, RVector, Result};

/// Output of [`nnls`].
#[derive(Clone, Debug)]
pub struct NnlsResult {
    pub x: RVector,
    /// `‖A x − b‖`.
    pub residual_norm: f64,
    /// Outer (index-activation) iterations.
    pub iterations: usize,
}

fn ls_on_columns(a: &RMatrix, b: &RVector, cols: &[usize]) -> RVector {
    let ap = a.select_columns(cols);
    let k = cols.len();
    if ap.nrows() >= k {
        let qr = ap.clone().qr();
        let r = qr.r();
        let rmax = r.diagonal().amax();
        if r.diagonal().iter().all(|d| d.abs() > 1e-13 * rmax) {
            let qtb = qr.q().transpose() * b;
            if let Some(z) = r.solve_upper_triangular(&qtb) {
                return z;
            }
        }
    }
    let d = linalg::svd(&ap);
    d.solve(b, 1e-14 * d.s.max())
}

/// Minimizes `‖A x − b‖` subject to `x ≥ 0` (Lawson-Hanson active set).
pub fn nnls(a: &RMatrix, b: &RVector) -> Result<NnlsResult> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(Error::dim(format!("nnls: A is {m}x{n}, b has {}", b.len())));
    }
    let mut x = RVector::zeros(n);
    let mut passive = vec![false; n];
    let scale = a.norm() * b.norm().max(f64::MIN_POSITIVE);
    let tol = 10.0 * f64::EPSILON * m.max(n).max(1) as f64 * scale;
    let max_outer = 5 * n.max(1) + 50;
    let mut skip = vec![false; n];
    let mut w = a.tr_mul(&(b - a * &x));
    let mut outer = 0;
    loop {
        let cand = (0..n)
            .filter(|&j| !passive[j] && !skip[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].partial_cmp(&w[j]).unwrap());
        let Some(j) = cand else { break };
        outer += 1;
        if outer > max_outer {
            return Err(Error::numerical(
                format!("nnls cycling guard tripped after {max_outer} activations"),
                super::linalg::condition(a),
            ));
        }
        passive[j] = true;
        let mut first = true;
        loop {
            let cols: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let zp = ls_on_columns(a, b, &cols);
            let mut z = RVector::zeros(n);
            for (i, &c) in cols.iter().enumerate() {
                z[c] = zp[i];
            }
            if cols.iter().all(|&c| z[c] > 0.0) {
                x = z;
                break;
            }
            if first && z[j] <= 0.0 {
                // The new index cannot enter; leave x unchanged and try another.
                passive[j] = false;
                skip[j] = true;
                break;
            }
            first = false;
            let mut alpha = f64::INFINITY;
            let mut blocking = cols[0];
            for &c in &cols {
                if z[c] <= 0.0 {
                    let step = x[c] / (x[c] - z[c]);
                    if step < alpha {
                        alpha = step;
                        blocking = c;
                    }
                }
            }
            x += (z - &x) * alpha;
            // The blocking index is zero in exact arithmetic; rounding may leave dust.
            x[blocking] = 0.0;
            for &c in &cols {
                if x[c] <= 0.0 {
                    x[c] = 0.0;
                    passive[c] = false;
                }
            }
        }
        if !skip[j] {
            skip.iter_mut().for_each(|s| *s = false);
        }
        w = a.tr_mul(&(b - a * &x));
    }
    let residual_norm = (a * &x - b).norm();
    Ok(NnlsResult {
        x,
        residual_norm,
        iterations: outer,
    })
}

/// Minimizes `‖D u + d‖²` over `u ≥ 0`.
pub fn nnls_solve(d_mat: &RMatrix, d: &RVector) -> Result<NnlsResult> {
    nnls(d_mat, &(-d))
}

/// Least-distance solution `x` with multipliers `μ ≥ 0` such that `x = Gᵀμ`.
#[derive(Clone, Debug)]
pub struct LdpResult {
    pub x: RVector,
    pub multipliers: RVector,
    pub iterations: usize,
}

/// Minimizes `‖x‖` subject to `G x ≥ h` via the NNLS dual.
///
/// Returns [`Error::Infeasible`] when the constraint set is empty.
pub fn ldp(g: &RMatrix, h: &RVector) -> Result<LdpResult> {
    let (m, n) = g.shape();
    if h.len() != m {
        return Err(Error::dim(format!("ldp: G is {m}x{n}, h has {}", h.len())));
    }
    let mut e = RMatrix::zeros(n + 1, m);
    e.view_mut((0, 0), (n, m)).copy_from(&g.transpose());
    e.row_mut(n).copy_from(&h.transpose());
    let mut f = RVector::zeros(n + 1);
    f[n] = 1.0;
    let res = nnls(&e, &f)?;
    let r = &e * &res.x - &f;
    let denom = -r[n];
    if r.norm() < 1e-12 || denom <= 1e-14 {
        return Err(Error::Infeasible);
    }
    let x = r.rows(0, n) * (-1.0 / r[n]);
    Ok(LdpResult {
        x,
        multipliers: res.x / denom,
        iterations: res.iterations,
    })
}
