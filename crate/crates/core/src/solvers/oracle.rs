//! Exhaustive active-set enumeration for small inequality-constrained QPs.
//!
//! Every row subset of size at most `n` with linearly independent rows is
//! treated as a candidate active set; the equality-constrained minimizer of
//! `λᵀWλ` on it is computed in closed form and the cheapest feasible
//! candidate wins. Exponential in the number of constraints; test use only.


use crate::solvers::linalg;
use crate::solvers::Qp;
use crate::{Error, RMatrix, RVector, Result};

/// Largest variable count accepted.
pub const MAX_DIM: usize = 12;
/// Largest number of candidate subsets accepted.
pub const MAX_SUBSETS: f64 = 2e6;

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of candidate active sets for `m` constraints in `n` variables.
pub fn subset_count(m: usize, n: usize) -> f64 {
    (0..=m.min(n)).map(|k| binom(m, k)).sum()
}

fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimizes `λᵀWλ` subject to `Bλ ≥ t` by enumeration.
///
/// `weight`, if present, must be positive definite. Refuses instances with
/// more than [`MAX_DIM`] variables or [`MAX_SUBSETS`] candidates.
pub fn oracle_solve(qp: &Qp) -> Result<RVector> {
    let b = &qp.constraint;
    let t = &qp.target;
    let (m, n) = b.shape();
    if n > MAX_DIM {
        return Err(Error::OracleRefused(format!("{n} variables exceeds {MAX_DIM}")));
    }
    let count = subset_count(m, n);
    if count > MAX_SUBSETS {
        return Err(Error::OracleRefused(format!("{count:.0} candidate active sets")));
    }
    let w_inv = match &qp.weight {
        Some(w) => Some(w.clone().try_inverse().ok_or_else(|| {
            Error::OracleRefused("weight matrix is singular".into())
        })?),
        None => None,
    };
    let objective = |l: &RVector| match &qp.weight {
        Some(w) => l.dot(&(w * l)),
        None => l.norm_squared(),
    };
    let tol = 1e-9 * (1.0 + t.amax());
    let mut best: Option<(f64, RVector)> = None;
    let mut consider = |lam: RVector| {
        if (b * &lam - t).iter().all(|&s| s >= -tol) {
            let f = objective(&lam);
            if best.as_ref().is_none_or(|(bf, _)| f < *bf) {
                best = Some((f, lam));
            }
        }
    };
    consider(RVector::zeros(n));
    for k in 1..=m.min(n) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let ba = b.select_rows(&idx);
            let ta = t.select_rows(&idx);
            // λ = W⁻¹Bᵀ(B W⁻¹ Bᵀ)⁻¹ t over the candidate rows.
            let wbt: RMatrix = match &w_inv {
                Some(wi) => wi * ba.transpose(),
                None => ba.transpose(),
            };
            let gram = &ba * &wbt;
            let d = linalg::svd(&gram);
            let smax = d.s.max();
            let smin = d.s.min();
            if smax > 0.0 && smin > 1e-12 * smax {
                let mu = d.solve(&ta, 0.0);
                consider(&wbt * mu);
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    best.map(|(_, l)| l).ok_or(Error::Infeasible)
}
