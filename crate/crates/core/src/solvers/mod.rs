//! Solvers for the reduced design problems `min λᵀWλ s.t. Bλ ≥ t`.
//!
//! Three interchangeable back ends share the [`Qp`] view:
//! the alternating penalty iteration ([`penalty`]), non-negative least
//! squares ([`nnls`]), and exhaustive active-set enumeration ([`oracle`]).
//!
//! A singular weight `W` (signal-level designs with many spare antennas)
//! leaves directions that change neither the objective nor the
//! constraints. All back ends then work on `range(W)`, which selects the
//! minimum-norm minimizer.

pub mod linalg;
pub mod nnls;
pub mod oracle;
pub mod penalty;

pub use nnls::{ldp, nnls, nnls_solve, LdpResult, NnlsResult};
pub use oracle::oracle_solve;
pub use penalty::{penalty_solve, update_lambda, update_u, PenaltyConfig, SolveTrace};

use crate::{Error, RMatrix, RVector, Result};

/// Relative threshold for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// `min λᵀWλ` subject to `constraint · λ ≥ target`; `W = I` when `weight` is `None`.
#[derive(Clone, Debug)]
pub struct Qp {
    pub constraint: RMatrix,
    pub target: RVector,
    pub weight: Option<RMatrix>,
}

impl Qp {
    pub fn new(constraint: RMatrix, target: RVector, weight: Option<RMatrix>) -> Self {
        Self {
            constraint,
            target,
            weight,
        }
    }

    pub fn objective(&self, lambda: &RVector) -> f64 {
        match &self.weight {
            Some(w) => lambda.dot(&(w * lambda)),
            None => lambda.norm_squared(),
        }
    }

    /// Smallest `constraint · λ − target`.
    pub fn min_slack(&self, lambda: &RVector) -> f64 {
        (&self.constraint * lambda - &self.target).min()
    }
}

/// Which back end produced a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Iterative,
    Nnls,
    Oracle,
}

/// Route taken by the NNLS back end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NnlsRoute {
    /// Full row rank: `D = B†`, `d = B†t`, `λ = B†(t + u)`.
    PseudoInverse,
    /// Row-rank-deficient: least-distance programming through the NNLS dual.
    LeastDistance,
}

#[derive(Clone, Debug)]
pub struct QpSolution {
    pub lambda: RVector,
    pub objective: f64,
    pub solver: SolverKind,
    pub iterations: usize,
    pub converged: bool,
    /// Penalty iteration history.
    pub trace: Option<SolveTrace>,
    /// Constraint multipliers `μ ≥ 0` (NNLS back end).
    pub multipliers: Option<RVector>,
    pub nnls_route: Option<NnlsRoute>,
}

struct Reduced {
    qp: Qp,
    /// `λ = map · λ_reduced`; `None` means identity.
    map: Option<RMatrix>,
}

fn reduce(qp: &Qp) -> Reduced {
    let Some(w) = &qp.weight else {
        return Reduced {
            qp: qp.clone(),
            map: None,
        };
    };
    let (v, d) = linalg::range_eigen(w, RANK_TOL);
    if v.ncols() == w.ncols() {
        return Reduced {
            qp: qp.clone(),
            map: None,
        };
    }
    Reduced {
        qp: Qp::new(&qp.constraint * &v, qp.target.clone(), Some(RMatrix::from_diagonal(&d))),
        map: Some(v),
    }
}

struct NnlsOut {
    lambda: RVector,
    multipliers: RVector,
    iterations: usize,
    route: NnlsRoute,
}

/// Re-solves `min ‖ν‖ s.t. G_A ν = t_A` on the rows with positive
/// multipliers and keeps the result if it is feasible and no longer.
/// Removes the interior drift NNLS leaves on ill-conditioned instances.
fn polish(g: &RMatrix, t: &RVector, nu: RVector, multipliers: &RVector) -> RVector {
    let top = multipliers.amax();
    let rows: Vec<usize> = (0..t.len()).filter(|&i| multipliers[i] > 1e-12 * top).collect();
    if rows.is_empty() || top == 0.0 {
        return nu;
    }
    let tol = |x: &RVector| 1e-12 * (t.amax() + g.norm() * x.norm());
    let r = g * &nu - t;
    if rows.iter().all(|&i| r[i].abs() <= tol(&nu)) {
        return nu;
    }
    let ga = g.select_rows(&rows);
    let svd = linalg::svd(&ga);
    let cand = svd.solve(&t.select_rows(&rows), RANK_TOL * svd.s[0]);
    let slack = |x: &RVector| (g * x - t).min();
    if slack(&cand) >= slack(&nu).min(0.0) - tol(&cand) && cand.norm_squared() <= nu.norm_squared() {
        cand
    } else {
        nu
    }
}

/// `G† = Gᵀ(GGᵀ)⁻¹` when `G` has full row rank, else `None`.
///
/// Uses QR of `Gᵀ` when its diagonal is clearly nonsingular and the SVD
/// otherwise, so borderline ranks get a proper decision.
fn right_inverse(g: &RMatrix) -> Option<RMatrix> {
    let (m, n) = g.shape();
    if m == 0 || m > n {
        return None;
    }
    let qr = g.transpose().qr();
    let r = qr.r();
    let d = r.diagonal().abs();
    if d.min() > 1e-6 * d.max() {
        let q = qr.q();
        // G† = Q R⁻ᵀ.
        return r.solve_upper_triangular(&q.transpose()).map(|x| x.transpose());
    }
    let dec = linalg::svd(g);
    let smax = dec.s[0];
    let rank = dec.s.iter().filter(|&&x| x > RANK_TOL * smax).count();
    (smax > 0.0 && rank == m).then(|| dec.pseudo_inverse(f64::EPSILON * n as f64 * smax))
}

fn nnls_qp(qp: &Qp) -> Result<NnlsOut> {
    let f = qp
        .weight
        .as_ref()
        .map(|w| linalg::sqrt_factor(w, RANK_TOL).f);
    let g = match &f {
        Some(f) => &qp.constraint * f,
        None => qp.constraint.clone(),
    };
    let t = &qp.target;
    let (nu, multipliers, iterations, route) = if let Some(d_mat) = right_inverse(&g) {
        let res = nnls_solve(&d_mat, &(&d_mat * t))?;
        let nu = &d_mat * (t + &res.x);
        let mu = d_mat.tr_mul(&nu);
        (nu, mu, res.iterations, NnlsRoute::PseudoInverse)
    } else {
        let r = ldp(&g, t)?;
        (r.x, r.multipliers, r.iterations, NnlsRoute::LeastDistance)
    };
    let nu = polish(&g, t, nu, &multipliers);
    let lambda = match &f {
        Some(f) => f * nu,
        None => nu,
    };
    Ok(NnlsOut {
        lambda,
        multipliers,
        iterations,
        route,
    })
}

/// Solves `qp` with the chosen back end.
pub fn solve(qp: &Qp, kind: SolverKind, cfg: &PenaltyConfig) -> Result<QpSolution> {
    if qp.constraint.nrows() != qp.target.len() {
        return Err(Error::dim(format!(
            "constraint has {} rows, target has {}",
            qp.constraint.nrows(),
            qp.target.len()
        )));
    }
    let red = reduce(qp);
    let lift = |l: RVector| match &red.map {
        Some(v) => v * l,
        None => l,
    };
    let sol = match kind {
        SolverKind::Nnls => {
            let out = nnls_qp(&red.qp)?;
            let lambda = lift(out.lambda);
            QpSolution {
                objective: qp.objective(&lambda),
                lambda,
                solver: kind,
                iterations: out.iterations,
                converged: true,
                trace: None,
                multipliers: Some(out.multipliers),
                nnls_route: Some(out.route),
            }
        }
        SolverKind::Iterative => {
            let (l, trace) = penalty_solve(&red.qp, cfg)?;
            let lambda = lift(l);
            QpSolution {
                objective: qp.objective(&lambda),
                lambda,
                solver: kind,
                iterations: trace.iterations,
                converged: trace.converged,
                trace: Some(trace),
                multipliers: None,
                nnls_route: None,
            }
        }
        SolverKind::Oracle => {
            let lambda = lift(oracle_solve(&red.qp)?);
            QpSolution {
                objective: qp.objective(&lambda),
                lambda,
                solver: kind,
                iterations: 0,
                converged: true,
                trace: None,
                multipliers: None,
                nnls_route: None,
            }
        }
    };
    Ok(sol)
}
