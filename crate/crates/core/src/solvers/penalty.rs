//! Alternating penalty iteration for `min λᵀWλ s.t. Bλ ≥ t`.
//!
//! The equality form `Bλ = t + u, u ≥ 0` is relaxed to
//! `f(λ, u) = λᵀWλ + η‖Bλ − t − u‖²` and minimized alternately in `u`
//! (a clamp) and `λ` (a fixed linear solve). Each half-step is an exact
//! block minimization, so `f` never increases.
//!
//! Plain alternation is a projected-gradient method on `u` with step
//! `1/(2η)`, which stalls at large η. With [`PenaltyConfig::accelerate`]
//! each iteration continues with Newton steps on the convex piecewise
//! quadratic `g(λ) = min_u f(λ, u) = λᵀWλ + η‖(t − Bλ)₊‖²`: the quadratic
//! model keeps the rows with `Bλ ≤ t`, and an exact line search along the
//! step picks the length. Only decreasing steps are kept, so the objective
//! history stays monotone.

use crate::solvers::linalg::SpdSolver;
use crate::solvers::Qp;
use crate::{Error, RMatrix, RVector, Result};

/// Iteration controls.
#[derive(Clone, Debug, PartialEq)]
pub struct PenaltyConfig {
    /// Penalty weight η > 0.
    pub eta: f64,
    /// Stop when `‖λ_n − λ_{n+1}‖ < epsilon`.
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Add Newton steps on the reduced objective after each alternation.
    pub accelerate: bool,
    /// Warm-started geometric ramp of η from 1e2 up to `eta` (×10 per stage).
    pub continuation: bool,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self {
            eta: 1e6,
            epsilon: 1e-8,
            max_iterations: 10_000,
            accelerate: true,
            continuation: false,
        }
    }
}

impl PenaltyConfig {
    /// Algorithm as stated: no Newton steps.
    pub fn plain() -> Self {
        Self {
            accelerate: false,
            continuation: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) || !(self.epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "penalty config needs eta > 0 and epsilon > 0, got {} and {}",
                self.eta, self.epsilon
            )));
        }
        Ok(())
    }
}

/// Objective history and final iterate of one solve.
#[derive(Clone, Debug)]
pub struct SolveTrace {
    /// `f(λ, u)` at the start and after every iteration of the final η stage.
    pub objective: Vec<f64>,
    pub lambda: RVector,
    pub u: RVector,
    pub iterations: usize,
    pub converged: bool,
}

/// `u = (Bλ − t)₊`.
pub fn update_u(b: &RMatrix, lambda: &RVector, target: &RVector) -> RVector {
    (b * lambda - target).map(|v| v.max(0.0))
}

fn system(b: &RMatrix, eta: f64, weight: Option<&RMatrix>) -> RMatrix {
    let n = b.ncols();
    let mut k = b.tr_mul(b);
    match weight {
        Some(w) => k += w / eta,
        None => {
            for i in 0..n {
                k[(i, i)] += 1.0 / eta;
            }
        }
    }
    k
}

/// `λ = (W/η + BᵀB)⁻¹ Bᵀ(t + u)`, with `W = I` when `weight` is `None`.
pub fn update_lambda(
    b: &RMatrix,
    u: &RVector,
    target: &RVector,
    eta: f64,
    weight: Option<&RMatrix>,
) -> Result<RVector> {
    let k = system(b, eta, weight);
    let solver = SpdSolver::new(&k)?;
    Ok(solver.solve(&b.tr_mul(&(target + u))))
}

/// `f(λ, u) = λᵀWλ + η‖Bλ − t − u‖²`.
pub fn penalty_objective(
    b: &RMatrix,
    target: &RVector,
    weight: Option<&RMatrix>,
    eta: f64,
    lambda: &RVector,
    u: &RVector,
) -> f64 {
    let reg = match weight {
        Some(w) => lambda.dot(&(w * lambda)),
        None => lambda.norm_squared(),
    };
    reg + eta * (b * lambda - target - u).norm_squared()
}

/// Exact minimizer over `α ≥ 0` of the convex piecewise quadratic
/// `φ(α) = g(λ + αd)`.
fn line_search(qp: &Qp, eta: f64, lambda: &RVector, dir: &RVector) -> f64 {
    let b = &qp.constraint;
    let r = b * lambda - &qp.target;
    let bd = b * dir;
    let (wl, wd) = match &qp.weight {
        Some(w) => (dir.dot(&(w * lambda)), dir.dot(&(w * dir))),
        None => (dir.dot(lambda), dir.norm_squared()),
    };
    // φ'(α)/2 = wl + α·wd + η Σ_{r_i(α) < 0} bd_i (r_i + α bd_i).
    let mut breaks: Vec<f64> = (0..r.len())
        .filter(|&i| bd[i] != 0.0)
        .map(|i| -r[i] / bd[i])
        .filter(|&a| a > 0.0)
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.push(f64::INFINITY);
    let mut lo = 0.0;
    for &hi in &breaks {
        let mid = if hi.is_finite() { 0.5 * (lo + hi) } else { lo + 1.0 };
        let (mut c0, mut c1) = (wl, wd);
        for i in 0..r.len() {
            if r[i] + mid * bd[i] < 0.0 {
                c0 += eta * bd[i] * r[i];
                c1 += eta * bd[i] * bd[i];
            }
        }
        if c1 > 0.0 {
            let root = -c0 / c1;
            if root <= hi {
                return root.max(lo);
            }
        }
        lo = hi;
    }
    lo
}

/// Newton steps on `g(λ) = λᵀWλ + η‖(t − Bλ)₊‖²`. Each minimizes the
/// quadratic model on the rows with `Bλ ≤ t` (up to rounding) and then
/// searches exactly along the step; stops once a full step lands on the
/// model minimizer or `g` stops decreasing.
fn newton_steps(qp: &Qp, eta: f64, lambda: &RVector, current: f64) -> Result<Option<(RVector, RVector, f64)>> {
    let b = &qp.constraint;
    let t = &qp.target;
    let w = qp.weight.as_ref();
    let mut best: Option<(RVector, RVector, f64)> = None;
    let mut cur = current;
    let mut l = lambda.clone();
    for _ in 0..(2 * t.len() + 10) {
        let resid = b * &l - t;
        let scale = l.norm();
        let rows: Vec<usize> = (0..t.len())
            .filter(|&i| resid[i] <= 1e-12 * (t[i].abs() + b.row(i).norm() * scale))
            .collect();
        let ba = b.select_rows(&rows);
        let lf = SpdSolver::new(&system(&ba, eta, w))?.solve(&ba.tr_mul(&t.select_rows(&rows)));
        let dir = lf - &l;
        let alpha = line_search(qp, eta, &l, &dir);
        if !(alpha > 0.0 && alpha.is_finite()) {
            break;
        }
        let cl = &l + &dir * alpha;
        let cu = update_u(b, &cl, t);
        let v = penalty_objective(b, t, w, eta, &cl, &cu);
        if !(v < cur) {
            break;
        }
        cur = v;
        l = cl.clone();
        best = Some((cl, cu, v));
        if alpha >= 1.0 {
            break;
        }
    }
    Ok(best)
}

fn run_stage(
    qp: &Qp,
    eta: f64,
    cfg: &PenaltyConfig,
    lambda0: RVector,
    budget: usize,
) -> Result<SolveTrace> {
    let b = &qp.constraint;
    let t = &qp.target;
    let w = qp.weight.as_ref();
    let solver = SpdSolver::new(&system(b, eta, w))?;
    let mut lambda = lambda0;
    let mut u = update_u(b, &lambda, t);
    let mut cur = penalty_objective(b, t, w, eta, &lambda, &u);
    let mut objective = vec![cur];
    let mut converged = false;
    let mut it = 0;
    while it < budget {
        it += 1;
        let old = lambda.clone();
        u = update_u(b, &lambda, t);
        lambda = solver.solve(&b.tr_mul(&(t + &u)));
        cur = penalty_objective(b, t, w, eta, &lambda, &u);
        if cfg.accelerate {
            u = update_u(b, &lambda, t);
            cur = penalty_objective(b, t, w, eta, &lambda, &u);
            if let Some((l2, u2, v)) = newton_steps(qp, eta, &lambda, cur)? {
                lambda = l2;
                u = u2;
                cur = v;
            }
        }
        objective.push(cur);
        if (&lambda - &old).norm() < cfg.epsilon {
            converged = true;
            break;
        }
    }
    Ok(SolveTrace {
        objective,
        lambda,
        u,
        iterations: it,
        converged,
    })
}

/// Runs the alternating iteration from `λ₀ = 0`.
///
/// Non-convergence is not an error: the last iterate is returned with
/// `converged = false`.
pub fn penalty_solve(qp: &Qp, cfg: &PenaltyConfig) -> Result<(RVector, SolveTrace)> {
    cfg.validate()?;
    let n = qp.constraint.ncols();
    let mut etas = Vec::new();
    if cfg.continuation {
        let mut e = 1e2;
        while e < cfg.eta {
            etas.push(e);
            e *= 10.0;
        }
    }
    etas.push(cfg.eta);
    let mut lambda = RVector::zeros(n);
    let mut used = 0;
    let mut trace = None;
    for (k, &eta) in etas.iter().enumerate() {
        let last = k + 1 == etas.len();
        let budget = if last {
            cfg.max_iterations.saturating_sub(used).max(1)
        } else {
            (cfg.max_iterations / (2 * etas.len())).max(1)
        };
        let tr = run_stage(qp, eta, cfg, lambda, budget)?;
        used += tr.iterations;
        lambda = tr.lambda.clone();
        trace = Some(tr);
    }
    let mut trace = trace.expect("at least one stage");
    trace.iterations = used;
    Ok((lambda, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::nnls::ldp;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn instance(m: usize, n: usize, seed: u64) -> Qp {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = RMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
        let t = RVector::from_fn(m, |_, _| rng.random_range(0.1..1.0));
        Qp::new(b, t, None)
    }

    fn monotone(obj: &[f64]) -> bool {
        obj.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-12)
    }

    #[test]
    fn update_u_examples() {
        let b = RMatrix::identity(3, 3);
        let t = RVector::from_vec(vec![1.0, 2.0, 3.0]);
        assert_eq!(update_u(&b, &t, &t), RVector::zeros(3));
        let lam = RVector::from_vec(vec![2.0, 0.0, 3.5]);
        assert_eq!(update_u(&b, &lam, &t), RVector::from_vec(vec![1.0, 0.0, 0.5]));
    }

    #[test]
    fn update_u_grid_oracle() {
        // Per-coordinate brute force over a grid of candidate u values.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let r = RVector::from_fn(3, |_, _| rng.random_range(-2.0..2.0));
            let b = RMatrix::identity(3, 3);
            let u = update_u(&b, &r, &RVector::zeros(3));
            for i in 0..3 {
                let mut best = (f64::INFINITY, 0.0);
                for k in 0..=4000 {
                    let c = k as f64 * 1e-3;
                    let v = (c - r[i]).powi(2);
                    if v < best.0 {
                        best = (v, c);
                    }
                }
                assert!((u[i] - best.1).abs() <= 1e-3);
            }
        }
    }

    #[test]
    fn update_lambda_limit_and_gradient() {
        let b = RMatrix::identity(3, 3);
        let t = RVector::from_vec(vec![1.0, 2.0, 3.0]);
        let u = RVector::from_vec(vec![0.5, 0.0, 0.25]);
        let l = update_lambda(&b, &u, &t, 1e12, None).unwrap();
        assert!((l - (&t + &u)).amax() < 1e-9);

        let qp = instance(4, 6, 9);
        let eta = 1e3;
        let u4 = u.resize_vertically(4, 0.1);
        let l = update_lambda(&qp.constraint, &u4, &qp.target, eta, None).unwrap();
        let g = &l * (2.0 / eta) + qp.constraint.tr_mul(&(&qp.constraint * &l - &qp.target - &u4)) * 2.0;
        assert!(g.amax() < 1e-8, "{}", g.amax());
    }

    #[test]
    fn weighted_update_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let qp = instance(3, 5, 2);
        let c = RMatrix::from_fn(6, 5, |_, _| rng.random_range(-1.0..1.0));
        let w = c.tr_mul(&c);
        let u = RVector::from_vec(vec![0.0, 0.3, 0.0]);
        let eta = 50.0;
        let l = update_lambda(&qp.constraint, &u, &qp.target, eta, Some(&w)).unwrap();
        let g = &w * &l * (2.0 / eta) + qp.constraint.tr_mul(&(&qp.constraint * &l - &qp.target - &u)) * 2.0;
        assert!(g.amax() < 1e-8);
    }

    #[test]
    fn one_pass_never_increases() {
        for seed in 0..50 {
            let qp = instance(5, 7, seed);
            let eta = 1e4;
            let lam0 = RVector::from_fn(7, |i, _| (i as f64).sin());
            let u0 = update_u(&qp.constraint, &lam0, &qp.target);
            let f0 = penalty_objective(&qp.constraint, &qp.target, None, eta, &lam0, &u0);
            let lam1 = update_lambda(&qp.constraint, &u0, &qp.target, eta, None).unwrap();
            let f1 = penalty_objective(&qp.constraint, &qp.target, None, eta, &lam1, &u0);
            let u1 = update_u(&qp.constraint, &lam1, &qp.target);
            let f2 = penalty_objective(&qp.constraint, &qp.target, None, eta, &lam1, &u1);
            assert!(f1 <= f0 * (1.0 + 1e-12) && f2 <= f1 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn violation_shrinks_with_eta() {
        let qp = instance(4, 6, 17);
        let viol = |eta: f64| {
            let cfg = PenaltyConfig {
                eta,
                epsilon: 1e-13,
                max_iterations: 20_000,
                ..PenaltyConfig::default()
            };
            let (l, _) = penalty_solve(&qp, &cfg).unwrap();
            (&qp.target - &qp.constraint * l).max().max(0.0)
        };
        let (v1, v2) = (viol(1e3), viol(2e3));
        assert!(v1 > 0.0);
        let ratio = v2 / v1;
        assert!((ratio - 0.5).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn plain_and_accelerated_agree_at_moderate_eta() {
        let qp = instance(3, 6, 4);
        let base = PenaltyConfig {
            eta: 1e2,
            epsilon: 1e-12,
            max_iterations: 200_000,
            ..PenaltyConfig::default()
        };
        let (a, _) = penalty_solve(&qp, &base).unwrap();
        let (p, tr) = penalty_solve(&qp, &PenaltyConfig { accelerate: false, ..base }).unwrap();
        assert!(tr.converged);
        assert!((a - p).norm() < 1e-6);
    }

    #[test]
    fn continuation_matches_direct() {
        let qp = instance(6, 8, 23);
        let (a, _) = penalty_solve(&qp, &PenaltyConfig::default()).unwrap();
        let (b, _) = penalty_solve(
            &qp,
            &PenaltyConfig {
                continuation: true,
                ..PenaltyConfig::default()
            },
        )
        .unwrap();
        assert!((a.norm_squared() - b.norm_squared()).abs() < 1e-6 * a.norm_squared());
    }

    #[test]
    fn rejects_bad_config() {
        let qp = instance(2, 3, 1);
        let cfg = PenaltyConfig {
            eta: 0.0,
            ..PenaltyConfig::default()
        };
        assert!(penalty_solve(&qp, &cfg).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn trace_monotone_and_close(m in 1usize..8, extra in 0usize..6, seed in 0u64..100_000) {
            let qp = instance(m, m + extra, seed);
            let (l, tr) = penalty_solve(&qp, &PenaltyConfig::default()).unwrap();
            prop_assert!(monotone(&tr.objective));
            prop_assert!(tr.u.min() >= 0.0);
            // The penalty minimizer sits O(1/(η σ_min²)) from the constrained one.
            let smin = qp.constraint.clone().singular_values().min();
            prop_assume!(PenaltyConfig::default().eta * smin * smin >= 1e4);
            let exact = ldp(&qp.constraint, &qp.target).unwrap().x;
            let (a, b) = (l.norm_squared(), exact.norm_squared());
            prop_assert!((a - b).abs() <= 1e-3 * b + 1e-9, "{a} vs {b}");
        }

        #[test]
        fn plain_trace_monotone(m in 1usize..6, extra in 0usize..4, seed in 0u64..100_000) {
            let qp = instance(m, m + extra, seed);
            let cfg = PenaltyConfig { max_iterations: 500, ..PenaltyConfig::plain() };
            let (_, tr) = penalty_solve(&qp, &cfg).unwrap();
            prop_assert!(monotone(&tr.objective));
        }
    }
}
