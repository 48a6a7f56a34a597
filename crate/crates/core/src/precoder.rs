//! Design problems for symbol-level directional modulation.
//!
//! All three designs share the receive constraints in real-stacked form.
//! With `w̃ = [Re w; Im w]`, `H1 = [Re H_U, −Im H_U]`, `H2 = [Im H_U, Re H_U]`
//! and `A = diag(tan arg s)`:
//!
//! - phase: `(A·H1 − H2)·w̃ = 0`, removed by writing `w̃ = E·λ` with `E` an
//!   orthonormal null-space basis;
//! - sign and amplitude: `Re(S)·H1·E·λ ≥ √γ·Re(s)∘Re(s)`, which also picks
//!   the correct half of the π-periodic tangent.
//!
//! The relaxed design drops the phase equality and keeps every received
//! sample inside a wedge of its decision region instead.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channel::{stack, unstack_vec, StackedChannel};
use crate::modulation::{tan_of_phase, wrap_angle, RelaxedRegion};
use crate::solvers::{self, linalg, PenaltyConfig, Qp, QpSolution, SolverKind, RANK_TOL};
use crate::{CMatrix, CVector, Error, RMatrix, RVector, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DesignMode {
    /// Minimize `‖w‖²` with received phases fixed to the symbol phases.
    PowerFixed,
    /// Minimize `‖w‖²` with received samples anywhere in their detection wedges.
    PowerRelaxed,
    /// Minimize `‖H_U w‖²` under the fixed-phase constraints.
    SignalLevel,
}

impl DesignMode {
    pub const ALL: [DesignMode; 3] = [
        DesignMode::PowerFixed,
        DesignMode::PowerRelaxed,
        DesignMode::SignalLevel,
    ];
}

/// Feasibility tolerances used by [`verify`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Maximum received phase error in radians.
    pub phase: f64,
    /// Slack floor as a multiple of `−√γ`.
    pub slack: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            phase: 1e-6,
            slack: 1e-6,
        }
    }
}

/// Wedge constraints of the relaxed design.
#[derive(Clone, Debug)]
pub struct RelaxedBlock {
    /// `[H̃2 − b1·H̃1; b2·H̃1 − H̃2]`, `2N_U × 2N_t`.
    pub b1: RMatrix,
    /// `[a1·1; −a2·1]`.
    pub a: RVector,
    pub region: RelaxedRegion,
    /// Per-antenna rotation `exp(i(ψ − arg s_n))` that maps `s_n` onto the reference.
    pub rotation: CVector,
}

/// A design problem in reduced form: `min λᵀWλ s.t. B·λ ≥ target`, `w̃ = E·λ`.
#[derive(Clone, Debug)]
pub struct DesignProblem {
    pub mode: DesignMode,
    pub gamma: f64,
    pub n_t: usize,
    /// Diagonal of `A` (tan of symbol phases). Empty in relaxed mode.
    pub alpha: RVector,
    /// Stacked (relaxed: rotated) user channel.
    pub stacked: StackedChannel,
    /// Orthonormal basis, `2N_t × (2N_t − r′)`. Identity in relaxed mode.
    pub e: RMatrix,
    /// Numerical rank `r′` of `A·H1 − H2` (0 in relaxed mode).
    pub rank: usize,
    pub b: RMatrix,
    /// `Re(s)∘Re(s)`.
    pub s_r: RVector,
    pub target: RVector,
    /// `Eᵀ(H1ᵀH1 + H2ᵀH2)E` in signal-level mode.
    pub q: Option<RMatrix>,
    pub relaxed: Option<RelaxedBlock>,
}

impl DesignProblem {
    pub fn qp(&self) -> Qp {
        Qp::new(self.b.clone(), self.target.clone(), self.q.clone())
    }

    /// Free dimensions `2N_t − r′`.
    pub fn dof(&self) -> usize {
        self.e.ncols()
    }

    pub fn assemble(&self, lambda: &RVector) -> Result<CVector> {
        assemble(lambda, &self.e, self.n_t)
    }
}

/// `true` iff `2·n_t − rank > 0`.
pub fn check_feasibility(n_t: usize, rank: usize) -> bool {
    2 * n_t > rank
}

/// Orthonormal basis of the null space of `diag(alpha)·H1 − H2` and its rank.
pub fn null_basis(alpha: &RVector, st: &StackedChannel) -> Result<(RMatrix, usize)> {
    let (n_u, two_nt) = st.h1.shape();
    if st.h2.shape() != (n_u, two_nt) || alpha.len() != n_u || two_nt % 2 != 0 {
        return Err(Error::dim(format!(
            "alpha {} / H1 {:?} / H2 {:?}",
            alpha.len(),
            st.h1.shape(),
            st.h2.shape()
        )));
    }
    let mut c = st.h1.clone();
    for (r, a) in alpha.iter().enumerate() {
        c.row_mut(r).scale_mut(*a);
    }
    c -= &st.h2;
    let (e, rank) = linalg::null_space(&c, RANK_TOL);
    let n_t = two_nt / 2;
    if !check_feasibility(n_t, rank) {
        return Err(Error::EmptyNullSpace {
            n_t,
            rank,
            dof: 2 * n_t as isize - rank as isize,
        });
    }
    Ok((e, rank))
}

fn check_inputs(h_u: &CMatrix, s: &CVector, gamma: f64) -> Result<()> {
    if h_u.nrows() != s.len() {
        return Err(Error::dim(format!(
            "H_U has {} rows but s has {} entries",
            h_u.nrows(),
            s.len()
        )));
    }
    if h_u.nrows() == 0 || h_u.ncols() == 0 {
        return Err(Error::dim("empty channel"));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    if h_u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidParameter("non-finite channel entry".into()));
    }
    Ok(())
}

fn fixed_parts(h_u: &CMatrix, s: &CVector, gamma: f64) -> Result<DesignProblem> {
    check_inputs(h_u, s, gamma)?;
    let alpha = RVector::from_iterator(
        s.len(),
        s.iter().map(|&x| tan_of_phase(x)).collect::<Result<Vec<_>>>()?,
    );
    let st = stack(h_u);
    let (e, rank) = null_basis(&alpha, &st)?;
    let mut b = &st.h1 * &e;
    for (r, x) in s.iter().enumerate() {
        b.row_mut(r).scale_mut(x.re);
    }
    let s_r = s.map(|x| x.re * x.re);
    let target = &s_r * gamma.sqrt();
    Ok(DesignProblem {
        mode: DesignMode::PowerFixed,
        gamma,
        n_t: h_u.ncols(),
        alpha,
        stacked: st,
        e,
        rank,
        b,
        s_r,
        target,
        q: None,
        relaxed: None,
    })
}

/// Fixed-phase power minimization.
pub fn build_power_min_fixed(h_u: &CMatrix, s: &CVector, gamma: f64) -> Result<DesignProblem> {
    fixed_parts(h_u, s, gamma)
}

/// Signal-level minimization: fixed-phase constraints, objective `‖H_U w‖²`.
pub fn build_signal_level_min(h_u: &CMatrix, s: &CVector, gamma: f64) -> Result<DesignProblem> {
    let mut p = fixed_parts(h_u, s, gamma)?;
    let g = p.stacked.h1.tr_mul(&p.stacked.h1) + p.stacked.h2.tr_mul(&p.stacked.h2);
    let q = p.e.tr_mul(&(g * &p.e));
    p.q = Some((&q + q.transpose()) * 0.5);
    p.mode = DesignMode::SignalLevel;
    Ok(p)
}

/// Reference phase onto which every symbol is rotated in relaxed mode.
pub fn relaxed_reference(order: usize) -> f64 {
    PI / order as f64
}

/// Relaxed-phase power minimization for an `order`-PSK constellation.
pub fn build_power_min_relaxed(
    h_u: &CMatrix,
    s: &CVector,
    gamma: f64,
    order: usize,
) -> Result<DesignProblem> {
    check_inputs(h_u, s, gamma)?;
    let psi = relaxed_reference(order);
    let region = RelaxedRegion::new(Complex64::from_polar(1.0, psi), order, gamma)?;
    let rotation = s.map(|x| Complex64::from_polar(1.0, psi - x.arg()));
    let mut ht = h_u.clone();
    for r in 0..ht.nrows() {
        let rot = rotation[r];
        ht.row_mut(r).apply(|z| *z *= rot);
    }
    let st = stack(&ht);
    let (n_u, two_nt) = st.h1.shape();
    let mut b1 = RMatrix::zeros(2 * n_u, two_nt);
    b1.rows_mut(0, n_u).copy_from(&(&st.h2 - &st.h1 * region.b1));
    b1.rows_mut(n_u, n_u).copy_from(&(&st.h1 * region.b2 - &st.h2));
    let a = RVector::from_fn(2 * n_u, |i, _| if i < n_u { region.a1 } else { -region.a2 });
    Ok(DesignProblem {
        mode: DesignMode::PowerRelaxed,
        gamma,
        n_t: h_u.ncols(),
        alpha: RVector::zeros(0),
        stacked: st,
        e: RMatrix::identity(two_nt, two_nt),
        rank: 0,
        b: b1.clone(),
        s_r: s.map(|x| x.re * x.re),
        target: a.clone(),
        q: None,
        relaxed: Some(RelaxedBlock {
            b1,
            a,
            region,
            rotation,
        }),
    })
}

/// Builds the problem for `mode`.
pub fn build(mode: DesignMode, h_u: &CMatrix, s: &CVector, gamma: f64, order: usize) -> Result<DesignProblem> {
    match mode {
        DesignMode::PowerFixed => build_power_min_fixed(h_u, s, gamma),
        DesignMode::PowerRelaxed => build_power_min_relaxed(h_u, s, gamma, order),
        DesignMode::SignalLevel => build_signal_level_min(h_u, s, gamma),
    }
}

/// `w̃ = E·λ`, `w = w̃[..N_t] + i·w̃[N_t..]`.
pub fn assemble(lambda: &RVector, e: &RMatrix, n_t: usize) -> Result<CVector> {
    if lambda.len() != e.ncols() || e.nrows() != 2 * n_t {
        return Err(Error::dim(format!(
            "lambda {} vs E {:?} for N_t = {n_t}",
            lambda.len(),
            e.shape()
        )));
    }
    unstack_vec(&(e * lambda))
}

/// Constraint check of a precoder against its design's receive constraints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintReport {
    /// Largest `|arg(h_nᵀw) − arg(s_n)|` (principal value).
    pub max_phase_error: f64,
    /// Smallest amplitude slack (fixed-phase modes) or wedge slack (relaxed).
    pub min_slack: f64,
    pub feasible: bool,
}

/// Checks `w` against the receive constraints of `mode`.
///
/// `order` is only consulted in relaxed mode.
pub fn verify(
    w: &CVector,
    h_u: &CMatrix,
    s: &CVector,
    gamma: f64,
    mode: DesignMode,
    order: usize,
    tol: &Tolerance,
) -> ConstraintReport {
    let y = h_u * w;
    let sg = gamma.sqrt();
    let max_phase_error = y
        .iter()
        .zip(s.iter())
        .map(|(yi, si)| wrap_angle(yi.arg() - si.arg()).abs())
        .fold(0.0, f64::max);
    let slack_floor = -tol.slack * sg;
    match mode {
        DesignMode::PowerFixed | DesignMode::SignalLevel => {
            let min_slack = y
                .iter()
                .zip(s.iter())
                .map(|(yi, si)| si.re * yi.re - sg * si.re * si.re)
                .fold(f64::INFINITY, f64::min);
            ConstraintReport {
                max_phase_error,
                min_slack,
                feasible: max_phase_error <= tol.phase && min_slack >= slack_floor,
            }
        }
        DesignMode::PowerRelaxed => {
            let psi = relaxed_reference(order);
            let Ok(region) = RelaxedRegion::new(Complex64::from_polar(1.0, psi), order, gamma) else {
                return ConstraintReport {
                    max_phase_error,
                    min_slack: f64::NEG_INFINITY,
                    feasible: false,
                };
            };
            let min_slack = y
                .iter()
                .zip(s.iter())
                .map(|(yi, si)| {
                    let (e1, e2) = region.slacks(yi * Complex64::from_polar(1.0, psi - si.arg()));
                    e1.min(e2)
                })
                .fold(f64::INFINITY, f64::min);
            ConstraintReport {
                max_phase_error,
                min_slack,
                feasible: min_slack >= slack_floor,
            }
        }
    }
}

/// A designed precoder with diagnostics.
#[derive(Clone, Debug)]
pub struct PrecoderSolution {
    pub w: CVector,
    /// `‖w‖²` for power designs, `‖H_U w‖²` for signal-level.
    pub objective: f64,
    pub solver_used: SolverKind,
    pub iterations: usize,
    pub converged: bool,
    pub report: ConstraintReport,
    pub qp: QpSolution,
}

/// Solves a built problem and checks the result.
pub fn solve_problem(
    problem: &DesignProblem,
    h_u: &CMatrix,
    s: &CVector,
    solver: SolverKind,
    cfg: &PenaltyConfig,
    order: usize,
) -> Result<PrecoderSolution> {
    let qp = solvers::solve(&problem.qp(), solver, cfg)?;
    let w = problem.assemble(&qp.lambda)?;
    let objective = match problem.mode {
        DesignMode::SignalLevel => (h_u * &w).norm_squared(),
        _ => w.norm_squared(),
    };
    let report = verify(&w, h_u, s, problem.gamma, problem.mode, order, &Tolerance::default());
    Ok(PrecoderSolution {
        w,
        objective,
        solver_used: solver,
        iterations: qp.iterations,
        converged: qp.converged,
        report,
        qp,
    })
}

/// Builds and solves in one call.
pub fn design(
    h_u: &CMatrix,
    s: &CVector,
    gamma: f64,
    mode: DesignMode,
    solver: SolverKind,
    cfg: &PenaltyConfig,
    order: usize,
) -> Result<PrecoderSolution> {
    let p = build(mode, h_u, s, gamma, order)?;
    solve_problem(&p, h_u, s, solver, cfg, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{rayleigh, stack_vec};
    use crate::modulation::Constellation;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn symbols(n: usize, seed: u64) -> CVector {
        let c = Constellation::psk8();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..8)).collect();
        c.symbols(&idx)
    }

    fn nnls() -> (SolverKind, PenaltyConfig) {
        (SolverKind::Nnls, PenaltyConfig::default())
    }

    #[test]
    fn feasibility_rule() {
        assert!(check_feasibility(5, 9));
        assert!(!check_feasibility(5, 10));
        // Full rank: r' = N_U, so the rule is N_t > N_U / 2.
        for n_u in 1..12 {
            assert_eq!(check_feasibility(4, n_u), 4.0 > n_u as f64 / 2.0);
        }
    }

    #[test]
    fn null_basis_square_and_boundary() {
        let h = rayleigh(6, 6, 1);
        let p = build_power_min_fixed(&h, &symbols(6, 2), 2.0).unwrap();
        assert_eq!(p.rank, 6);
        assert_eq!(p.dof(), 6);
        let h = rayleigh(4, 2, 1);
        let err = build_power_min_fixed(&h, &symbols(4, 3), 2.0).unwrap_err();
        assert!(matches!(err, Error::EmptyNullSpace { dof: 0, .. }));
    }

    #[test]
    fn null_basis_residual_many() {
        for k in 0..100 {
            let h = rayleigh(5, 7, 100 + k);
            let p = build_power_min_fixed(&h, &symbols(5, k), 3.0).unwrap();
            let mut c = p.stacked.h1.clone();
            for r in 0..5 {
                c.row_mut(r).scale_mut(p.alpha[r]);
            }
            c -= &p.stacked.h2;
            assert!((&c * &p.e).amax() < 1e-9);
            let id = p.e.tr_mul(&p.e);
            assert!((id - RMatrix::identity(p.dof(), p.dof())).amax() < 1e-10);
            assert!(p.s_r.min() >= 0.0);
        }
    }

    #[test]
    fn scalar_hand_case() {
        let h = CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let s = CVector::from_element(1, Complex64::from_polar(1.0, PI / 8.0));
        let (k, cfg) = nnls();
        let sol = design(&h, &s, 1.0, DesignMode::PowerFixed, k, &cfg, 8).unwrap();
        assert!((sol.w[0] - s[0]).norm() < 1e-12);
        assert!((sol.objective - 1.0).abs() < 1e-12);
        let it = design(&h, &s, 1.0, DesignMode::PowerFixed, SolverKind::Iterative, &cfg, 8).unwrap();
        assert!((it.objective - 1.0).abs() < 1e-4);
        let scaled = design(&h, &s, 4.0, DesignMode::PowerFixed, k, &cfg, 8).unwrap();
        assert!((scaled.objective - 4.0).abs() < 1e-12);
    }

    #[test]
    fn iterative_matches_nnls_6x4() {
        let cfg = PenaltyConfig::default();
        for k in 0..20 {
            let h = rayleigh(4, 6, 40 + k);
            let s = symbols(4, k);
            let a = design(&h, &s, 10.0, DesignMode::PowerFixed, SolverKind::Nnls, &cfg, 8).unwrap();
            let b = design(&h, &s, 10.0, DesignMode::PowerFixed, SolverKind::Iterative, &cfg, 8).unwrap();
            assert!((a.objective - b.objective).abs() < 1e-3 * a.objective);
        }
    }

    #[test]
    fn relaxed_not_worse_and_detects() {
        let c = Constellation::psk8();
        let (k, cfg) = nnls();
        for seed in 0..30 {
            let h = rayleigh(6, 8, 500 + seed);
            let s = symbols(6, seed);
            let f = design(&h, &s, 20.0, DesignMode::PowerFixed, k, &cfg, 8).unwrap();
            let r = design(&h, &s, 20.0, DesignMode::PowerRelaxed, k, &cfg, 8).unwrap();
            assert!(r.report.feasible);
            assert!(r.objective <= f.objective * (1.0 + 1e-9));
            let y = &h * &r.w;
            let want: Vec<usize> = s.iter().map(|&x| c.detect(x)).collect();
            assert_eq!(c.detect_all(&y), want);
        }
    }

    #[test]
    fn signal_level_binds_when_square() {
        let (k, cfg) = nnls();
        for seed in 0..20 {
            let h = rayleigh(5, 5, 900 + seed);
            let s = symbols(5, seed);
            let g = 7.0;
            let sig = design(&h, &s, g, DesignMode::SignalLevel, k, &cfg, 8).unwrap();
            let pow = design(&h, &s, g, DesignMode::PowerFixed, k, &cfg, 8).unwrap();
            let y = &h * &sig.w;
            for v in y.iter() {
                assert!((v.norm_sqr() - g).abs() < 1e-6, "seed {seed}: {} vs {g}", v.norm_sqr());
            }
            let hp = (&h * &pow.w).norm_squared();
            assert!(sig.objective <= hp * (1.0 + 1e-9));
        }
    }

    #[test]
    fn assemble_identities() {
        let h = rayleigh(3, 5, 8);
        let p = build_power_min_fixed(&h, &symbols(3, 1), 2.0).unwrap();
        let zero = p.assemble(&RVector::zeros(p.dof())).unwrap();
        assert_eq!(zero, CVector::zeros(5));
        let lam = RVector::from_fn(p.dof(), |i, _| (i as f64 + 1.0).cos());
        let w = p.assemble(&lam).unwrap();
        assert!((w.norm_squared() - lam.norm_squared()).abs() < 1e-10);
        assert!((stack_vec(&w) - &p.e * &lam).amax() < 1e-15);
        assert!(assemble(&RVector::zeros(2), &p.e, 5).is_err());
    }

    #[test]
    fn verify_cases() {
        let h = rayleigh(3, 5, 81);
        let s = symbols(3, 4);
        let (k, cfg) = nnls();
        let sol = design(&h, &s, 5.0, DesignMode::PowerFixed, k, &cfg, 8).unwrap();
        assert!(sol.report.feasible);
        let tol = Tolerance::default();
        let zero = verify(&CVector::zeros(5), &h, &s, 5.0, DesignMode::PowerFixed, 8, &tol);
        assert!(!zero.feasible);
        let bumped = verify(&sol.w.map(|z| z * 1.001), &h, &s, 5.0, DesignMode::PowerFixed, 8, &tol);
        assert!(bumped.feasible);
        assert!(bumped.min_slack > sol.report.min_slack);
    }

    #[test]
    fn kkt_multipliers_certify_fixed() {
        let (k, cfg) = nnls();
        for seed in 0..30 {
            let h = rayleigh(4, 6, 300 + seed);
            let s = symbols(4, seed);
            let p = build_power_min_fixed(&h, &s, 10.0).unwrap();
            let sol = solvers::solve(&p.qp(), k, &cfg).unwrap();
            let mu = sol.multipliers.unwrap();
            assert!(mu.min() >= -1e-9);
            assert!((p.b.tr_mul(&mu) - &sol.lambda).amax() < 1e-8 * (1.0 + sol.lambda.amax()));
        }
    }

    #[test]
    fn relaxed_rejects_qpsk() {
        let h = rayleigh(2, 3, 1);
        let c = Constellation::new(4, PI / 4.0).unwrap();
        let s = c.symbols(&[0, 1]);
        assert!(build_power_min_relaxed(&h, &s, 2.0, 4).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn homogeneous_in_sqrt_gamma(n_u in 1usize..6, extra in 0usize..4, seed in 0u64..100_000, g in 0.5f64..50.0) {
            let n_t = n_u + extra.max(1);
            let h = rayleigh(n_u, n_t, seed);
            let s = symbols(n_u, seed);
            let (k, cfg) = nnls();
            for mode in [DesignMode::PowerFixed, DesignMode::SignalLevel] {
                let a = design(&h, &s, 1.0, mode, k, &cfg, 8).unwrap();
                let b = design(&h, &s, g, mode, k, &cfg, 8).unwrap();
                prop_assert!((b.w.clone() - a.w.map(|z| z * g.sqrt())).camax() < 1e-8 * (1.0 + b.w.camax()));
            }
        }

        #[test]
        fn noiseless_detection_all_modes(n_u in 1usize..7, extra in 0usize..5, seed in 0u64..100_000) {
            let n_t = n_u + extra;
            let c = Constellation::psk8();
            let h = rayleigh(n_u, n_t, seed);
            let s = symbols(n_u, seed ^ 77);
            let want: Vec<usize> = s.iter().map(|&x| c.detect(x)).collect();
            let (k, cfg) = nnls();
            for mode in DesignMode::ALL {
                let sol = design(&h, &s, 30.0, mode, k, &cfg, 8).unwrap();
                prop_assert!(sol.report.feasible);
                prop_assert_eq!(c.detect_all(&(&h * &sol.w)), want.clone());
            }
        }
    }
}
