//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use dirmod::benchmark::{bench_eve_zf, BenchmarkLink};
use dirmod::channel::rayleigh_from;
use dirmod::eavesdropper::{
    brute_force_log2, complexity_estimate, zf_estimate, zf_matrix, ComplexityMethod, EveObservation, MmseEstimator,
    MmseForm, WCovariance,
};
use dirmod::modulation::Constellation;
use dirmod::precoder::{build, design, solve_problem, DesignMode, DesignProblem};
use dirmod::simulator::{
    brute_force_timing, run_point, ula_scenario, DesignChoice, EveStrategy, PointReport, ScenarioConfig, TimingConfig,
    UlaConfig,
};
use dirmod::solvers::{self, oracle_solve, penalty_solve, PenaltyConfig, Qp, SolverKind};
use dirmod::{db_to_linear, CMatrix, CVector, Error};

const GAMMA_DB: f64 = 15.56;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn check(name: &'static str, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f();
    let o = Outcome {
        name,
        pass,
        detail,
        elapsed: start.elapsed(),
    };
    println!(
        "{} {:<28} {:>7.1}s  {}",
        if o.pass { "PASS" } else { "FAIL" },
        o.name,
        o.elapsed.as_secs_f64(),
        o.detail
    );
    o
}

/// One random design instance: Rayleigh `H_U` and random 8-PSK symbols.
struct Instance {
    h_u: CMatrix,
    s: CVector,
}

fn random_instance(rng: &mut ChaCha8Rng, n_t: usize, n_u: usize, c: &Constellation) -> Instance {
    let h_u = rayleigh_from(rng, n_u, n_t);
    let idx: Vec<usize> = (0..n_u).map(|_| rng.random_range(0..c.order())).collect();
    Instance { h_u, s: c.symbols(&idx) }
}

/// `count` instances with `N_t ∈ [4,16]`, `N_U ≤ 2N_t − 1` whose fixed-phase design is feasible.
fn feasible_instances(count: usize, seed: u64) -> Vec<Instance> {
    let c = Constellation::psk8();
    let gamma = db_to_linear(GAMMA_DB);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n_t = rng.random_range(4..=16);
        let n_u = rng.random_range(1..=2 * n_t - 1);
        let inst = random_instance(&mut rng, n_t, n_u, &c);
        let p = build(DesignMode::PowerFixed, &inst.h_u, &inst.s, gamma, 8).expect("dof > 0");
        if solvers::solve(&p.qp(), SolverKind::Nnls, &PenaltyConfig::default()).is_ok() {
            out.push(inst);
        }
    }
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn monotone(obj: &[f64]) -> bool {
    obj.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-12)
}

fn constraint_satisfaction(instances: &[Instance]) -> (bool, String) {
    let c = Constellation::psk8();
    let gamma = db_to_linear(GAMMA_DB);
    let sg = gamma.sqrt();
    let pen = PenaltyConfig::default();
    let stats: Vec<(f64, f64, usize, usize, usize)> = instances
        .par_iter()
        .map(|inst| {
            let mut worst_phase: f64 = 0.0;
            let mut worst_slack = f64::INFINITY;
            let mut relaxed_bad = 0;
            let mut relaxed_run = 0;
            let mut fixed_bad = 0;
            for mode in [DesignMode::PowerFixed, DesignMode::SignalLevel] {
                let sol = design(&inst.h_u, &inst.s, gamma, mode, SolverKind::Nnls, &pen, 8)
                    .expect("fixed-phase instance was screened as feasible");
                worst_phase = worst_phase.max(sol.report.max_phase_error);
                worst_slack = worst_slack.min(sol.report.min_slack / sg);
                if !sol.report.feasible {
                    fixed_bad += 1;
                }
            }
            match design(&inst.h_u, &inst.s, gamma, DesignMode::PowerRelaxed, SolverKind::Nnls, &pen, c.order()) {
                Ok(sol) => {
                    relaxed_run += 1;
                    if !sol.report.feasible {
                        relaxed_bad += 1;
                    }
                }
                Err(Error::Infeasible) => {}
                Err(e) => panic!("relaxed design failed: {e}"),
            }
            (worst_phase, worst_slack, fixed_bad, relaxed_bad, relaxed_run)
        })
        .collect();
    let phase = stats.iter().map(|s| s.0).fold(0.0, f64::max);
    let slack = stats.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let fixed_bad: usize = stats.iter().map(|s| s.2).sum();
    let relaxed_bad: usize = stats.iter().map(|s| s.3).sum();
    let relaxed_run: usize = stats.iter().map(|s| s.4).sum();
    let pass = phase < 1e-6 && slack > -1e-6 && fixed_bad == 0 && relaxed_bad == 0;
    (
        pass,
        format!(
            "{} instances: max phase err {phase:.2e} rad, min slack/sqrt(gamma) {slack:.2e}, relaxed wedge failures {relaxed_bad}/{relaxed_run}",
            instances.len()
        ),
    )
}

fn solver_agreement(instances: &[Instance]) -> (bool, String) {
    let gamma = db_to_linear(GAMMA_DB);
    let pen = PenaltyConfig::default();
    let rels: Vec<f64> = instances
        .par_iter()
        .map(|inst| {
            let qp = build(DesignMode::PowerFixed, &inst.h_u, &inst.s, gamma, 8).unwrap().qp();
            let a = solvers::solve(&qp, SolverKind::Nnls, &pen).unwrap().objective;
            let b = solvers::solve(&qp, SolverKind::Iterative, &pen).unwrap().objective;
            rel(b, a)
        })
        .collect();
    let worst_pen = rels.iter().copied().fold(0.0, f64::max);
    let over = rels.iter().filter(|&&r| r > 1e-3).count();

    // Small instances with 2N_t − r′ ≤ 8 for the enumeration oracle.
    let c = Constellation::psk8();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0_7AC1E);
    let mut small = Vec::new();
    while small.len() < 200 {
        let n_t: usize = rng.random_range(2..=6);
        let n_u = rng.random_range((2 * n_t).saturating_sub(8).max(1)..=2 * n_t - 1);
        let inst = random_instance(&mut rng, n_t, n_u, &c);
        let p = build(DesignMode::PowerFixed, &inst.h_u, &inst.s, gamma, 8).unwrap();
        if p.dof() <= 8 && solvers::solve(&p.qp(), SolverKind::Nnls, &pen).is_ok() {
            small.push(p.qp());
        }
    }
    let oracle: Vec<(f64, f64)> = small
        .par_iter()
        .map(|qp| {
            let o = qp.objective(&oracle_solve(qp).unwrap());
            let n = solvers::solve(qp, SolverKind::Nnls, &pen).unwrap().objective;
            let p = solvers::solve(qp, SolverKind::Iterative, &pen).unwrap().objective;
            (rel(n, o), rel(p, o))
        })
        .collect();
    let worst_nnls = oracle.iter().map(|r| r.0).fold(0.0, f64::max);
    let worst_pen_oracle = oracle.iter().map(|r| r.1).fold(0.0, f64::max);
    let pen_over = oracle.iter().filter(|r| r.1 > 1e-6).count();
    let pass = over == 0 && worst_nnls <= 1e-6 && pen_over == 0;
    (
        pass,
        format!(
            "nnls vs penalty worst rel {worst_pen:.2e} ({over}/{} over 1e-3); oracle: nnls worst {worst_nnls:.2e}, penalty worst {worst_pen_oracle:.2e} ({pen_over}/200 over 1e-6)",
            rels.len()
        ),
    )
}

fn monotone_convergence(instances: &[Instance]) -> (bool, String) {
    let gamma = db_to_linear(GAMMA_DB);
    let plain = PenaltyConfig {
        max_iterations: 2000,
        ..PenaltyConfig::plain()
    };
    let bad: usize = instances
        .par_iter()
        .map(|inst| {
            let qp = build(DesignMode::PowerFixed, &inst.h_u, &inst.s, gamma, 8).unwrap().qp();
            [&plain, &PenaltyConfig::default()]
                .iter()
                .filter(|cfg| !monotone(&penalty_solve(&qp, cfg).unwrap().1.objective))
                .count()
        })
        .sum();
    (
        bad == 0,
        format!("{bad} non-monotone traces over {} instances (plain and accelerated)", instances.len()),
    )
}

fn feasibility_boundary() -> (bool, String) {
    let c = Constellation::psk8();
    let gamma = db_to_linear(GAMMA_DB);
    let pen = PenaltyConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
    let mut rejected = 0;
    let mut zero_cases = 0;
    let mut one_cases = 0;
    let mut one_ok = 0;
    let mut mismatched = 0;
    let mut other_errors = 0;
    for n_t in 2..=8 {
        for _ in 0..50 {
            let inst = random_instance(&mut rng, n_t, 2 * n_t, &c);
            zero_cases += 1;
            if matches!(
                design(&inst.h_u, &inst.s, gamma, DesignMode::PowerFixed, SolverKind::Nnls, &pen, 8),
                Err(Error::EmptyNullSpace { .. })
            ) {
                rejected += 1;
            }

            let inst = random_instance(&mut rng, n_t, 2 * n_t - 1, &c);
            one_cases += 1;
            let p = build(DesignMode::PowerFixed, &inst.h_u, &inst.s, gamma, 8).unwrap();
            // One free direction: feasible iff every constraint row points the same way.
            let col = p.b.column(0);
            let cone = col.iter().all(|&v| v > 0.0) || col.iter().all(|&v| v < 0.0);
            match solve_problem(&p, &inst.h_u, &inst.s, SolverKind::Nnls, &pen, 8) {
                Ok(sol) => {
                    one_ok += 1;
                    if !cone || !sol.report.feasible {
                        mismatched += 1;
                    }
                }
                Err(Error::Infeasible) => {
                    if cone {
                        mismatched += 1;
                    }
                }
                Err(_) => other_errors += 1,
            }
        }
    }
    let pass = rejected == zero_cases && mismatched == 0 && other_errors == 0;
    (
        pass,
        format!(
            "dof 0 rejected {rejected}/{zero_cases}; dof 1 feasibility rate {:.3} ({one_ok}/{one_cases}), cone mismatches {mismatched}, other errors {other_errors}",
            one_ok as f64 / one_cases as f64
        ),
    )
}

fn scenario(n_t: usize, n_u: usize, n_e: usize, design: DesignChoice) -> ScenarioConfig {
    ScenarioConfig {
        n_t,
        n_e,
        user_antenna_counts: vec![1; n_u],
        design,
        eve_strategies: vec![],
        ..ScenarioConfig::default()
    }
}

fn noiseless_identities() -> (bool, String) {
    let mut sers = Vec::new();
    for d in [DesignChoice::PowerFixed, DesignChoice::PowerRelaxed, DesignChoice::SignalLevel] {
        let cfg = ScenarioConfig {
            noise_var_users: 0.0,
            trials: 20,
            symbols_per_channel: 20,
            ..scenario(8, 6, 8, d)
        };
        sers.push(run_point(&cfg).unwrap().ser_users);
    }

    let c = Constellation::psk8();
    let gamma = db_to_linear(GAMMA_DB);
    let pen = PenaltyConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut zf_err: f64 = 0.0;
    let mut bench_err: f64 = 0.0;
    for k in 0..100 {
        let n_t = rng.random_range(4..=12);
        let n_u = rng.random_range(1..=n_t);
        let n_e = n_t + k % 4;
        let inst = random_instance(&mut rng, n_t, n_u, &c);
        let h_e = rayleigh_from(&mut rng, n_e, n_t);
        if let Ok(sol) = design(&inst.h_u, &inst.s, gamma, DesignMode::PowerFixed, SolverKind::Nnls, &pen, 8) {
            let obs = EveObservation {
                y_e: &h_e * &sol.w,
                h_e: h_e.clone(),
                h_u: inst.h_u.clone(),
                noise_var: 0.0,
            };
            let w_hat = zf_estimate(&obs).unwrap();
            zf_err = zf_err.max((w_hat - &sol.w).camax() / sol.w.camax());
        }
        let h_e = rayleigh_from(&mut rng, n_u + k % 3, n_t);
        let link = BenchmarkLink::new(&inst.h_u, gamma.sqrt()).unwrap();
        let y = &h_e * link.transmit(&inst.s);
        let est = bench_eve_zf(&h_e, &link.w, &y).unwrap();
        bench_err = bench_err.max((est - inst.s.scale(link.beta)).camax() / link.beta);
    }
    let pass = sers.iter().all(|&s| s == 0.0) && zf_err < 1e-10 && bench_err < 1e-10;
    (
        pass,
        format!("user SER (fixed, relaxed, signal) {sers:?}; ZF w error {zf_err:.2e}; benchmark beta*s error {bench_err:.2e}"),
    )
}

fn security_gap() -> (bool, String) {
    let run = |d: DesignChoice, n_e: usize| -> PointReport {
        let cfg = ScenarioConfig {
            eve_strategies: vec![EveStrategy::Zf],
            ..scenario(16, 10, n_e, d)
        };
        run_point(&cfg).unwrap()
    };
    let bench = run(DesignChoice::Benchmark, 15);
    let bench_zf = bench.ser_eve_zf.unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for d in [DesignChoice::PowerFixed, DesignChoice::PowerRelaxed, DesignChoice::SignalLevel] {
        let r = run(d, 15);
        let eve = r.ser_eve_zf.unwrap();
        pass &= r.ser_users <= 1e-2 && eve >= 0.1 && bench_zf * 5.0 <= eve;
        parts.push(format!("{} users {:.1e} eve {:.3}", d.name(), r.ser_users, eve));
    }
    parts.push(format!("benchmark eve {bench_zf:.2e}"));
    (pass, parts.join("; "))
}

fn mean_power_db(n_t: usize, n_u: usize, d: DesignChoice) -> f64 {
    let cfg = ScenarioConfig {
        trials: 200,
        symbols_per_channel: 20,
        ..scenario(n_t, n_u, n_t, d)
    };
    run_point(&cfg).unwrap().mean_power_db()
}

fn power_orderings() -> (bool, String) {
    let fixed = mean_power_db(10, 10, DesignChoice::PowerFixed);
    let relaxed = mean_power_db(10, 10, DesignChoice::PowerRelaxed);
    let signal = mean_power_db(10, 10, DesignChoice::SignalLevel);
    let bench = mean_power_db(10, 10, DesignChoice::Benchmark);
    let gap = fixed - relaxed;
    let mut pass = (1.5..=3.5).contains(&gap) && (signal - bench).abs() <= 1.0;
    let mut detail = format!(
        "Nt=Nu=10: fixed {fixed:.2} relaxed {relaxed:.2} (gap {gap:.2}) signal {signal:.2} benchmark {bench:.2} dB"
    );
    for (n_t, n_u) in [(16, 8), (20, 10)] {
        let p: Vec<f64> = DesignChoice::ALL.iter().map(|&d| mean_power_db(n_t, n_u, d)).collect();
        let spread = p.iter().copied().fold(f64::MIN, f64::max) - p.iter().copied().fold(f64::MAX, f64::min);
        pass &= spread <= 0.5;
        detail.push_str(&format!("; Nt={n_t},Nu={n_u} spread {spread:.2} dB"));
    }
    (pass, detail)
}

fn signal_level_fairness() -> (bool, String) {
    let cfg = ScenarioConfig {
        record_snr: true,
        trials: 100,
        symbols_per_channel: 20,
        ..scenario(8, 8, 8, DesignChoice::SignalLevel)
    };
    let r = run_point(&cfg).unwrap();
    let binding: Vec<_> = r.snr_traces.iter().filter(|t| t.all_bind).collect();
    let worst = binding
        .iter()
        .flat_map(|t| t.snr_db.iter())
        .map(|v| (v - GAMMA_DB).abs())
        .fold(0.0, f64::max);

    let c = Constellation::psk8();
    let gamma = db_to_linear(GAMMA_DB);
    let pen = PenaltyConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xFA1);
    let mut matched = 0;
    let mut not_lower = 0;
    for _ in 0..500 {
        let n_t = rng.random_range(4..=12);
        let n_u = rng.random_range(1..=2 * n_t - 1);
        let inst = random_instance(&mut rng, n_t, n_u, &c);
        let run = |m| design(&inst.h_u, &inst.s, gamma, m, SolverKind::Nnls, &pen, 8);
        if let (Ok(f), Ok(s)) = (run(DesignMode::PowerFixed), run(DesignMode::SignalLevel)) {
            matched += 1;
            let rx_f = (&inst.h_u * &f.w).norm_squared();
            let rx_s = (&inst.h_u * &s.w).norm_squared();
            // Constraints hold to 1e-6 relative, so objectives compare at that precision.
            if rx_s > rx_f * (1.0 + 1e-6) {
                not_lower += 1;
            }
        }
    }
    let pass = worst <= 0.1 && !binding.is_empty() && not_lower == 0;
    (
        pass,
        format!(
            "{} all-binding vectors of {}, worst SNR deviation {worst:.2e} dB; signal-level rx power above fixed-phase on {not_lower}/{matched}",
            binding.len(),
            r.snr_traces.len()
        ),
    )
}

fn mmse_behavior() -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n_t, n_u, n_e) in [(16, 10, 15), (16, 10, 18), (14, 8, 14)] {
        let cfg = ScenarioConfig {
            eve_strategies: vec![EveStrategy::Zf, EveStrategy::Mmse],
            trials: 100,
            symbols_per_channel: 50,
            ..scenario(n_t, n_u, n_e, DesignChoice::PowerFixed)
        };
        let r = run_point(&cfg).unwrap();
        let (zf, mmse) = (r.ser_eve_zf.unwrap(), r.ser_eve_mmse.unwrap());
        pass &= mmse <= zf;
        parts.push(format!("({n_t},{n_u},{n_e}) zf {zf:.3} mmse {mmse:.3}"));
    }

    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x33);
    for k in 0..50 {
        let n_t = 4 + k % 8;
        let h_e = rayleigh_from(&mut rng, n_t + k % 3, n_t);
        let est = MmseEstimator::new(&h_e, &WCovariance::scaled_identity(n_t, 2.0), 1e-8, MmseForm::Textbook).unwrap();
        let g = zf_matrix(&h_e).unwrap();
        let y = rayleigh_from(&mut rng, n_t + k % 3, 1).column(0).into_owned();
        let (a, b) = (est.estimate(&y), &g * &y);
        worst = worst.max((a - &b).norm() / b.norm());
    }
    pass &= worst < 1e-3;
    parts.push(format!("sigma2=1e-8 zf/mmse rel diff {worst:.2e}"));
    (pass, parts.join("; "))
}

fn brute_force() -> (bool, String) {
    let cfg = ScenarioConfig {
        order: 2,
        eve_strategies: vec![EveStrategy::Zf, EveStrategy::Mmse, EveStrategy::BruteForce],
        trials: 200,
        symbols_per_channel: 50,
        cw_samples: 200,
        ..scenario(6, 4, 6, DesignChoice::PowerFixed)
    };
    let r = run_point(&cfg).unwrap();
    let (zf, mmse, bf) = (r.ser_eve_zf.unwrap(), r.ser_eve_mmse.unwrap(), r.ser_eve_bf.unwrap());
    let evaluated = r.symbol_vectors - r.infeasible;
    let ser_ok = bf <= zf.min(mmse);

    let mut rows = Vec::new();
    for (orders, n_u_values) in [(vec![2], vec![2, 4, 6, 8, 10]), (vec![4], vec![6])] {
        rows.extend(
            brute_force_timing(&TimingConfig {
                orders,
                n_u_values,
                lookups: 2000,
                ..TimingConfig::default()
            })
            .unwrap(),
        );
    }
    rows.sort_by_key(|r| r.table_size);
    let grows = rows.windows(2).all(|w| w[1].lookup_seconds > w[0].lookup_seconds);
    let times: Vec<String> = rows
        .iter()
        .map(|r| format!("{}:{:.1e}", r.table_size, r.lookup_seconds))
        .collect();
    let log2 = brute_force_log2(32, 52);
    let count = complexity_estimate(16, 52, 16, 32, 1e-6, ComplexityMethod::BruteForce { digits: 16.0 });
    let symbolic = log2 == 260.0 && (count.log2() - 260.0) > 0.0;
    (
        ser_ok && grows && symbolic,
        format!(
            "{evaluated} vectors: ml {bf:.4} zf {zf:.4} mmse {mmse:.4}; lookup s by size [{}]; log2(32^52) = {log2}",
            times.join(" ")
        ),
    )
}

fn ula_profile() -> (bool, String) {
    let cfg = UlaConfig::default();
    let p = ula_scenario(&cfg).unwrap();
    let at_users = cfg.user_angles_deg.iter().map(|&a| p.at(a).ser).fold(0.0, f64::max);
    let far: Vec<_> = p.points.iter().filter(|pt| pt.distance_deg >= 20.0).collect();
    let far_min = far.iter().map(|pt| pt.ser).fold(1.0, f64::min);
    (
        at_users <= 1e-2 && far_min >= 0.3,
        format!(
            "{} symbols: max SER at users {at_users:.2e}, min SER >=20 deg away {far_min:.3} over {} angles",
            p.symbols,
            far.len()
        ),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn solver_speed() -> (bool, String) {
    let c = Constellation::psk8();
    let gamma = db_to_linear(GAMMA_DB);
    let pen = PenaltyConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5BEED);
    let mut qps: Vec<Qp> = Vec::new();
    while qps.len() < 100 {
        let inst = random_instance(&mut rng, 6, 6, &c);
        let p: DesignProblem = build(DesignMode::PowerFixed, &inst.h_u, &inst.s, gamma, 8).unwrap();
        if solvers::solve(&p.qp(), SolverKind::Nnls, &pen).is_ok() {
            qps.push(p.qp());
        }
    }
    let time = |kind: SolverKind| {
        median(
            qps.iter()
                .map(|qp| {
                    let start = Instant::now();
                    match kind {
                        SolverKind::Oracle => {
                            std::hint::black_box(oracle_solve(qp).unwrap());
                        }
                        k => {
                            std::hint::black_box(solvers::solve(qp, k, &pen).unwrap());
                        }
                    }
                    start.elapsed().as_secs_f64()
                })
                .collect(),
        )
    };
    let (n, i, o) = (time(SolverKind::Nnls), time(SolverKind::Iterative), time(SolverKind::Oracle));
    (
        n < i && i < o,
        format!("median seconds: nnls {n:.2e} iterative {i:.2e} oracle {o:.2e}"),
    )
}

fn timed(limit_s: f64, f: impl FnOnce() -> (bool, String)) -> impl FnOnce() -> (bool, String) {
    move || {
        let start = Instant::now();
        let (pass, detail) = f();
        let t = start.elapsed().as_secs_f64();
        (pass && t < limit_s, format!("{detail}; {t:.1}s (limit {limit_s:.0}s)"))
    }
}

fn main() {
    let start = Instant::now();
    let instances = feasible_instances(1000, 0xACCE);
    println!("generated {} feasible instances in {:.1}s", instances.len(), start.elapsed().as_secs_f64());

    let results = vec![
        check("constraint_satisfaction", timed(120.0, || constraint_satisfaction(&instances))),
        check("solver_cross_agreement", || solver_agreement(&instances)),
        check("monotone_convergence", || monotone_convergence(&instances)),
        check("feasibility_boundary", feasibility_boundary),
        check("noiseless_identities", noiseless_identities),
        check("security_gap", timed(600.0, security_gap)),
        check("power_orderings", power_orderings),
        check("signal_level_fairness", signal_level_fairness),
        check("mmse_behavior", mmse_behavior),
        check("brute_force", brute_force),
        check("ula_profile", timed(300.0, ula_profile)),
        check("solver_speed_ordering", solver_speed),
    ];
    let failed: Vec<&str> = results.iter().filter(|o| !o.pass).map(|o| o.name).collect();
    println!(
        "{}/{} criteria passed in {:.1}s",
        results.len() - failed.len(),
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
