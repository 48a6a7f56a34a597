//! Monte Carlo evaluation of one scenario point and sweeps over a parameter.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{DesignChoice, EveStrategy, ScenarioConfig};
use super::report::{PointReport, SnrTrace};
use crate::benchmark::{bench_mmse_matrix, bench_zf_matrix, symbol_covariance, BenchmarkLink};
use crate::channel::{awgn_from, rayleigh_from};
use crate::eavesdropper::{
    build_lookup, brute_force_ml, decode_users, estimate_c_w, index_to_symbols, min_norm_zf_matrix, table_size,
    zf_matrix, LookupTable, MmseEstimator, MmseForm,
};
use crate::modulation::Constellation;
use crate::precoder::{design, DesignMode};
use crate::solvers::{PenaltyConfig, SolverKind};
use crate::{CMatrix, CVector, Error, Result};

/// Relative tolerance for treating a receive constraint as binding.
const BIND_TOL: f64 = 1e-6;

/// Independent random streams owned by one trial.
struct TrialRngs {
    channel: ChaCha8Rng,
    symbols: ChaCha8Rng,
    eve_noise: ChaCha8Rng,
    cw_seed: u64,
}

fn trial_rngs(base_seed: u64, trial: usize) -> TrialRngs {
    let stream = |k: u64| {
        let mut r = ChaCha8Rng::seed_from_u64(base_seed);
        r.set_stream(((trial as u64) << 2) | k);
        r
    };
    TrialRngs {
        channel: stream(0),
        symbols: stream(1),
        eve_noise: stream(2),
        cw_seed: stream(3).next_u64(),
    }
}

/// Why instances were skipped.
#[derive(Clone, Copy, Debug, Default)]
struct SkipReasons {
    empty_null_space: usize,
    infeasible: usize,
    numerical: usize,
    rank: usize,
}

impl SkipReasons {
    fn add(&mut self, o: &SkipReasons) {
        self.empty_null_space += o.empty_null_space;
        self.infeasible += o.infeasible;
        self.numerical += o.numerical;
        self.rank += o.rank;
    }

    fn describe(&self, cfg: &ScenarioConfig) -> String {
        let (n_t, n_u) = (cfg.n_t, cfg.n_u());
        if self.rank > 0 {
            return format!("benchmark ZF precoding needs N_t >= N_U and full-rank H_U (N_t = {n_t}, N_U = {n_u})");
        }
        if self.empty_null_space >= self.infeasible.max(self.numerical) {
            return format!("phase constraints leave no null space: 2*N_t - rank <= 0 (N_t = {n_t}, N_U = {n_u})");
        }
        if self.infeasible >= self.numerical {
            return "the receive constraints admit no precoder on any drawn channel".into();
        }
        "every solve failed numerically".into()
    }
}

/// Per-trial sums; reduced sequentially after the parallel map.
#[derive(Clone, Debug, Default)]
struct Tally {
    vectors: usize,
    skipped: SkipReasons,
    violations: usize,
    power: f64,
    power_sq: f64,
    rx_power: f64,
    iterations: f64,
    user_symbols: usize,
    user_errors: usize,
    eve_symbols: usize,
    eve_errors: [usize; 4],
    eve_zf_min_norm: bool,
    traces: Vec<SnrTrace>,
}

impl Tally {
    fn add(&mut self, o: Tally) {
        self.vectors += o.vectors;
        self.skipped.add(&o.skipped);
        self.violations += o.violations;
        self.power += o.power;
        self.power_sq += o.power_sq;
        self.rx_power += o.rx_power;
        self.iterations += o.iterations;
        self.user_symbols += o.user_symbols;
        self.user_errors += o.user_errors;
        self.eve_symbols += o.eve_symbols;
        for k in 0..4 {
            self.eve_errors[k] += o.eve_errors[k];
        }
        self.eve_zf_min_norm |= o.eve_zf_min_norm;
        self.traces.extend(o.traces);
    }

    fn skipped(&self) -> usize {
        let s = &self.skipped;
        s.empty_null_space + s.infeasible + s.numerical + s.rank
    }
}

fn slot(s: EveStrategy) -> usize {
    match s {
        EveStrategy::Zf => 0,
        EveStrategy::Mmse => 1,
        EveStrategy::BruteForce => 2,
        EveStrategy::MmseAlternate => 3,
    }
}

fn errors(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Eavesdropper estimators prepared once per channel draw.
struct EveSide {
    zf: Option<CMatrix>,
    mmse: Option<MmseEstimator>,
    mmse_alt: Option<MmseEstimator>,
    table: Option<LookupTable>,
    min_norm: bool,
}

/// Decodes all users' symbols from `y_e` with one strategy, or `None`
/// when the strategy was not prepared.
fn eve_decode(side: &EveSide, strategy: EveStrategy, y_e: &CVector, h_u: &CMatrix, c: &Constellation) -> Option<Vec<usize>> {
    match strategy {
        EveStrategy::Zf => side.zf.as_ref().map(|g| decode_users(h_u, &(g * y_e), c)),
        EveStrategy::Mmse => side.mmse.as_ref().map(|m| decode_users(h_u, &m.estimate(y_e), c)),
        EveStrategy::MmseAlternate => side.mmse_alt.as_ref().map(|m| decode_users(h_u, &m.estimate(y_e), c)),
        EveStrategy::BruteForce => side
            .table
            .as_ref()
            .and_then(|t| brute_force_ml(y_e, t))
            .map(|(_, idx)| idx),
    }
}

/// Counts `n` skipped instances under the reason carried by `e`; other errors propagate.
fn classify(e: Error, n: usize, skipped: &mut SkipReasons) -> Result<()> {
    match e {
        Error::EmptyNullSpace { .. } => skipped.empty_null_space += n,
        Error::Infeasible => skipped.infeasible += n,
        Error::Numerical { reason, condition } => {
            log::warn!("skipping {n} instance(s): {reason} (condition {condition:.3e})");
            skipped.numerical += n;
        }
        other => return Err(other),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn directional_eve(
    cfg: &ScenarioConfig,
    mode: DesignMode,
    h_u: &CMatrix,
    h_e: &CMatrix,
    c: &Constellation,
    solver: SolverKind,
    pen: &PenaltyConfig,
    cw_seed: u64,
) -> Result<EveSide> {
    let mut side = EveSide {
        zf: None,
        mmse: None,
        mmse_alt: None,
        table: None,
        min_norm: false,
    };
    let wants = |s| cfg.eve_strategies.contains(&s);
    if wants(EveStrategy::Zf) {
        side.zf = Some(match zf_matrix(h_e) {
            Ok(g) => g,
            Err(Error::Capability(_)) => {
                side.min_norm = true;
                min_norm_zf_matrix(h_e)
            }
            Err(e) => return Err(e),
        });
    }
    if wants(EveStrategy::Mmse) || wants(EveStrategy::MmseAlternate) {
        let cov = estimate_c_w(mode, h_u, cfg.gamma(), c, cfg.cw_samples, cw_seed, cfg.cw_protocol(), solver, pen)?;
        if wants(EveStrategy::Mmse) {
            side.mmse = Some(MmseEstimator::new(h_e, &cov, cfg.noise_var_eve, cfg.mmse_form())?);
        }
        if wants(EveStrategy::MmseAlternate) {
            side.mmse_alt = Some(MmseEstimator::new(h_e, &cov, cfg.noise_var_eve, MmseForm::Alternate)?);
        }
    }
    if wants(EveStrategy::BruteForce) {
        side.table = Some(build_lookup(h_u, h_e, cfg.gamma(), c, mode, solver, pen, cfg.table_cap)?);
    }
    Ok(side)
}

fn benchmark_eve(cfg: &ScenarioConfig, link: &BenchmarkLink, h_e: &CMatrix, c: &Constellation) -> Result<EveSide> {
    let n_u = link.w.ncols();
    let beta = link.beta;
    let wants = |s| cfg.eve_strategies.contains(&s);
    let mut side = EveSide {
        zf: None,
        mmse: None,
        mmse_alt: None,
        table: None,
        min_norm: false,
    };
    // The benchmark attacks estimate β·s directly; decoding goes through an
    // identity "user channel" in eve_decode, so the estimators are stored
    // in the same slots with H_U replaced by I.
    if wants(EveStrategy::Zf) {
        side.zf = Some(match bench_zf_matrix(h_e, &link.w) {
            Ok(g) => g,
            Err(Error::Capability(_)) => {
                side.min_norm = true;
                min_norm_zf_matrix(&(h_e * &link.w))
            }
            Err(e) => return Err(e),
        });
    }
    let cs = symbol_covariance(n_u, beta);
    let as_estimator = |g: CMatrix, form| MmseEstimator::from_gain(g, CVector::zeros(n_u), h_e * &link.w, form);
    if wants(EveStrategy::Mmse) {
        let g = bench_mmse_matrix(h_e, &link.w, &cs, cfg.noise_var_eve, cfg.mmse_form())?;
        side.mmse = Some(as_estimator(g, cfg.mmse_form()));
    }
    if wants(EveStrategy::MmseAlternate) {
        let g = bench_mmse_matrix(h_e, &link.w, &cs, cfg.noise_var_eve, MmseForm::Alternate)?;
        side.mmse_alt = Some(as_estimator(g, MmseForm::Alternate));
    }
    if wants(EveStrategy::BruteForce) {
        let size = table_size(c.order(), n_u, cfg.table_cap)?;
        let entries = (0..size)
            .map(|i| {
                let x = link.transmit(&c.symbols(&index_to_symbols(i, c.order(), n_u)));
                let y = h_e * &x;
                Some((x, y))
            })
            .collect();
        side.table = Some(LookupTable {
            entries,
            order: c.order(),
            n_u,
            key: 0,
        });
    }
    Ok(side)
}

fn run_trial(cfg: &ScenarioConfig, c: &Constellation, trial: usize) -> Result<Tally> {
    let mut rngs = trial_rngs(cfg.base_seed, trial);
    let n_u = cfg.n_u();
    let h_u = rayleigh_from(&mut rngs.channel, n_u, cfg.n_t);
    let h_e = rayleigh_from(&mut rngs.channel, cfg.n_e, cfg.n_t);
    let solver: SolverKind = cfg.solver.into();
    let pen = cfg.penalty();
    let gamma = cfg.gamma();
    let mut t = Tally::default();

    let link = match cfg.design {
        DesignChoice::Benchmark => match BenchmarkLink::new(&h_u, cfg.beta()) {
            Ok(l) => Some(l),
            Err(Error::Capability(_)) | Err(Error::Numerical { .. }) => {
                t.vectors = cfg.symbols_per_channel;
                t.skipped.rank = cfg.symbols_per_channel;
                return Ok(t);
            }
            Err(e) => return Err(e),
        },
        _ => None,
    };
    let eye = CMatrix::identity(n_u, n_u);
    let side = match (&link, cfg.design.mode()) {
        (Some(l), _) => benchmark_eve(cfg, l, &h_e, c)?,
        (None, Some(mode)) => match directional_eve(cfg, mode, &h_u, &h_e, c, solver, &pen, rngs.cw_seed) {
            Ok(s) => s,
            Err(e) => {
                // The attack could not be prepared on this draw: skip the whole block.
                classify(e, cfg.symbols_per_channel, &mut t.skipped)?;
                t.vectors = cfg.symbols_per_channel;
                return Ok(t);
            }
        },
        (None, None) => unreachable!("non-benchmark designs have a mode"),
    };
    t.eve_zf_min_norm = side.min_norm;
    // Estimates map to user symbols through H_U (directional) or directly (benchmark).
    let decode_channel = if link.is_some() { &eye } else { &h_u };

    for v in 0..cfg.symbols_per_channel {
        t.vectors += 1;
        let idx: Vec<usize> = (0..n_u).map(|_| rngs.symbols.random_range(0..c.order())).collect();
        let s = c.symbols(&idx);
        let user_noise = awgn_from(&mut rngs.symbols, &CVector::zeros(n_u), 1.0)?;
        let eve_noise = awgn_from(&mut rngs.eve_noise, &CVector::zeros(cfg.n_e), 1.0)?;

        let (x, iterations) = match (&link, cfg.design.mode()) {
            (Some(l), _) => (l.transmit(&s), 0),
            (None, Some(mode)) => match design(&h_u, &s, gamma, mode, solver, &pen, c.order()) {
                Ok(sol) => {
                    if !sol.report.feasible {
                        t.violations += 1;
                    }
                    (sol.w, sol.iterations)
                }
                Err(e) => {
                    classify(e, 1, &mut t.skipped)?;
                    continue;
                }
            },
            (None, None) => unreachable!(),
        };

        let rx = &h_u * &x;
        let p = x.norm_squared();
        t.power += p;
        t.power_sq += p * p;
        t.rx_power += rx.norm_squared();
        t.iterations += iterations as f64;

        let y_u = &rx + user_noise.scale(cfg.noise_var_users.sqrt());
        t.user_symbols += n_u;
        t.user_errors += errors(&c.detect_all(&y_u), &idx);

        if cfg.record_snr {
            let sg = gamma.sqrt();
            let all_bind = rx.iter().all(|y| (y.norm() - sg).abs() <= BIND_TOL * sg);
            let nv = if cfg.noise_var_users > 0.0 { cfg.noise_var_users } else { 1.0 };
            t.traces.push(SnrTrace {
                trial,
                vector: v,
                snr_db: rx.iter().map(|y| crate::linear_to_db(y.norm_sqr() / nv)).collect(),
                all_bind,
            });
        }

        if !cfg.eve_strategies.is_empty() {
            let y_e = &h_e * &x + eve_noise.scale(cfg.noise_var_eve.sqrt());
            t.eve_symbols += n_u;
            for &st in &cfg.eve_strategies {
                if let Some(dec) = eve_decode(&side, st, &y_e, decode_channel, c) {
                    t.eve_errors[slot(st)] += errors(&dec, &idx);
                }
            }
        }
    }
    Ok(t)
}

/// Runs one scenario point: `trials` channel draws, each carrying
/// `symbols_per_channel` symbol vectors.
///
/// Trial `k` draws from ChaCha8 streams keyed by `(base_seed, k)`, so the
/// same seed yields the same channels, symbols and noise for every design
/// and every thread count. Instances whose design fails (empty null space,
/// empty constraint set, numerical breakdown) are skipped and counted.
pub fn run_point(cfg: &ScenarioConfig) -> Result<PointReport> {
    cfg.validate()?;
    let c = Constellation::new(cfg.order, cfg.phase_offset)?;
    let tallies: Vec<Result<Tally>> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| run_trial(cfg, &c, k))
        .collect();
    let mut total = Tally::default();
    for t in tallies {
        total.add(t?);
    }
    let evaluated = total.vectors - total.skipped();
    if evaluated == 0 {
        return Err(Error::AllInfeasible(total.skipped.describe(cfg)));
    }
    let n = evaluated as f64;
    let mean_power = total.power / n;
    let var = if evaluated > 1 {
        ((total.power_sq - n * mean_power * mean_power) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let rate = |e: usize, k: usize| e as f64 / k as f64;
    let ser_users = rate(total.user_errors, total.user_symbols);
    let eve = |s: EveStrategy| {
        (cfg.eve_strategies.contains(&s) && total.eve_symbols > 0).then(|| rate(total.eve_errors[slot(s)], total.eve_symbols))
    };
    Ok(PointReport {
        label: String::new(),
        sweep_param: None,
        sweep_value: None,
        design: cfg.design,
        solver: cfg.solver,
        n_t: cfg.n_t,
        n_u: cfg.n_u(),
        n_e: cfg.n_e,
        order: cfg.order,
        gamma_db: cfg.gamma_db,
        trials: cfg.trials,
        symbol_vectors: total.vectors,
        infeasible: total.skipped(),
        violations: total.violations,
        mean_power,
        power_stderr: (var / n).sqrt(),
        mean_rx_power: total.rx_power / n,
        ser_users,
        ser_users_stderr: (ser_users * (1.0 - ser_users) / total.user_symbols as f64).sqrt(),
        ser_eve_zf: eve(EveStrategy::Zf),
        ser_eve_mmse: eve(EveStrategy::Mmse),
        ser_eve_bf: eve(EveStrategy::BruteForce),
        ser_eve_mmse_alt: eve(EveStrategy::MmseAlternate),
        mean_iterations: total.iterations / n,
        eve_zf_min_norm: total.eve_zf_min_norm,
        snr_traces: total.traces,
    })
}

/// Runs every point of `cfg.sweep` (or the single base point when there is
/// no sweep). Each point reuses `base_seed`, so points see matched draws.
pub fn sweep(cfg: &ScenarioConfig, label: &str) -> Result<Vec<PointReport>> {
    let Some(spec) = &cfg.sweep else {
        let mut r = run_point(cfg)?;
        r.label = label.to_string();
        return Ok(vec![r]);
    };
    let mut out = Vec::with_capacity(spec.values.len());
    for &v in &spec.values {
        let mut point = cfg.clone();
        point.sweep = None;
        point.set_param(&spec.param, v)?;
        log::info!("{label}: {} = {v}", spec.param);
        let mut r = run_point(&point)?;
        r.label = label.to_string();
        r.sweep_param = Some(spec.param.clone());
        r.sweep_value = Some(v);
        out.push(r);
    }
    Ok(out)
}
