use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{instance_seed, Algorithm, ExperimentRecord, RecoveryMethod};
use crate::amp::{amp_recover, AmpFailure, DEFAULT_EPS, DEFAULT_T_MAX};
use crate::bounds::{exact_size_bounds, k_max, r_continuous, stop_probability_real};
use crate::error::{Error, Result};
use crate::graph::{gen_gnp, Clique, PlantSpec};
use crate::greedy::{cleanup, default_k_stop, early_stop_search_budget, EarlyStopLevel, EarlyStopRun};
use crate::rng::{hash_str, SeededRng};
use crate::spectral::{
    k_for_alpha, mean_std, planted_instance, power_top, rank_components, rank_plateau, second_eigen,
    spectral_recover, EigenPair, SpectralConfig,
};

/// Mean clique size of one algorithm at one `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaircaseRow {
    pub n: usize,
    pub p: f64,
    pub algorithm: String,
    pub samples: usize,
    pub mean: f64,
    pub std: f64,
    pub log2_n: f64,
    pub k_max: u64,
    pub r: f64,
}

#[derive(Clone, Debug)]
pub struct Staircase {
    pub records: Vec<ExperimentRecord>,
    pub summary: Vec<StaircaseRow>,
}

/// Run every algorithm on `samples` graphs per `n`. All algorithms see the
/// same graphs; records come back ordered by `n`, algorithm, replicate.
pub fn exp_staircase(
    n_grid: &[usize],
    p: f64,
    algorithms: &[Algorithm],
    samples: usize,
    base_seed: u64,
) -> Result<Staircase> {
    let records = run_grid("staircase", n_grid, p, algorithms, samples, base_seed)?;
    let mut summary = Vec::new();
    for &n in n_grid {
        let km = k_max(n as u64, p)?;
        let r = r_continuous(n as f64, p).unwrap_or(f64::NAN);
        for a in algorithms {
            let name = a.to_string();
            let sizes: Vec<f64> = records
                .iter()
                .filter(|r| r.n == n && r.algorithm == name)
                .map(|r| r.k_found.unwrap_or(0) as f64)
                .collect();
            let (mean, std) = mean_std(&sizes);
            summary.push(StaircaseRow {
                n,
                p,
                algorithm: name,
                samples: sizes.len(),
                mean,
                std,
                log2_n: (n as f64).log2(),
                k_max: km,
                r,
            });
        }
    }
    Ok(Staircase { records, summary })
}

fn run_grid(
    experiment: &str,
    n_grid: &[usize],
    p: f64,
    algorithms: &[Algorithm],
    samples: usize,
    base_seed: u64,
) -> Result<Vec<ExperimentRecord>> {
    let jobs: Vec<(usize, u64)> = n_grid
        .iter()
        .flat_map(|&n| (0..samples as u64).map(move |rep| (n, rep)))
        .collect();
    let per_graph: Vec<Vec<ExperimentRecord>> = jobs
        .into_par_iter()
        .map(|(n, rep)| {
            let seed = instance_seed(base_seed, experiment, n, p, 0.0, rep);
            let g = gen_gnp(n, p, seed)?;
            let km = k_max(n as u64, p)?;
            algorithms
                .iter()
                .map(|a| {
                    let name = a.to_string();
                    let mut rng = SeededRng::new(seed).child(hash_str(&name));
                    let start = Instant::now();
                    let out = a.run(&g, &mut rng)?;
                    let mut rec = ExperimentRecord::new(experiment, n, p, &name, seed);
                    rec.seconds = start.elapsed().as_secs_f64();
                    rec.i = a.i_for(n);
                    rec.k_found = Some(out.clique.size());
                    rec.k_max_pred = Some(km);
                    rec.delta = Some(out.delta);
                    rec.iterations = Some(out.iterations_t);
                    Ok(rec)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records: Vec<ExperimentRecord> = per_graph.into_iter().flatten().collect();
    // Graph-major to (n, algorithm, replicate) order.
    let algo_rank = |name: &str| algorithms.iter().position(|a| a.to_string() == name).unwrap_or(usize::MAX);
    records.sort_by_key(|r| (r.n, algo_rank(&r.algorithm)));
    Ok(records)
}

/// Fractions of runs ending at `K_max − 1`, `K_max`, `K_max + 1`, beside
/// the bounds on the probability that the maximum clique has each size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepFractionRow {
    pub n: usize,
    pub p: f64,
    pub algorithm: String,
    pub samples: usize,
    pub k_max: u64,
    pub frac_below: f64,
    pub frac_at: f64,
    pub frac_above: f64,
    pub env_below_lo: f64,
    pub env_below_hi: f64,
    pub env_at_lo: f64,
    pub env_at_hi: f64,
    pub env_above_lo: f64,
    pub env_above_hi: f64,
}

impl StepFractionRow {
    /// Binomial standard error of a fraction over this row's samples.
    pub fn std_err(&self, frac: f64) -> f64 {
        (frac * (1.0 - frac) / self.samples.max(1) as f64).sqrt()
    }
}

pub fn exp_step_fractions(
    n_grid: &[usize],
    p: f64,
    algorithms: &[Algorithm],
    samples: usize,
    base_seed: u64,
) -> Result<(Vec<ExperimentRecord>, Vec<StepFractionRow>)> {
    let records = run_grid("step-fractions", n_grid, p, algorithms, samples, base_seed)?;
    let mut rows = Vec::new();
    for &n in n_grid {
        let km = k_max(n as u64, p)?;
        let env = |k: u64| exact_size_bounds(n as u64, k, p);
        let (bl, bh) = env(km.saturating_sub(1))?;
        let (al, ah) = env(km)?;
        let (ul, uh) = env(km + 1)?;
        for a in algorithms {
            let name = a.to_string();
            let sizes: Vec<u64> = records
                .iter()
                .filter(|r| r.n == n && r.algorithm == name)
                .map(|r| r.k_found.unwrap_or(0) as u64)
                .collect();
            let frac = |k: u64| sizes.iter().filter(|&&s| s == k).count() as f64 / sizes.len().max(1) as f64;
            rows.push(StepFractionRow {
                n,
                p,
                algorithm: name,
                samples: sizes.len(),
                k_max: km,
                frac_below: frac(km.saturating_sub(1)),
                frac_at: frac(km),
                frac_above: frac(km + 1),
                env_below_lo: bl,
                env_below_hi: bh,
                env_at_lo: al,
                env_at_hi: ah,
                env_above_lo: ul,
                env_above_hi: uh,
            });
        }
    }
    Ok((records, rows))
}

/// Least-squares fit of `K / (2 log2 N) = A log2 N + B` and the order at
/// which the fit reaches one half.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtrapolationFit {
    pub a: f64,
    pub b: f64,
    /// `2^((0.5 − B) / A)`.
    pub crossing_n: f64,
    pub points: usize,
}

/// Fit `(n, mean clique size)` points; needs at least five.
pub fn exp_extrapolate(points: &[(f64, f64)]) -> Result<ExtrapolationFit> {
    if points.len() < 5 {
        return Err(Error::invalid(format!("extrapolation needs at least 5 points, got {}", points.len())));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(n, k)| (n.log2(), k / (2.0 * n.log2()))).collect();
    let m = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / m;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= f64::EPSILON * m * mx.abs().max(1.0) {
        return Err(Error::SingularFit("all points share one order".into()));
    }
    let a = sxy / sxx;
    let b = my - a * mx;
    if a.abs() < 1e-14 {
        return Err(Error::SingularFit("flat fit never crosses one half".into()));
    }
    Ok(ExtrapolationFit { a, b, crossing_n: ((0.5 - b) / a).exp2(), points: points.len() })
}

/// `(n, mean)` points of one algorithm from a staircase summary.
pub fn staircase_points(rows: &[StaircaseRow], algorithm: &str) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| r.algorithm == algorithm)
        .map(|r| (r.n as f64, r.mean))
        .collect()
}

/// Settings shared by the recovery methods.
#[derive(Clone, Debug)]
pub struct RecoveryOptions {
    pub t_max: usize,
    pub eps: f64,
    /// Early-stop size; `None` uses `⌈R(N)⌉ + 2`.
    pub k_stop: Option<usize>,
    /// Start budget for the early-stopped searches.
    pub max_starts: Option<u64>,
    pub spectral: SpectralConfig,
    /// Hint strength on the 0/1-scaled scale; 0 disables the hint.
    pub e0: f64,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self {
            t_max: DEFAULT_T_MAX,
            eps: DEFAULT_EPS,
            k_stop: None,
            max_starts: None,
            spectral: SpectralConfig::plus_minus(true),
            e0: 0.0,
        }
    }
}

fn contains_plant(c: &Clique, plant: &PlantSpec) -> bool {
    plant.vertices.iter().all(|&v| c.contains(v))
}

/// One recovery attempt on the planted instance with `seed`.
pub fn run_recovery(
    method: RecoveryMethod,
    n: usize,
    p: f64,
    alpha: f64,
    seed: u64,
    opts: &RecoveryOptions,
) -> Result<ExperimentRecord> {
    let k_hc = k_for_alpha(n, alpha);
    if k_hc < 2 {
        return Err(Error::invalid(format!("alpha = {alpha} plants fewer than two vertices at n = {n}")));
    }
    let (g, plant) = planted_instance(n, p, k_hc, seed)?;
    let plant = plant.expect("k_hc >= 2 plants a clique");
    let mut rec = ExperimentRecord::new("recovery", n, p, &method.to_string(), seed);
    rec.alpha = Some(alpha);
    let mut rng = SeededRng::new(seed).child(hash_str(&method.to_string()));
    let start = Instant::now();
    let (clique, failure): (Option<Clique>, Option<String>) = match method {
        RecoveryMethod::Amp => {
            let out = amp_recover::<f32, _>(&g, k_hc, &mut rng, opts.t_max, opts.eps)?;
            rec.iterations = Some(out.iterations);
            let fail = out.failure.map(|f| match f {
                AmpFailure::NonConvergence => "non-convergence",
                AmpFailure::Blowup => "blowup",
                AmpFailure::WrongSet => "wrong-set",
            });
            (out.clique, fail.map(str::to_string))
        }
        RecoveryMethod::Sm1Es | RecoveryMethod::Sm2Es => {
            let level = if method == RecoveryMethod::Sm1Es { EarlyStopLevel::Vertices } else { EarlyStopLevel::Edges };
            let k_stop = match opts.k_stop {
                Some(k) => k,
                None => default_k_stop(n, p)?,
            };
            let out = early_stop_search_budget(&g, level, k_stop, &mut rng, opts.max_starts.unwrap_or(u64::MAX))?;
            rec.delta = Some(out.delta);
            rec.iterations = Some(out.starts_used as usize);
            if out.stopped_early && out.clique.size() >= 2 {
                (Some(cleanup(&g, &out.clique, k_hc)?), None)
            } else if out.starts_used < out.total_starts {
                (None, Some("budget".to_string()))
            } else {
                (None, Some("no-stop".to_string()))
            }
        }
        RecoveryMethod::Spectral => {
            let mut cfg = opts.spectral.clone();
            if opts.e0 > 0.0 {
                cfg = cfg.with_hint(plant.vertices[0], opts.e0, n);
                rec.e0 = Some(opts.e0);
            }
            let out = spectral_recover(&g, k_hc, &cfg, &mut rng)?;
            rec.iterations = Some(out.top.iterations);
            (out.clique, None)
        }
    };
    rec.seconds = start.elapsed().as_secs_f64();
    rec.k_found = clique.as_ref().map(Clique::size);
    let success = clique.as_ref().is_some_and(|c| contains_plant(c, &plant));
    rec.success = Some(success);
    rec.failure = match (success, failure) {
        (true, _) => None,
        (false, Some(f)) => Some(f),
        (false, None) => Some("wrong-set".to_string()),
    };
    Ok(rec)
}

/// Early-stopped recovery on several graphs at once, advancing each search
/// `slice` starts at a time in turn. Ends at the first success, or when every
/// search has finished or used `opts.max_starts`. Each graph follows the same
/// start order as [`run_recovery`], so a success here is the one
/// [`run_recovery`] would report. Graphs left unfinished get failure
/// `"budget"`; `seconds` is the time spent on that graph.
pub fn run_es_round_robin(
    method: RecoveryMethod,
    n: usize,
    p: f64,
    alpha: f64,
    seeds: &[u64],
    opts: &RecoveryOptions,
    slice: u64,
) -> Result<Vec<ExperimentRecord>> {
    let level = match method {
        RecoveryMethod::Sm1Es => EarlyStopLevel::Vertices,
        RecoveryMethod::Sm2Es => EarlyStopLevel::Edges,
        _ => return Err(Error::invalid(format!("{method} is not an early-stop method"))),
    };
    if slice == 0 {
        return Err(Error::invalid("slice must be positive"));
    }
    let k_hc = k_for_alpha(n, alpha);
    let k_stop = match opts.k_stop {
        Some(k) => k,
        None => default_k_stop(n, p)?,
    };
    let cap = opts.max_starts.unwrap_or(u64::MAX);
    let instances = seeds
        .iter()
        .map(|&seed| {
            let (g, plant) = planted_instance(n, p, k_hc, seed)?;
            Ok((g, plant.ok_or_else(|| Error::invalid("alpha plants no clique"))?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut runs = instances
        .iter()
        .zip(seeds)
        .map(|((g, _), &seed)| {
            let rng = SeededRng::new(seed).child(hash_str(&method.to_string()));
            EarlyStopRun::new(g, level, k_stop, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut recs: Vec<ExperimentRecord> = seeds
        .iter()
        .map(|&seed| {
            let mut r = ExperimentRecord::new("recovery", n, p, &method.to_string(), seed);
            r.alpha = Some(alpha);
            r
        })
        .collect();
    let mut done = vec![false; seeds.len()];
    while done.iter().any(|d| !d) {
        for j in 0..runs.len() {
            if done[j] {
                continue;
            }
            let t = Instant::now();
            let step = slice.min(cap - runs[j].starts_used());
            let finished = runs[j].advance(step);
            if let Some(out) = &finished {
                if out.stopped_early && out.clique.size() >= 2 {
                    let c = cleanup(&instances[j].0, &out.clique, k_hc)?;
                    let ok = contains_plant(&c, &instances[j].1);
                    recs[j].k_found = Some(c.size());
                    recs[j].success = Some(ok);
                    recs[j].failure = (!ok).then(|| "wrong-set".to_string());
                } else {
                    recs[j].success = Some(false);
                    recs[j].failure = Some("no-stop".to_string());
                }
            }
            recs[j].seconds += t.elapsed().as_secs_f64();
            let out = runs[j].outcome();
            recs[j].delta = Some(out.delta);
            recs[j].iterations = Some(out.starts_used as usize);
            if finished.is_none() && runs[j].starts_used() >= cap {
                recs[j].success = Some(false);
                recs[j].failure = Some("budget".to_string());
            }
            done[j] = recs[j].success.is_some();
            if recs[j].success == Some(true) {
                for (r, d) in recs.iter_mut().zip(&done) {
                    if !d {
                        r.success = Some(false);
                        r.failure = Some("budget".to_string());
                    }
                }
                return Ok(recs);
            }
        }
    }
    Ok(recs)
}

/// Success rate, search fraction and time of one method at one `α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryRow {
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub method: String,
    pub samples: usize,
    pub success_frac: f64,
    pub mean_delta: Option<f64>,
    pub mean_seconds: f64,
    /// Mean time over successful runs only.
    pub mean_seconds_success: Option<f64>,
    pub mean_iterations: f64,
}

pub fn summarize_recovery(records: &[ExperimentRecord]) -> Vec<RecoveryRow> {
    let mut keys: Vec<(usize, u64, String)> = Vec::new();
    for r in records {
        let key = (r.n, r.alpha.unwrap_or(0.0).to_bits(), r.algorithm.clone());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(n, a_bits, method)| {
            let rs: Vec<&ExperimentRecord> = records
                .iter()
                .filter(|r| r.n == n && r.alpha.unwrap_or(0.0).to_bits() == a_bits && r.algorithm == method)
                .collect();
            let m = rs.len() as f64;
            let deltas: Vec<f64> = rs.iter().filter_map(|r| r.delta).collect();
            let ok: Vec<f64> = rs.iter().filter(|r| r.success == Some(true)).map(|r| r.seconds).collect();
            RecoveryRow {
                n,
                p: rs[0].p,
                alpha: f64::from_bits(a_bits),
                method,
                samples: rs.len(),
                success_frac: ok.len() as f64 / m,
                mean_delta: (!deltas.is_empty()).then(|| deltas.iter().sum::<f64>() / deltas.len() as f64),
                mean_seconds: rs.iter().map(|r| r.seconds).sum::<f64>() / m,
                mean_seconds_success: (!ok.is_empty()).then(|| ok.iter().sum::<f64>() / ok.len() as f64),
                mean_iterations: rs.iter().map(|r| r.iterations.unwrap_or(0) as f64).sum::<f64>() / m,
            }
        })
        .collect()
}

/// Every method at every `α` on `samples` planted graphs. All methods see
/// the same graphs at a given `(α, replicate)`.
pub fn exp_recovery_sweep(
    n: usize,
    p: f64,
    alpha_grid: &[f64],
    methods: &[RecoveryMethod],
    samples: usize,
    base_seed: u64,
    opts: &RecoveryOptions,
) -> Result<(Vec<ExperimentRecord>, Vec<RecoveryRow>)> {
    let jobs: Vec<(f64, RecoveryMethod, u64)> = alpha_grid
        .iter()
        .flat_map(|&a| methods.iter().flat_map(move |&m| (0..samples as u64).map(move |rep| (a, m, rep))))
        .collect();
    let records = jobs
        .into_par_iter()
        .map(|(alpha, method, rep)| {
            let seed = instance_seed(base_seed, "recovery", n, p, alpha, rep);
            run_recovery(method, n, p, alpha, seed, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = summarize_recovery(&records);
    Ok((records, rows))
}

/// One spectral measurement: both eigenvalues and the rank plateau.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRankRow {
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub e0: f64,
    pub seed: u64,
    pub k_hc: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
    /// Fraction of the planted clique among the `k_hc` leading components.
    pub plateau: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub seconds: f64,
}

fn keep_last(r: Result<EigenPair>, converged: &mut bool) -> Result<EigenPair> {
    match r {
        Ok(e) => Ok(e),
        Err(Error::NonConverged(e)) => {
            *converged = false;
            Ok(*e)
        }
        Err(e) => Err(e),
    }
}

/// One `(α, E₀, replicate)` spectral measurement. `with_second` also
/// computes `λ₂`; otherwise `lambda2` and `gap` are NaN.
pub fn gap_rank_sample(
    n: usize,
    p: f64,
    alpha: f64,
    e0: f64,
    seed: u64,
    cfg: &SpectralConfig,
    with_second: bool,
) -> Result<GapRankRow> {
    let k_hc = k_for_alpha(n, alpha);
    let (g, plant) = planted_instance(n, p, k_hc, seed)?;
    let mut cfg = cfg.clone();
    if e0 > 0.0 {
        let site = plant.as_ref().map_or(0, |pl| pl.vertices[0]);
        cfg = cfg.with_hint(site, e0, n);
    }
    let mut rng = SeededRng::new(seed).child(hash_str("spectral"));
    let start = Instant::now();
    let mut converged = true;
    let top = keep_last(power_top(&g, &cfg, &mut rng), &mut converged)?;
    let (lambda2, iters2) = if with_second {
        let s = keep_last(second_eigen(&g, &cfg, &top, &mut rng), &mut converged)?;
        (s.value, s.iterations)
    } else {
        (f64::NAN, 0)
    };
    let plateau = plant.as_ref().map(|pl| rank_plateau(&rank_components(&top, pl), k_hc));
    Ok(GapRankRow {
        n,
        p,
        alpha,
        e0,
        seed,
        k_hc: if plant.is_some() { k_hc } else { 0 },
        lambda1: top.value,
        lambda2,
        gap: top.value - lambda2,
        plateau,
        iterations: top.iterations + iters2,
        converged,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Gap and rank plateau over an `(α, E₀)` grid; `α = 0` rows are the
/// unplanted control. Graphs depend on `(α, replicate)` only, so every
/// `E₀` sees the same graphs.
#[allow(clippy::too_many_arguments)]
pub fn exp_gap_and_rank(
    n: usize,
    p: f64,
    alphas: &[f64],
    e0s: &[f64],
    samples: usize,
    base_seed: u64,
    cfg: &SpectralConfig,
    with_second: bool,
) -> Result<Vec<GapRankRow>> {
    let jobs: Vec<(f64, f64, u64)> = alphas
        .iter()
        .flat_map(|&a| e0s.iter().flat_map(move |&e| (0..samples as u64).map(move |rep| (a, e, rep))))
        .collect();
    jobs.into_par_iter()
        .map(|(alpha, e0, rep)| {
            let seed = instance_seed(base_seed, "gap-rank", n, p, alpha, rep);
            gap_rank_sample(n, p, alpha, e0, seed, cfg, with_second)
        })
        .collect()
}

/// Probability that a `K`-clique cannot be extended, at `K = log2 N + shift`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopRow {
    pub n: f64,
    pub shift: f64,
    pub k: f64,
    pub probability: f64,
}

/// Extendability curves for `N = 2^m`, `m ∈ log2_ns`, over the given
/// shifts of `K` around `log2 N`.
pub fn exp_stop_curves(log2_ns: &[u32], shifts: &[f64]) -> Vec<StopRow> {
    log2_ns
        .iter()
        .flat_map(|&m| {
            let n = (m as f64).exp2();
            shifts.iter().map(move |&s| {
                let k = m as f64 + s;
                StopRow { n, shift: s, k, probability: stop_probability_real(n, k) }
            })
        })
        .collect()
}

/// Mean wall time of one algorithm per `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostRow {
    pub n: usize,
    pub algorithm: String,
    pub samples: usize,
    pub mean_seconds: f64,
}

/// Time `algorithm` on `samples` graphs per `n`, one run at a time so the
/// timings are not disturbed by other work.
pub fn exp_cost(n_grid: &[usize], p: f64, algorithm: Algorithm, samples: usize, base_seed: u64) -> Result<Vec<CostRow>> {
    let name = algorithm.to_string();
    n_grid
        .iter()
        .map(|&n| {
            let mut total = 0.0;
            for rep in 0..samples as u64 {
                let seed = instance_seed(base_seed, "cost", n, p, 0.0, rep);
                let g = gen_gnp(n, p, seed)?;
                let mut rng = SeededRng::new(seed).child(hash_str(&name));
                let start = Instant::now();
                algorithm.run(&g, &mut rng)?;
                total += start.elapsed().as_secs_f64();
            }
            Ok(CostRow { n, algorithm: name.clone(), samples, mean_seconds: total / samples.max(1) as f64 })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("a slope needs at least two points"));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / m;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::SingularFit("all points share one abscissa".into()));
    }
    Ok(xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_robin_agrees_with_single_runs() {
        let seeds = [3u64, 4, 5];
        let opts = RecoveryOptions::default();
        let rr = run_es_round_robin(RecoveryMethod::Sm1Es, 600, 0.5, 1.0, &seeds, &opts, 5).unwrap();
        let first = rr.iter().position(|r| r.success == Some(true)).unwrap();
        let single = run_recovery(RecoveryMethod::Sm1Es, 600, 0.5, 1.0, seeds[first], &opts).unwrap();
        assert_eq!(single.success, Some(true));
        assert_eq!(rr[first].iterations, single.iterations);
        assert_eq!(rr[first].k_found, single.k_found);
        assert!(rr[first + 1..].iter().all(|r| r.failure.as_deref() == Some("budget")));
    }

    #[test]
    fn extrapolation_recovers_exact_line() {
        let (a, b) = (-0.005, 0.668);
        let pts: Vec<(f64, f64)> = (7..15)
            .map(|m| {
                let x = m as f64;
                ((x).exp2(), (a * x + b) * 2.0 * x)
            })
            .collect();
        let fit = exp_extrapolate(&pts).unwrap();
        assert!((fit.a - a).abs() < 1e-12 && (fit.b - b).abs() < 1e-12);
        assert!((fit.crossing_n.log2() - 33.6).abs() < 1e-9);
    }

    #[test]
    fn extrapolation_rejects_flat_and_short_input() {
        let flat: Vec<(f64, f64)> = (7..13).map(|m| ((m as f64).exp2(), 1.2 * m as f64)).collect();
        assert!(matches!(exp_extrapolate(&flat), Err(Error::SingularFit(_))));
        assert!(exp_extrapolate(&flat[..4]).is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [100.0, 200.0, 400.0, 800.0].iter().map(|&x: &f64| (x, 3.0 * x.powi(3))).collect();
        assert!((loglog_slope(&pts).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn staircase_single_sample_has_zero_std() {
        let out = exp_staircase(&[64], 0.5, &[Algorithm::Sm0], 1, 1).unwrap();
        assert_eq!(out.summary[0].std, 0.0);
        assert_eq!(out.records.len(), 1);
    }

    #[test]
    fn staircase_rows_are_reproducible() {
        let a = exp_staircase(&[50, 80], 0.5, &[Algorithm::Sm0, Algorithm::Smi(1)], 3, 9).unwrap();
        let b = exp_staircase(&[80], 0.5, &[Algorithm::Smi(1)], 3, 9).unwrap();
        let strip = |r: &ExperimentRecord| (r.seed, r.k_found, r.algorithm.clone());
        let tail: Vec<_> = a.records.iter().filter(|r| r.n == 80 && r.algorithm == "sm1").map(strip).collect();
        assert_eq!(tail, b.records.iter().map(strip).collect::<Vec<_>>());
    }

    #[test]
    fn step_fractions_sum_to_at_most_one() {
        let (_, rows) = exp_step_fractions(&[60], 0.5, &[Algorithm::Sm0], 20, 3).unwrap();
        let r = &rows[0];
        assert!(r.frac_below + r.frac_at + r.frac_above <= 1.0 + 1e-12);
    }

    #[test]
    fn recovery_on_easy_instance() {
        let opts = RecoveryOptions::default();
        for m in [RecoveryMethod::Amp, RecoveryMethod::Sm1Es, RecoveryMethod::Spectral] {
            let rec = run_recovery(m, 400, 0.5, 3.0, 5, &opts).unwrap();
            assert_eq!(rec.success, Some(true), "{m}");
            assert!(rec.failure.is_none());
        }
    }

    #[test]
    fn stop_curves_collapse() {
        let rows = exp_stop_curves(&[16, 20], &[0.0]);
        assert!((rows[0].probability - rows[1].probability).abs() < 1e-4);
    }

    #[test]
    fn gap_rank_rows_have_controls() {
        let rows = exp_gap_and_rank(200, 0.5, &[0.0, 2.0], &[0.0], 2, 1, &SpectralConfig::plus_minus(true), true).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].plateau.is_none() && rows[0].k_hc == 0);
        assert!(rows[2].plateau.unwrap() > 0.5);
        assert!(rows.iter().all(|r| r.gap >= 0.0));
    }
}
