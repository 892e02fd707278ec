use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cliquelab::bounds::{k_max, log_expected_cliques, prob_kmax_bounds, r_continuous};
use cliquelab::graph::dimacs::{read_dimacs, write_dimacs};
use cliquelab::graph::gen_gnp;
use cliquelab::harness::{
    self, instance_seed, Algorithm, ExperimentRecord, PlotKind, RecoveryMethod, RecoveryOptions, StaircaseRow,
};
use cliquelab::rng::hash_str;
use cliquelab::spectral::{
    k_for_alpha, planted_instance, power_top, rank_components, spectral_gap_scan, SpectralConfig,
};
use cliquelab::SeededRng;

/// Maximum-clique heuristics and planted-clique recovery experiments.
///
/// Tables go to `--out` (or stdout). Set CLIQUELAB_THREADS to bound the
/// worker pool.
#[derive(Parser)]
#[command(name = "cliquelab", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// K_max, R and the first/second-moment bounds around K_max.
    Bounds {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Write a G(n, p) graph, optionally with a planted clique, as DIMACS.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Plant a clique of size alpha * sqrt(n).
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run heuristics on one graph and print the cliques found.
    Solve {
        /// DIMACS input; without it a G(n, p) graph is generated.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, value_delimiter = ',', default_value = "sm0")]
        algo: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// One record per run of each recovery method on planted instances.
    Recover {
        #[command(flatten)]
        planted: PlantedArgs,
        #[arg(long, value_delimiter = ',', default_value = "sm1-es")]
        algo: Vec<String>,
        #[arg(long)]
        max_starts: Option<u64>,
        #[arg(long)]
        k_stop: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Mean spectral gap per alpha; alpha = 0 is the unplanted control.
    GapScan {
        #[command(flatten)]
        planted: PlantedArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Fraction of planted sites among the top r eigenvector components, per r.
    RankCurve {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        e0: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Spectral ranking followed by cleanup, one record per run.
    SpectralRecover {
        #[command(flatten)]
        planted: PlantedArgs,
        #[arg(long, default_value_t = 0.0)]
        e0: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Message passing, one row per run.
    AmpRecover {
        #[command(flatten)]
        planted: PlantedArgs,
        #[arg(long, default_value_t = 100)]
        t_max: usize,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Mean clique size per N and algorithm.
    Staircase(GridArgs),
    /// Fractions of runs at K_max - 1, K_max and K_max + 1.
    StepFractions(GridArgs),
    /// Planted-clique recovery success, search fraction and time per alpha.
    RecoverySweep {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "amp,sm1-es")]
        algo: Vec<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Start budget for the early-stopped searches.
        #[arg(long)]
        max_starts: Option<u64>,
        /// Early-stop clique size; defaults to ceil(R) + 2.
        #[arg(long)]
        k_stop: Option<usize>,
        /// Spectral hint strength on the 0/1 scale.
        #[arg(long, default_value_t = 0.0)]
        e0: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Fit K/(2 log2 N) = A log2 N + B to a staircase table.
    Extrapolate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "sm0")]
        algo: String,
    },
    /// Spectral gap and rank plateau per (alpha, E0, seed).
    GapRank {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        e0: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Skip the second eigenvalue (rank curves only).
        #[arg(long)]
        no_gap: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Probability that a K-clique cannot be extended, around K = log2 N.
    StopCurves {
        #[arg(long, value_delimiter = ',', default_value = "10,12,14,16,18,20")]
        log2n: Vec<u32>,
        #[arg(long, default_value_t = -3.0)]
        from: f64,
        #[arg(long, default_value_t = 3.0)]
        to: f64,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Wall time of one algorithm per N, one run at a time.
    Cost {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value = "sm0")]
        algo: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, value_delimiter = ',', default_value = "sm0")]
    algo: Vec<String>,
    /// Defaults to 2000 for sm0, 500 for sm1 and 100 otherwise.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct PlantedArgs {
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl PlantedArgs {
    /// Every `(alpha, replicate)` with its instance seed.
    fn instances(&self, experiment: &str) -> Vec<(f64, u64)> {
        self.alpha
            .iter()
            .flat_map(|&a| (0..self.samples as u64).map(move |r| (a, r)))
            .map(|(a, r)| (a, instance_seed(self.seed, experiment, self.n, self.p, a, r)))
            .collect()
    }

    fn run(&self, method: RecoveryMethod, opts: &RecoveryOptions) -> Result<Vec<ExperimentRecord>> {
        use rayon::prelude::*;
        let jobs = self.instances("recovery");
        Ok(jobs
            .into_par_iter()
            .map(|(a, s)| harness::run_recovery(method, self.n, self.p, a, s, opts))
            .collect::<Result<Vec<_>, _>>()?)
    }
}

#[derive(Args)]
struct Output {
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long, requires = "out")]
    plot: bool,
}

impl Output {
    fn write<T: Serialize>(&self, rows: &[T], kind: Option<PlotKind>) -> Result<()> {
        match &self.out {
            Some(path) => {
                harness::write_csv(path, rows).with_context(|| format!("writing {}", path.display()))?;
                if let (true, Some(kind)) = (self.plot, kind) {
                    let script = harness::plot_script(kind, &path.to_string_lossy());
                    fs::write(path.with_extension("gp"), script)?;
                }
            }
            None => harness::write_csv_to(io::stdout().lock(), rows)?,
        }
        Ok(())
    }

    /// Raw per-run records beside the summary table, when writing to a file.
    fn write_records<T: Serialize>(&self, rows: &[T]) -> Result<()> {
        if let Some(path) = &self.out {
            harness::write_csv(sibling(path, "records"), rows)?;
        }
        Ok(())
    }
}

fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{tag}.csv"))
}

fn parse_algos(names: &[String]) -> Result<Vec<Algorithm>> {
    names.iter().map(|s| Ok(s.parse::<Algorithm>()?)).collect()
}

fn default_samples(algos: &[Algorithm]) -> usize {
    match algos.first() {
        Some(Algorithm::Sm0) => 2000,
        Some(Algorithm::Smi(1)) => 500,
        _ => 100,
    }
}

#[derive(Serialize)]
struct BoundRow {
    n: u64,
    p: f64,
    k: u64,
    log_e: f64,
    k_max: u64,
    r: f64,
    lower: f64,
    upper: f64,
}

#[derive(Serialize)]
struct AmpRow {
    seed: u64,
    converged: bool,
    iterations: Option<usize>,
    success: Option<bool>,
    failure_kind: Option<String>,
    seconds: f64,
}

#[derive(Serialize)]
struct RankRow {
    rank: usize,
    fraction: f64,
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("CLIQUELAB_THREADS") {
        let threads: usize = v.parse().with_context(|| format!("CLIQUELAB_THREADS={v:?} is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    init_threads()?;
    match cli.cmd {
        Cmd::Bounds { n, p, out } => {
            let mut rows = Vec::new();
            for n in n {
                let km = k_max(n, p)?;
                let r = r_continuous(n as f64, p).unwrap_or(f64::NAN);
                for k in km.saturating_sub(2)..=(km + 2).min(n) {
                    let b = prob_kmax_bounds(n, k, p)?;
                    let log_e = log_expected_cliques(n, k, p)?;
                    rows.push(BoundRow { n, p, k, log_e, k_max: km, r, lower: b.lower, upper: b.upper });
                }
            }
            out.write(&rows, None)?;
        }
        Cmd::Generate { n, p, alpha, seed, out } => match alpha {
            Some(a) => {
                let (g, plant) = planted_instance(n, p, k_for_alpha(n, a), seed)?;
                write_dimacs(&g, &out)?;
                if let Some(plant) = plant {
                    fs::write(out.with_extension("plant.json"), plant.to_json()?)?;
                }
            }
            None => write_dimacs(&gen_gnp(n, p, seed)?, &out)?,
        },
        Cmd::Solve { input, n, p, algo, seed, out } => {
            let (g, p) = match (input, n) {
                (Some(path), _) => {
                    let g = read_dimacs(&path)?;
                    let d = g.density();
                    (g, d)
                }
                (None, Some(n)) => (gen_gnp(n, p, seed)?, p),
                (None, None) => bail!("give --input or --n"),
            };
            let km = k_max(g.n() as u64, p.clamp(1e-9, 1.0 - 1e-9)).ok();
            let mut rows = Vec::new();
            for a in parse_algos(&algo)? {
                let name = a.to_string();
                let mut rng = SeededRng::new(seed).child(hash_str(&name));
                let start = Instant::now();
                let found = a.run(&g, &mut rng)?;
                let mut rec = ExperimentRecord::new("solve", g.n(), p, &name, seed);
                rec.seconds = start.elapsed().as_secs_f64();
                rec.i = a.i_for(g.n());
                rec.k_found = Some(found.clique.size());
                rec.k_max_pred = km;
                rec.delta = Some(found.delta);
                rec.iterations = Some(found.iterations_t);
                eprintln!("{name}: {:?}", found.clique.vertices());
                rows.push(rec);
            }
            out.write(&rows, None)?;
        }
        Cmd::Recover { planted, algo, max_starts, k_stop, out } => {
            let opts = RecoveryOptions { max_starts, k_stop, ..RecoveryOptions::default() };
            let mut rows = Vec::new();
            for m in &algo {
                rows.extend(planted.run(m.parse()?, &opts)?);
            }
            out.write(&rows, None)?;
        }
        Cmd::GapScan { planted, out } => {
            let seeds: Vec<u64> = (0..planted.samples as u64)
                .map(|r| instance_seed(planted.seed, "gap-scan", planted.n, planted.p, 0.0, r))
                .collect();
            let cfg = SpectralConfig::plus_minus(true);
            out.write(&spectral_gap_scan(planted.n, planted.p, &planted.alpha, &seeds, &cfg)?, None)?;
        }
        Cmd::RankCurve { n, p, alpha, e0, seed, out } => {
            let k = k_for_alpha(n, alpha);
            let (g, plant) = planted_instance(n, p, k, seed)?;
            let Some(plant) = plant else { bail!("alpha = {alpha} plants no clique at n = {n}") };
            let mut cfg = SpectralConfig::plus_minus(true);
            if e0 > 0.0 {
                cfg = cfg.with_hint(plant.vertices[0], e0, n);
            }
            let top = power_top(&g, &cfg, &mut SeededRng::new(seed).child(hash_str("spectral")))?;
            let rows: Vec<RankRow> = rank_components(&top, &plant)
                .into_iter()
                .enumerate()
                .map(|(r, fraction)| RankRow { rank: r + 1, fraction })
                .collect();
            out.write(&rows, None)?;
        }
        Cmd::SpectralRecover { planted, e0, out } => {
            let opts = RecoveryOptions { e0, ..RecoveryOptions::default() };
            out.write(&planted.run(RecoveryMethod::Spectral, &opts)?, None)?;
        }
        Cmd::AmpRecover { planted, t_max, eps, out } => {
            let opts = RecoveryOptions { t_max, eps, ..RecoveryOptions::default() };
            let rows: Vec<AmpRow> = planted
                .run(RecoveryMethod::Amp, &opts)?
                .into_iter()
                .map(|r| AmpRow {
                    seed: r.seed,
                    converged: r.failure.as_deref() != Some("non-convergence") && r.failure.as_deref() != Some("blowup"),
                    iterations: r.iterations,
                    success: r.success,
                    failure_kind: r.failure,
                    seconds: r.seconds,
                })
                .collect();
            out.write(&rows, None)?;
        }
        Cmd::Staircase(args) => {
            let algos = parse_algos(&args.algo)?;
            let samples = args.samples.unwrap_or_else(|| default_samples(&algos));
            let run = harness::exp_staircase(&args.n, args.p, &algos, samples, args.seed)?;
            args.out.write_records(&run.records)?;
            args.out.write(&run.summary, Some(PlotKind::Staircase))?;
        }
        Cmd::StepFractions(args) => {
            let algos = parse_algos(&args.algo)?;
            let samples = args.samples.unwrap_or_else(|| default_samples(&algos));
            let (records, rows) = harness::exp_step_fractions(&args.n, args.p, &algos, samples, args.seed)?;
            args.out.write_records(&records)?;
            args.out.write(&rows, Some(PlotKind::StepFractions))?;
        }
        Cmd::RecoverySweep { n, p, alpha, algo, samples, seed, max_starts, k_stop, e0, out } => {
            let methods = algo.iter().map(|s| s.parse::<RecoveryMethod>()).collect::<Result<Vec<_>, _>>()?;
            let samples = samples.unwrap_or(if methods.contains(&RecoveryMethod::Sm2Es) { 5 } else { 100 });
            let opts = RecoveryOptions { max_starts, k_stop, e0, ..RecoveryOptions::default() };
            let (records, rows) = harness::exp_recovery_sweep(n, p, &alpha, &methods, samples, seed, &opts)?;
            out.write_records(&records)?;
            out.write(&rows, Some(PlotKind::Recovery))?;
        }
        Cmd::Extrapolate { input, algo } => {
            let rows: Vec<StaircaseRow> = harness::read_csv(&input)?;
            let fit = harness::exp_extrapolate(&harness::staircase_points(&rows, &algo))?;
            println!("A = {:.6}", fit.a);
            println!("B = {:.6}", fit.b);
            println!("crossing N = {:.4e}", fit.crossing_n);
        }
        Cmd::GapRank { n, p, alpha, e0, samples, seed, no_gap, out } => {
            let cfg = SpectralConfig::plus_minus(true);
            let rows = harness::exp_gap_and_rank(n, p, &alpha, &e0, samples, seed, &cfg, !no_gap)?;
            out.write(&rows, Some(if no_gap { PlotKind::Rank } else { PlotKind::Gap }))?;
        }
        Cmd::StopCurves { log2n, from, to, step, out } => {
            if !(step > 0.0) || to < from {
                bail!("need --step > 0 and --to >= --from");
            }
            let count = ((to - from) / step).round() as usize;
            let shifts: Vec<f64> = (0..=count).map(|i| from + i as f64 * step).collect();
            out.write(&harness::exp_stop_curves(&log2n, &shifts), Some(PlotKind::StopCurves))?;
        }
        Cmd::Cost { n, p, algo, samples, seed, out } => {
            let rows = harness::exp_cost(&n, p, algo.parse()?, samples, seed)?;
            out.write(&rows, Some(PlotKind::Cost))?;
        }
    }
    Ok(())
}
