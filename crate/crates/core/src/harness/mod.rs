//! Seeded experiment runners producing CSV tables: clique-size staircases,
//! step fractions, recovery sweeps, spectral gaps and timing grids.
//!
//! Every instance draws its graph and algorithm streams from
//! [`instance_seed`], a hash of the experiment name and the configuration
//! columns, so any row can be rerun on its own and grids can be extended
//! without disturbing existing rows. Instances run on the rayon pool and
//! are reassembled in configuration order.

mod experiments;
mod plot;

use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use experiments::*;
pub use plot::{plot_script, PlotKind};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::greedy::{choose_i, sm0, sm0_iter_smi, sm0_then_smi, smi, SearchOutcome};
use crate::rng::{hash_str, mix_seed};

/// Seed of one instance of an experiment grid.
pub fn instance_seed(base: u64, experiment: &str, n: usize, p: f64, alpha: f64, replicate: u64) -> u64 {
    mix_seed(base, &[hash_str(experiment), n as u64, p.to_bits(), alpha.to_bits(), replicate])
}

/// One run of one algorithm on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub n: usize,
    pub p: f64,
    pub alpha: Option<f64>,
    pub algorithm: String,
    pub i: Option<usize>,
    pub e0: Option<f64>,
    pub seed: u64,
    pub k_found: Option<usize>,
    pub k_max_pred: Option<u64>,
    pub success: Option<bool>,
    pub delta: Option<f64>,
    pub iterations: Option<usize>,
    pub seconds: f64,
    /// Failure category for recovery runs (empty on success).
    pub failure: Option<String>,
}

impl ExperimentRecord {
    pub fn new(experiment: &str, n: usize, p: f64, algorithm: &str, seed: u64) -> Self {
        Self {
            experiment: experiment.to_string(),
            n,
            p,
            alpha: None,
            algorithm: algorithm.to_string(),
            i: None,
            e0: None,
            seed,
            k_found: None,
            k_max_pred: None,
            success: None,
            delta: None,
            iterations: None,
            seconds: 0.0,
            failure: None,
        }
    }
}

/// Maximum-clique heuristics runnable by the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// One greedy construction from the empty clique.
    Sm0,
    /// SM⁰ from every complete `i`-subgraph.
    Smi(usize),
    /// SM⁰, then regrowth from every `i`-subset of its result.
    Sm0ThenSmi(usize),
    /// Repeated subset regrowth; `None` takes `i` from [`choose_i`].
    Sm0IterSmi(Option<usize>),
}

impl Algorithm {
    /// Seed size actually used on a graph of order `n`.
    pub fn i_for(&self, n: usize) -> Option<usize> {
        match *self {
            Algorithm::Sm0 => None,
            Algorithm::Smi(i) | Algorithm::Sm0ThenSmi(i) => Some(i),
            Algorithm::Sm0IterSmi(i) => Some(i.unwrap_or_else(|| choose_i(n))),
        }
    }

    pub fn run<R: Rng + ?Sized>(&self, g: &Graph, rng: &mut R) -> Result<SearchOutcome> {
        match *self {
            Algorithm::Sm0 => Ok(SearchOutcome::new(sm0(g, rng, None)?, 1, 1, false)),
            Algorithm::Smi(i) => smi(g, i, rng),
            Algorithm::Sm0ThenSmi(i) => sm0_then_smi(g, i, rng),
            Algorithm::Sm0IterSmi(i) => sm0_iter_smi(g, i.unwrap_or_else(|| choose_i(g.n())), rng),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Sm0 => write!(f, "sm0"),
            Algorithm::Smi(i) => write!(f, "sm{i}"),
            Algorithm::Sm0ThenSmi(i) => write!(f, "sm0-sm{i}"),
            Algorithm::Sm0IterSmi(Some(i)) => write!(f, "sm0-iter-sm{i}"),
            Algorithm::Sm0IterSmi(None) => write!(f, "sm0-iter"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    /// Accepts `sm0`, `smI`, `sm0-smI`, `sm0-iter-smI` and `sm0-iter`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("unknown algorithm {s:?}"));
        let level = |t: &str| -> Result<usize> {
            t.strip_prefix("sm").and_then(|d| d.parse().ok()).ok_or_else(bad)
        };
        let s_lower = s.to_ascii_lowercase();
        if s_lower == "sm0-iter" {
            return Ok(Algorithm::Sm0IterSmi(None));
        }
        if let Some(rest) = s_lower.strip_prefix("sm0-iter-") {
            return Ok(Algorithm::Sm0IterSmi(Some(level(rest)?)));
        }
        if let Some(rest) = s_lower.strip_prefix("sm0-") {
            return Ok(Algorithm::Sm0ThenSmi(level(rest)?));
        }
        match level(&s_lower)? {
            0 => Ok(Algorithm::Sm0),
            i => Ok(Algorithm::Smi(i)),
        }
    }
}

/// Planted-clique recovery methods.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecoveryMethod {
    Amp,
    Sm1Es,
    Sm2Es,
    Spectral,
}

impl std::fmt::Display for RecoveryMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RecoveryMethod::Amp => "amp",
            RecoveryMethod::Sm1Es => "sm1-es",
            RecoveryMethod::Sm2Es => "sm2-es",
            RecoveryMethod::Spectral => "spectral",
        })
    }
}

impl FromStr for RecoveryMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "amp" => Ok(RecoveryMethod::Amp),
            "sm1-es" | "sm1es" => Ok(RecoveryMethod::Sm1Es),
            "sm2-es" | "sm2es" => Ok(RecoveryMethod::Sm2Es),
            "spectral" => Ok(RecoveryMethod::Spectral),
            _ => Err(Error::invalid(format!("unknown recovery method {s:?}"))),
        }
    }
}

/// Serialize `rows` as CSV with a header line.
pub fn write_csv<T: Serialize>(path: impl AsRef<Path>, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// [`write_csv`] to any writer.
pub fn write_csv_to<T: Serialize, W: std::io::Write>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for name in ["sm0", "sm1", "sm2", "sm0-sm4", "sm0-iter-sm3", "sm0-iter"] {
            let a: Algorithm = name.parse().unwrap();
            assert_eq!(a.to_string(), name);
        }
        assert!("greedy".parse::<Algorithm>().is_err());
        assert!("sm0-smx".parse::<Algorithm>().is_err());
        assert_eq!("SM2".parse::<Algorithm>().unwrap(), Algorithm::Smi(2));
    }

    #[test]
    fn recovery_names_round_trip() {
        for m in [RecoveryMethod::Amp, RecoveryMethod::Sm1Es, RecoveryMethod::Sm2Es, RecoveryMethod::Spectral] {
            assert_eq!(m.to_string().parse::<RecoveryMethod>().unwrap(), m);
        }
    }

    #[test]
    fn instance_seeds_depend_on_every_column() {
        let s = instance_seed(1, "x", 100, 0.5, 1.0, 0);
        assert_ne!(s, instance_seed(2, "x", 100, 0.5, 1.0, 0));
        assert_ne!(s, instance_seed(1, "y", 100, 0.5, 1.0, 0));
        assert_ne!(s, instance_seed(1, "x", 101, 0.5, 1.0, 0));
        assert_ne!(s, instance_seed(1, "x", 100, 0.4, 1.0, 0));
        assert_ne!(s, instance_seed(1, "x", 100, 0.5, 1.1, 0));
        assert_ne!(s, instance_seed(1, "x", 100, 0.5, 1.0, 1));
    }

    #[test]
    fn records_round_trip_through_csv() {
        let mut r = ExperimentRecord::new("staircase", 64, 0.5, "sm0", 7);
        r.k_found = Some(9);
        r.alpha = Some(0.5);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_csv(&path, &[r.clone()]).unwrap();
        let back: Vec<ExperimentRecord> = read_csv(&path).unwrap();
        assert_eq!(back, vec![r]);
    }
}
