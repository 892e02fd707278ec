//! Spectral detection of planted cliques.
//!
//! The graph is read as a tight-binding Hamiltonian: either the 0/1
//! adjacency matrix scaled by `1/sqrt(N)`, or the ±1 matrix (`+1` for an
//! edge, `-1` for a non-edge, 0 on the diagonal), optionally scaled the same
//! way. A planted clique of size `α sqrt(N)` produces an isolated top
//! eigenvalue once `α` is large enough, and the eigenvector then
//! concentrates on the clique. A diagonal boost `E₀` on one known clique
//! site (the hint) pulls the isolated state out at smaller `α`.
//!
//! All products are matrix-free over the bit rows of the graph.

mod eigen;
mod matvec;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

pub use matvec::{matvec, Operator};

use crate::error::{Error, Result};
use crate::graph::{and_count, gen_gnp, plant_naive_with, Clique, Graph, PlantSpec, Placement, VertexSet};
use crate::greedy::{cleanup, peel_to_clique};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MatrixKind {
    /// `a_ij / sqrt(N)`.
    ZeroOneScaled,
    /// `±1` off the diagonal, divided by `sqrt(N)` when `scaled`.
    PlusMinus { scaled: bool },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum EigenMethod {
    /// Restarted Lanczos with full reorthogonalisation.
    #[default]
    Lanczos,
    /// Shifted power iteration.
    Power,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralConfig {
    pub matrix_kind: MatrixKind,
    pub hint_site: Option<usize>,
    /// Diagonal boost on the hint site, in the units of `matrix_kind`.
    pub e0: f64,
    /// Residual tolerance `‖M v − λ v‖₂`.
    pub tol: f64,
    /// Matrix-vector products allowed per eigenpair; `None` picks
    /// `1000 · ⌈ln N⌉`.
    pub max_iter: Option<usize>,
    pub method: EigenMethod,
    /// Basis size between Lanczos restarts.
    pub krylov_dim: usize,
}

impl SpectralConfig {
    fn with_kind(matrix_kind: MatrixKind) -> Self {
        Self {
            matrix_kind,
            hint_site: None,
            e0: 0.0,
            tol: 1e-8,
            max_iter: None,
            method: EigenMethod::default(),
            krylov_dim: 300,
        }
    }

    pub fn zero_one() -> Self {
        Self::with_kind(MatrixKind::ZeroOneScaled)
    }

    pub fn plus_minus(scaled: bool) -> Self {
        Self::with_kind(MatrixKind::PlusMinus { scaled })
    }

    /// Boost site `site` by `e0_zero_one`, given on the 0/1-scaled scale and
    /// converted to the units of this configuration's matrix for a graph of
    /// order `n`.
    pub fn with_hint(mut self, site: usize, e0_zero_one: f64, n: usize) -> Self {
        self.hint_site = Some(site);
        self.e0 = match self.matrix_kind {
            MatrixKind::ZeroOneScaled => e0_zero_one,
            MatrixKind::PlusMinus { scaled: true } => e0_to_plus_minus(e0_zero_one),
            MatrixKind::PlusMinus { scaled: false } => e0_to_plus_minus(e0_zero_one) * (n as f64).sqrt(),
        };
        self
    }

    pub fn max_iter_for(&self, n: usize) -> usize {
        self.max_iter
            .unwrap_or_else(|| 1000 * (n.max(2) as f64).ln().ceil() as usize)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if self.max_iter == Some(0) {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        if self.krylov_dim == 0 {
            return Err(Error::invalid("krylov_dim must be at least 1"));
        }
        if !self.e0.is_finite() {
            return Err(Error::invalid("e0 must be finite"));
        }
        if let Some(h) = self.hint_site {
            if h >= n {
                return Err(Error::VertexOutOfRange { vertex: h, n });
            }
        }
        Ok(())
    }
}

/// Diagonal boost on the 0/1-scaled matrix expressed on the scaled ±1
/// matrix. Off the uniform direction `ã = 2a − 1`, so the spectra differ by
/// a factor of two.
pub fn e0_to_plus_minus(e0_zero_one: f64) -> f64 {
    2.0 * e0_zero_one
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    /// Matrix-vector products spent.
    pub iterations: usize,
}

fn gaussian_start<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn solve(g: &Graph, cfg: &SpectralConfig, start: Vec<f64>, deflate: Option<&[f64]>) -> Result<EigenPair> {
    let mut op = Operator::new(g, cfg)?;
    let max_iter = cfg.max_iter_for(g.n());
    match cfg.method {
        EigenMethod::Lanczos => eigen::lanczos(&mut op, start, deflate, cfg.tol, max_iter, cfg.krylov_dim),
        EigenMethod::Power => eigen::power(&mut op, start, deflate, cfg.tol, max_iter),
    }
}

/// Top eigenpair from a Gaussian start vector; the value is the Rayleigh
/// quotient of the returned unit vector.
pub fn power_top<R: Rng + ?Sized>(g: &Graph, cfg: &SpectralConfig, rng: &mut R) -> Result<EigenPair> {
    if g.n() == 0 {
        return Err(Error::invalid("graph has no vertices"));
    }
    solve(g, cfg, gaussian_start(g.n(), rng), None)
}

/// Second eigenpair: the same iteration kept orthogonal to `top.vector`.
pub fn second_eigen<R: Rng + ?Sized>(
    g: &Graph,
    cfg: &SpectralConfig,
    top: &EigenPair,
    rng: &mut R,
) -> Result<EigenPair> {
    if g.n() < 2 {
        return Err(Error::invalid("a second eigenpair needs at least two vertices"));
    }
    if top.vector.len() != g.n() {
        return Err(Error::invalid("top eigenvector does not match the graph"));
    }
    solve(g, cfg, gaussian_start(g.n(), rng), Some(&top.vector))
}

/// Flip `v` so that its largest-magnitude component is positive.
pub fn orient(v: &mut [f64]) {
    let big = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if big < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Vertices sorted by descending eigenvector component after orientation
/// (ties by id).
pub fn ranked_sites(top: &EigenPair) -> Vec<usize> {
    let mut v = top.vector.clone();
    orient(&mut v);
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
    order
}

/// For each rank `r` (1-based, entry `r − 1`), the fraction of the top `r`
/// components that sit on planted vertices.
pub fn rank_components(top: &EigenPair, plant: &PlantSpec) -> Vec<f64> {
    let mut hits = 0usize;
    ranked_sites(top)
        .into_iter()
        .enumerate()
        .map(|(r, v)| {
            hits += usize::from(plant.contains(v));
            hits as f64 / (r + 1) as f64
        })
        .collect()
}

/// Fraction of the planted clique found among the `k_hc` leading components.
pub fn rank_plateau(curve: &[f64], k_hc: usize) -> f64 {
    if k_hc == 0 || curve.is_empty() {
        return 0.0;
    }
    curve[k_hc.min(curve.len()) - 1]
}

/// One planted instance of a gap measurement.
#[derive(Clone, Debug, Serialize)]
pub struct GapSample {
    pub alpha: f64,
    pub seed: u64,
    pub k_hc: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub alpha: f64,
    pub gap_mean: f64,
    pub gap_std: f64,
    pub samples: usize,
    /// Samples where an eigenpair did not reach the residual tolerance.
    pub flagged: usize,
}

/// `round(α sqrt(N))`.
pub fn k_for_alpha(n: usize, alpha: f64) -> usize {
    ((alpha * (n as f64).sqrt()).round() as usize).min(n)
}

/// G(n, p) from `seed` with a clique restored on `k_hc` random vertices
/// (none when `k_hc < 2`).
pub fn planted_instance(n: usize, p: f64, k_hc: usize, seed: u64) -> Result<(Graph, Option<PlantSpec>)> {
    let g = gen_gnp(n, p, seed)?;
    if k_hc < 2 {
        return Ok((g, None));
    }
    let (h, spec) = plant_naive_with(&g, k_hc, seed, Placement::Random)?;
    Ok((h, Some(spec)))
}

/// Top two eigenvalues of one instance. An eigenpair that misses the
/// tolerance is kept, flagged as not converged.
pub fn gap_sample(n: usize, p: f64, alpha: f64, seed: u64, cfg: &SpectralConfig) -> Result<GapSample> {
    let k_hc = k_for_alpha(n, alpha);
    let (g, _) = planted_instance(n, p, k_hc, seed)?;
    let mut rng = crate::rng::SeededRng::new(seed).child(1);
    let mut converged = true;
    let mut accept = |r: Result<EigenPair>| match r {
        Ok(e) => Ok(e),
        Err(Error::NonConverged(e)) => {
            converged = false;
            Ok(*e)
        }
        Err(e) => Err(e),
    };
    let top = accept(power_top(&g, cfg, &mut rng))?;
    let second = accept(second_eigen(&g, cfg, &top, &mut rng))?;
    Ok(GapSample {
        alpha,
        seed,
        k_hc,
        lambda1: top.value,
        lambda2: second.value,
        gap: top.value - second.value,
        iterations: top.iterations + second.iterations,
        converged,
    })
}

/// Mean and sample standard deviation.
pub(crate) fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, var.sqrt())
}

/// `λ₁ − λ₂` against `α` (α = 0 is the unplanted control), one row per `α`.
/// The same base graph is used for every `α` at a given seed.
pub fn spectral_gap_scan(
    n: usize,
    p: f64,
    alphas: &[f64],
    seeds: &[u64],
    cfg: &SpectralConfig,
) -> Result<Vec<GapRow>> {
    alphas
        .iter()
        .map(|&alpha| {
            let samples = seeds
                .iter()
                .map(|&s| gap_sample(n, p, alpha, s, cfg))
                .collect::<Result<Vec<_>>>()?;
            let gaps: Vec<f64> = samples.iter().map(|s| s.gap).collect();
            let (gap_mean, gap_std) = mean_std(&gaps);
            Ok(GapRow {
                alpha,
                gap_mean,
                gap_std,
                samples: samples.len(),
                flagged: samples.iter().filter(|s| !s.converged).count(),
            })
        })
        .collect()
}

/// Outcome of [`spectral_recover`].
#[derive(Clone, Debug)]
pub struct SpectralRecovery {
    pub top: EigenPair,
    /// The `2 k_hc` leading sites before filtering.
    pub candidates: Vec<usize>,
    /// Clique handed to cleanup.
    pub core: Vec<usize>,
    pub clique: Option<Clique>,
    pub success: bool,
}

/// Recover a planted clique of size `k_hc` from the top eigenvector.
///
/// The `2 k_hc` leading sites are filtered to those adjacent to at least
/// half of them, the survivors are peeled to a clique, and cleanup grows
/// that clique toward `k_hc`. Success means a clique of at least `k_hc`
/// vertices that contains the hint site, if one is configured.
pub fn spectral_recover<R: Rng + ?Sized>(
    g: &Graph,
    k_hc: usize,
    cfg: &SpectralConfig,
    rng: &mut R,
) -> Result<SpectralRecovery> {
    if k_hc == 0 || k_hc > g.n() {
        return Err(Error::invalid(format!("k_hc = {k_hc} outside 1..={}", g.n())));
    }
    let top = power_top(g, cfg, rng)?;
    let candidates: Vec<usize> = ranked_sites(&top).into_iter().take((2 * k_hc).min(g.n())).collect();
    let set = VertexSet::from_vertices(g.n(), candidates.iter().copied());
    let need = candidates.len().saturating_sub(1).div_ceil(2);
    let filtered: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&v| and_count(g.row(v), set.words()) >= need)
        .collect();
    let core = peel_to_clique(g, &filtered);
    let clique = if core.len() >= k_hc {
        Some(Clique::from_unchecked(core.clone()))
    } else if core.len() >= 2 {
        Some(cleanup(g, &Clique::from_unchecked(core.clone()), k_hc)?)
    } else {
        None
    };
    let success = clique
        .as_ref()
        .is_some_and(|c| c.size() >= k_hc && cfg.hint_site.is_none_or(|h| c.contains(h)));
    Ok(SpectralRecovery { top, candidates, core, clique, success })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    #[test]
    fn config_validation() {
        assert!(SpectralConfig::zero_one().validate(10).is_ok());
        let mut c = SpectralConfig::zero_one();
        c.tol = 0.0;
        assert!(c.validate(10).is_err());
        assert!(SpectralConfig::zero_one().with_hint(10, 0.5, 10).validate(10).is_err());
        assert_eq!(SpectralConfig::plus_minus(true).with_hint(0, 0.53, 100).e0, 1.06);
        assert_eq!(SpectralConfig::plus_minus(false).with_hint(0, 0.5, 100).e0, 10.0);
    }

    #[test]
    fn complete_graph_plus_minus_eigenpairs() {
        let g = Graph::complete(40);
        let cfg = SpectralConfig::plus_minus(false);
        let mut rng = SeededRng::new(1);
        let top = power_top(&g, &cfg, &mut rng).unwrap();
        assert!((top.value - 39.0).abs() < 1e-8);
        assert!(top.vector.iter().all(|x| (x.abs() - 40f64.sqrt().recip()).abs() < 1e-8));
        let second = second_eigen(&g, &cfg, &top, &mut rng).unwrap();
        assert!((second.value + 1.0).abs() < 1e-8);
        assert!(eigen::dot(&top.vector, &second.vector).abs() < 1e-8);
    }

    #[test]
    fn power_method_agrees_with_lanczos() {
        let g = crate::graph::gen_gnp(120, 0.5, 3).unwrap();
        let (h, _) = crate::graph::plant_naive(&g, 40, 0).unwrap();
        let mut cfg = SpectralConfig::plus_minus(true);
        let a = power_top(&h, &cfg, &mut SeededRng::new(1)).unwrap();
        cfg.method = EigenMethod::Power;
        let b = power_top(&h, &cfg, &mut SeededRng::new(1)).unwrap();
        assert!((a.value - b.value).abs() < 1e-7);
    }

    #[test]
    fn orientation_and_ranking() {
        let mut v = vec![0.1, -0.9, 0.2];
        orient(&mut v);
        assert_eq!(v, vec![-0.1, 0.9, -0.2]);
        let pair = EigenPair { value: 1.0, vector: vec![0.1, -0.9, 0.2, -0.3], residual: 0.0, iterations: 1 };
        assert_eq!(ranked_sites(&pair), vec![1, 3, 0, 2]);
    }

    #[test]
    fn complete_graph_recovers_trivially() {
        let g = Graph::complete(30);
        let out = spectral_recover(&g, 30, &SpectralConfig::plus_minus(true), &mut SeededRng::new(0)).unwrap();
        assert!(out.success);
    }

    #[test]
    fn mean_std_degenerate() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        assert!(mean_std(&[]).0.is_nan());
    }
}
