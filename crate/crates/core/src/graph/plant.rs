//! Planting a hidden clique into an existing graph.
//!
//! Two procedures are provided. [`plant_naive`] simply restores every missing
//! edge among the chosen vertices, which raises their degrees by roughly
//! `(1-p)(k-1)` and makes them detectable from degrees alone once `k` is of
//! order `sqrt(n ln n)`. [`plant_rewired`] pays for each restored edge
//! `(i, j)` by removing `(i, k)` and `(j, l)` and adding `(k, l)` for random
//! outside neighbours `k`, `l`, so every vertex keeps its degree.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{and_count, select, Graph, VertexSet};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Draw cap per restored edge for [`plant_rewired`].
pub const DEFAULT_RETRY_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlantMethod {
    Naive,
    DegreePreserving,
}

/// Where the hidden clique goes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Placement {
    /// Vertices `0..k_hc`.
    #[default]
    FirstIds,
    /// A uniformly random `k_hc`-subset drawn from the placement seed.
    Random,
}

/// Record of a planted clique.
#[derive(Clone, Debug, PartialEq)]
pub struct PlantSpec {
    pub vertices: Vec<usize>,
    pub method: PlantMethod,
    pub k_hc: usize,
    pub n: usize,
    /// `k_hc / sqrt(n)`.
    pub alpha: f64,
    pub base_seed: u64,
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    method: PlantMethod,
    k_hc: usize,
    vertices: Vec<usize>,
    seed: u64,
}

impl PlantSpec {
    fn new(vertices: Vec<usize>, method: PlantMethod, n: usize, base_seed: u64) -> Self {
        let k_hc = vertices.len();
        Self {
            vertices,
            method,
            k_hc,
            n,
            alpha: k_hc as f64 / (n as f64).sqrt(),
            base_seed,
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn to_set(&self) -> VertexSet {
        VertexSet::from_vertices(self.n, self.vertices.iter().copied())
    }

    /// Sidecar JSON document `{method, k_hc, vertices, seed}`.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&Sidecar {
            method: self.method,
            k_hc: self.k_hc,
            vertices: self.vertices.clone(),
            seed: self.base_seed,
        })?)
    }

    /// Parse a sidecar for a graph on `n` vertices.
    pub fn from_json(json: &str, n: usize) -> Result<Self> {
        let s: Sidecar = serde_json::from_str(json)?;
        let mut vertices = s.vertices;
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.len() != s.k_hc {
            return Err(Error::invalid("sidecar k_hc does not match its vertex list"));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        Ok(Self::new(vertices, s.method, n, s.seed))
    }
}

fn check_k(g: &Graph, k_hc: usize) -> Result<()> {
    if k_hc == 0 || k_hc > g.n() {
        return Err(Error::invalid(format!(
            "planted clique size {k_hc} must lie in 1..={}",
            g.n()
        )));
    }
    Ok(())
}

fn choose_vertices(n: usize, k_hc: usize, placement: Placement, rng: &mut SeededRng) -> Vec<usize> {
    match placement {
        Placement::FirstIds => (0..k_hc).collect(),
        Placement::Random => {
            let mut v = sample(rng, n, k_hc).into_vec();
            v.sort_unstable();
            v
        }
    }
}

/// Restore every missing edge among vertices `0..k_hc`.
pub fn plant_naive(g: &Graph, k_hc: usize, placement_seed: u64) -> Result<(Graph, PlantSpec)> {
    plant_naive_with(g, k_hc, placement_seed, Placement::FirstIds)
}

pub fn plant_naive_with(
    g: &Graph,
    k_hc: usize,
    placement_seed: u64,
    placement: Placement,
) -> Result<(Graph, PlantSpec)> {
    check_k(g, k_hc)?;
    let mut rng = SeededRng::new(placement_seed);
    let vs = choose_vertices(g.n(), k_hc, placement, &mut rng);
    let mut h = g.clone();
    for (a, &u) in vs.iter().enumerate() {
        for &v in &vs[a + 1..] {
            h.set_edge(u, v);
        }
    }
    Ok((h, PlantSpec::new(vs, PlantMethod::Naive, g.n(), placement_seed)))
}

/// Degree-preserving planting on vertices `0..k_hc`.
pub fn plant_rewired(g: &Graph, k_hc: usize, retry_cap: u64, seed: u64) -> Result<(Graph, PlantSpec)> {
    plant_rewired_with(g, k_hc, retry_cap, seed, Placement::FirstIds)
}

pub fn plant_rewired_with(
    g: &Graph,
    k_hc: usize,
    retry_cap: u64,
    seed: u64,
    placement: Placement,
) -> Result<(Graph, PlantSpec)> {
    check_k(g, k_hc)?;
    if retry_cap == 0 {
        return Err(Error::invalid("retry cap must be positive"));
    }
    let mut rng = SeededRng::new(seed);
    let vs = choose_vertices(g.n(), k_hc, placement, &mut rng);
    let clique = VertexSet::from_vertices(g.n(), vs.iter().copied());
    let outside: Vec<u64> = clique.words().iter().map(|w| !w).collect();
    let mut h = g.clone();

    for (a, &i) in vs.iter().enumerate() {
        for &j in &vs[a + 1..] {
            if h.has_edge(i, j) {
                continue;
            }
            let mut attempts = 0u64;
            loop {
                if attempts == retry_cap {
                    return Err(Error::RewireExhausted { u: i, v: j, attempts });
                }
                attempts += 1;
                let Some(k) = random_outside_neighbor(&h, i, &outside, &mut rng) else {
                    continue;
                };
                let Some(l) = random_outside_neighbor(&h, j, &outside, &mut rng) else {
                    continue;
                };
                if k == l || h.has_edge(k, l) {
                    continue;
                }
                h.clear_edge(i, k);
                h.clear_edge(j, l);
                h.set_edge(k, l);
                h.set_edge(i, j);
                break;
            }
        }
    }
    Ok((h, PlantSpec::new(vs, PlantMethod::DegreePreserving, g.n(), seed)))
}

fn random_outside_neighbor(g: &Graph, v: usize, outside: &[u64], rng: &mut SeededRng) -> Option<usize> {
    let row = g.row(v);
    let count = and_count(row, outside);
    if count == 0 {
        return None;
    }
    let rank = rng.random_range(0..count);
    let masked: Vec<u64> = row.iter().zip(outside).map(|(a, b)| a & b).collect();
    select(&masked, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_gnp, is_clique};

    #[test]
    fn naive_full_size_gives_complete_graph() {
        let g = gen_gnp(12, 0.5, 1).unwrap();
        let (h, spec) = plant_naive(&g, 12, 0).unwrap();
        assert_eq!(h.edge_count(), 66);
        assert_eq!(spec.vertices, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn size_one_changes_nothing() {
        let g = gen_gnp(40, 0.5, 2).unwrap();
        assert_eq!(plant_naive(&g, 1, 0).unwrap().0, g);
        assert_eq!(plant_rewired(&g, 1, 100, 0).unwrap().0, g);
    }

    #[test]
    fn naive_touches_only_clique_pairs() {
        let g = gen_gnp(60, 0.5, 3).unwrap();
        let (h, spec) = plant_naive(&g, 10, 0).unwrap();
        assert!(is_clique(&h, &spec.vertices).unwrap());
        for (u, v) in (0..60).flat_map(|u| (u + 1..60).map(move |v| (u, v))) {
            if !(spec.contains(u) && spec.contains(v)) {
                assert_eq!(g.has_edge(u, v), h.has_edge(u, v));
            }
        }
        assert!((spec.alpha - 10.0 / 60f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn random_placement_is_seeded() {
        let g = gen_gnp(100, 0.5, 4).unwrap();
        let (_, a) = plant_naive_with(&g, 10, 77, Placement::Random).unwrap();
        let (_, b) = plant_naive_with(&g, 10, 77, Placement::Random).unwrap();
        assert_eq!(a.vertices, b.vertices);
        assert_ne!(a.vertices, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn rewired_preserves_degree_sequence() {
        let g = gen_gnp(200, 0.5, 5).unwrap();
        let (h, spec) = plant_rewired(&g, 20, DEFAULT_RETRY_CAP, 9).unwrap();
        assert!(is_clique(&h, &spec.vertices).unwrap());
        assert_eq!(g.degrees(), h.degrees());
        assert_eq!(g.edge_count(), h.edge_count());
        assert_eq!(spec.method, PlantMethod::DegreePreserving);
    }

    #[test]
    fn rewire_exhaustion_is_reported() {
        // A star has no outside pair that can be linked.
        let g = Graph::from_edges(6, [(0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let err = plant_rewired(&g, 2, 50, 1).unwrap_err();
        assert!(matches!(err, Error::RewireExhausted { attempts: 50, .. }));
    }

    #[test]
    fn oversized_plant_is_rejected() {
        let g = gen_gnp(5, 0.5, 1).unwrap();
        assert!(plant_naive(&g, 6, 0).is_err());
        assert!(plant_naive(&g, 0, 0).is_err());
    }

    #[test]
    fn sidecar_round_trip() {
        let g = gen_gnp(50, 0.5, 1).unwrap();
        let (_, spec) = plant_rewired(&g, 7, 1000, 42).unwrap();
        let json = spec.to_json().unwrap();
        assert!(json.contains("\"degree-preserving\""));
        let back = PlantSpec::from_json(&json, 50).unwrap();
        assert_eq!(back, spec);
        assert!(PlantSpec::from_json(&json, 5).is_err());
    }
}
