//! Dense simple undirected graphs with bit-packed adjacency.
//!
//! Both triangles of the adjacency matrix are stored, one packed row per
//! vertex, so a membership test is a single bit probe and the common
//! neighbourhood of a vertex set is a word-wise AND of rows.

mod bitset;
pub mod dimacs;
mod generate;
mod plant;

pub use bitset::{and_count, ones, select, words_for, Ones, VertexSet};
pub use generate::{complement, gen_gnp, gen_gnp_with_limit};
pub use plant::{
    plant_naive, plant_naive_with, plant_rewired, plant_rewired_with, PlantMethod, PlantSpec,
    Placement, DEFAULT_RETRY_CAP,
};

use crate::error::{Error, Result};

/// Largest order accepted without an explicit override (the matrix costs N²/8 bytes).
pub const DEFAULT_MAX_N: usize = 65_536;

/// Immutable simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Self {
            n,
            words,
            bits: vec![0; n * words],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        complement(&Self::empty(n))
    }

    /// Build from an undirected edge list. Self-loops and out-of-range ids are
    /// rejected; repeated edges are collapsed.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::invalid(format!("self-loop on vertex {u}")));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Number of `u64` words per adjacency row.
    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words
    }

    /// Fraction of the n(n-1)/2 vertex pairs that are edges.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.edge_count as f64 / (self.n as f64 * (self.n as f64 - 1.0) / 2.0)
    }

    /// Packed neighbourhood of `v`.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.bits[u * self.words + (v >> 6)] >> (v & 63)) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> Ones<'_> {
        ones(self.row(v))
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Subgraph induced by `vs` (relabelled `0..vs.len()` in the given order).
    pub fn induced(&self, vs: &[usize]) -> Self {
        let mut g = Self::empty(vs.len());
        for (a, &u) in vs.iter().enumerate() {
            for (b, &v) in vs.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(a, b);
                }
            }
        }
        g
    }

    /// Relabel vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::invalid("permutation length differs from graph order"));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::invalid("not a permutation"));
            }
        }
        let mut g = Self::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        Ok(g)
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        if !self.has_edge(u, v) {
            self.bits[u * self.words + (v >> 6)] |= 1 << (v & 63);
            self.bits[v * self.words + (u >> 6)] |= 1 << (u & 63);
            self.edge_count += 1;
        }
    }

    pub(crate) fn clear_edge(&mut self, u: usize, v: usize) {
        if self.has_edge(u, v) {
            self.bits[u * self.words + (v >> 6)] &= !(1 << (v & 63));
            self.bits[v * self.words + (u >> 6)] &= !(1 << (u & 63));
            self.edge_count -= 1;
        }
    }

    pub(crate) fn from_raw(n: usize, bits: Vec<u64>, edge_count: usize) -> Self {
        Self {
            n,
            words: words_for(n),
            bits,
            edge_count,
        }
    }

    pub(crate) fn raw_bits(&self) -> &[u64] {
        &self.bits
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edge_count", &self.edge_count)
            .finish()
    }
}

/// Strictly increasing list of pairwise-adjacent vertices of some host graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clique {
    vertices: Vec<usize>,
}

impl Clique {
    /// Sorts `vs` and verifies it is a clique of `g`.
    pub fn new(g: &Graph, mut vs: Vec<usize>) -> Result<Self> {
        vs.sort_unstable();
        if let Some(w) = vs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("vertex {} listed twice", w[0])));
        }
        for &v in &vs {
            g.check_vertex(v)?;
        }
        if let Some((u, v)) = first_non_edge(g, &vs) {
            return Err(Error::NotAClique { u, v });
        }
        Ok(Self { vertices: vs })
    }

    pub fn empty() -> Self {
        Self { vertices: Vec::new() }
    }

    /// Caller guarantees `vs` is a clique of the graph it came from.
    pub(crate) fn from_unchecked(mut vs: Vec<usize>) -> Self {
        vs.sort_unstable();
        Self { vertices: vs }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.vertices
    }

    /// True when no vertex of `g` extends the clique.
    pub fn is_maximal_in(&self, g: &Graph) -> bool {
        frontier(g, &self.vertices).is_empty()
    }
}

fn first_non_edge(g: &Graph, vs: &[usize]) -> Option<(usize, usize)> {
    for (a, &u) in vs.iter().enumerate() {
        for &v in &vs[a + 1..] {
            if !g.has_edge(u, v) {
                return Some((u, v));
            }
        }
    }
    None
}

/// True iff every pair of `vs` is adjacent. Empty sets and singletons are cliques.
pub fn is_clique(g: &Graph, vs: &[usize]) -> Result<bool> {
    for &v in vs {
        g.check_vertex(v)?;
    }
    let mut sorted = vs.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok(false);
    }
    Ok(first_non_edge(g, &sorted).is_none())
}

/// Vertices adjacent to every member of `c` (hence not in `c`). For an empty
/// `c` this is the whole vertex set.
pub fn frontier(g: &Graph, c: &[usize]) -> VertexSet {
    let mut f = VertexSet::full(g.n());
    for &v in c {
        f.intersect_with(g.row(v));
    }
    f
}
