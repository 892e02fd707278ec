use std::collections::HashMap;

use rand::Rng;

use super::sm::sm0_from;
use super::SearchOutcome;
use crate::bounds::r_continuous;
use crate::error::{Error, Result};
use crate::graph::{select, Clique, Graph};

/// Start space of an early-stopped search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EarlyStopLevel {
    /// One start per vertex.
    Vertices,
    /// One start per edge.
    Edges,
}

impl EarlyStopLevel {
    pub fn from_level(level: usize) -> Result<Self> {
        match level {
            1 => Ok(Self::Vertices),
            2 => Ok(Self::Edges),
            _ => Err(Error::invalid(format!("early-stop level must be 1 or 2, got {level}"))),
        }
    }

    pub fn level(self) -> usize {
        match self {
            Self::Vertices => 1,
            Self::Edges => 2,
        }
    }
}

/// `⌈R(N)⌉ + 2`.
pub fn default_k_stop(n: usize, p: f64) -> Result<usize> {
    Ok(r_continuous(n as f64, p)?.ceil() as usize + 2)
}

/// Uniform permutation of `0..len` produced one element at a time, so a
/// search that stops early pays only for what it drew.
struct LazyShuffle {
    len: u64,
    next: u64,
    swapped: HashMap<u64, u64>,
}

impl LazyShuffle {
    fn new(len: u64) -> Self {
        Self { len, next: 0, swapped: HashMap::new() }
    }

    fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<u64> {
        if self.next == self.len {
            return None;
        }
        let j = self.next;
        let r = rng.random_range(j..self.len);
        let at_r = self.swapped.get(&r).copied().unwrap_or(r);
        let at_j = self.swapped.remove(&j).unwrap_or(j);
        if r != j {
            self.swapped.insert(r, at_j);
        }
        self.next += 1;
        Some(at_r)
    }
}

/// Maps an edge index in `0..M` to the edge `(u, v)`, `u < v`, in row-major
/// upper-triangle order.
struct EdgeIndex {
    /// `offsets[u]` = number of edges `(a, b)` with `a < u`.
    offsets: Vec<u64>,
}

impl EdgeIndex {
    fn new(g: &Graph) -> Self {
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut acc = 0u64;
        offsets.push(0);
        for u in 0..g.n() {
            acc += upper_degree(g, u) as u64;
            offsets.push(acc);
        }
        Self { offsets }
    }

    fn edge(&self, g: &Graph, e: u64) -> (usize, usize) {
        let u = self.offsets.partition_point(|&o| o <= e) - 1;
        let rank = (e - self.offsets[u]) as usize;
        let below = g.degree(u) - upper_degree(g, u);
        let v = select(g.row(u), below + rank).expect("edge index within row");
        (u, v)
    }
}

/// Neighbours of `u` with larger id.
fn upper_degree(g: &Graph, u: usize) -> usize {
    let row = g.row(u);
    let w = u / 64;
    let mask = if u % 64 == 63 { 0 } else { !0u64 << (u % 64 + 1) };
    (row[w] & mask).count_ones() as usize + row[w + 1..].iter().map(|x| x.count_ones() as usize).sum::<usize>()
}

/// SM¹ or SM² with early stopping: run SM⁰ from starts in random order and
/// stop at the first clique of size at least `k_stop`.
///
/// When every start has been tried without reaching `k_stop`, the largest
/// clique seen (first found on ties) is returned with `stopped_early` unset.
pub fn early_stop_search<R: Rng + ?Sized>(
    g: &Graph,
    level: EarlyStopLevel,
    k_stop: usize,
    rng: &mut R,
) -> Result<SearchOutcome> {
    early_stop_search_budget(g, level, k_stop, rng, u64::MAX)
}

/// [`early_stop_search`] that gives up after `max_starts` starts. The
/// starts visited are a prefix of the unbounded search's order, so a run
/// that stops early within the budget is exactly the unbounded run.
pub fn early_stop_search_budget<R: Rng + ?Sized>(
    g: &Graph,
    level: EarlyStopLevel,
    k_stop: usize,
    rng: &mut R,
    max_starts: u64,
) -> Result<SearchOutcome> {
    let mut run = EarlyStopRun::new(g, level, k_stop, rng)?;
    Ok(run.advance(max_starts).unwrap_or_else(|| run.outcome()))
}

/// Resumable [`early_stop_search`]: the same start order, consumed in
/// slices. Useful for spreading a start budget over several graphs.
pub struct EarlyStopRun<'g, R> {
    g: &'g Graph,
    edges: Option<EdgeIndex>,
    order: LazyShuffle,
    rng: R,
    base: u64,
    k_stop: usize,
    best: Option<Clique>,
    used: u64,
    total: u64,
    finished: Option<SearchOutcome>,
}

impl<'g, R: Rng> EarlyStopRun<'g, R> {
    pub fn new(g: &'g Graph, level: EarlyStopLevel, k_stop: usize, mut rng: R) -> Result<Self> {
        if k_stop == 0 {
            return Err(Error::invalid("k_stop must be at least 1"));
        }
        let base = rng.next_u64();
        let (total, edges) = match level {
            EarlyStopLevel::Vertices => (g.n() as u64, None),
            EarlyStopLevel::Edges => (g.edge_count() as u64, Some(EdgeIndex::new(g))),
        };
        Ok(Self {
            g,
            edges,
            order: LazyShuffle::new(total),
            rng,
            base,
            k_stop,
            best: None,
            used: 0,
            total,
            finished: None,
        })
    }

    /// Try up to `max_more` further starts. Returns the final outcome once
    /// the search has stopped early or run out of starts.
    pub fn advance(&mut self, max_more: u64) -> Option<SearchOutcome> {
        let (g, base) = (self.g, self.base);
        let mut left = max_more;
        while self.finished.is_none() && left > 0 {
            left -= 1;
            let Some(s) = self.order.draw(&mut self.rng) else {
                let best = self.best.take().unwrap_or_else(|| sm0_from(g, base, &[]));
                self.finished = Some(SearchOutcome::new(best, self.used, self.total, false));
                break;
            };
            self.used += 1;
            let c = match &self.edges {
                None => sm0_from(g, base, &[s as usize]),
                Some(idx) => {
                    let (u, v) = idx.edge(g, s);
                    sm0_from(g, base, &[u, v])
                }
            };
            if c.size() >= self.k_stop {
                self.finished = Some(SearchOutcome::new(c, self.used, self.total, true));
            } else if self.best.as_ref().is_none_or(|b| c.size() > b.size()) {
                self.best = Some(c);
            }
        }
        if self.finished.is_none() && self.used == self.total {
            let best = self.best.take().unwrap_or_else(|| sm0_from(g, base, &[]));
            self.finished = Some(SearchOutcome::new(best, self.used, self.total, false));
        }
        self.finished.clone()
    }

    pub fn starts_used(&self) -> u64 {
        self.used
    }

    pub fn total_starts(&self) -> u64 {
        self.total
    }

    /// The final outcome if finished, otherwise the best clique so far.
    pub fn outcome(&self) -> SearchOutcome {
        match &self.finished {
            Some(o) => o.clone(),
            None => {
                let best = self.best.clone().unwrap_or_else(|| sm0_from(self.g, self.base, &[]));
                SearchOutcome::new(best, self.used, self.total, false)
            }
        }
    }
}
