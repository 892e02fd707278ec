use super::sm::grow;
use crate::bounds::ln_choose;
use crate::error::{Error, Result};
use crate::graph::{and_count, is_clique, Clique, Graph, VertexSet};

/// Smallest `t ≥ ⌈q/2⌉` such that fewer than about `q` of the graph's `n`
/// vertices are expected to have `t` or more neighbours among `q` random
/// vertices at edge density `p`.
fn admission_threshold(n: usize, q: usize, p: f64) -> usize {
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let budget = (q as f64 / n as f64).ln();
    let ln_term = |t: usize| ln_choose(q as u64, t as u64) + t as f64 * lp + (q - t) as f64 * lq;
    // Upper tail accumulated downwards from t = q.
    let mut tail = f64::NEG_INFINITY;
    let mut t = q;
    loop {
        let term = ln_term(t);
        let hi = tail.max(term);
        let next = hi + ((tail - hi).exp() + (term - hi).exp()).ln();
        if next > budget || t <= q.div_ceil(2) {
            return if next > budget { t + 1 } else { t }.min(q);
        }
        tail = next;
        t -= 1;
    }
}

/// Remove minimum-degree vertices (within the set; lowest id on ties) until
/// the remainder is a clique.
pub fn peel_to_clique(g: &Graph, candidates: &[usize]) -> Vec<usize> {
    let mut set = VertexSet::from_vertices(g.n(), candidates.iter().copied());
    let mut members = set.to_vec();
    let mut deg: Vec<usize> = members.iter().map(|&v| set.count_and(g.row(v))).collect();
    while let Some((pos, &d)) = deg.iter().enumerate().min_by_key(|&(_, d)| *d) {
        if d + 1 >= members.len() {
            break;
        }
        let v = members.remove(pos);
        deg.remove(pos);
        set.remove(v);
        for (u, du) in members.iter().zip(deg.iter_mut()) {
            if g.has_edge(*u, v) {
                *du -= 1;
            }
        }
    }
    members
}

/// Finish a partial recovery: grow `seed` toward a clique of size `k_target`.
///
/// Each round admits every vertex with unusually many neighbours in the
/// current clique, peels that pool back to a clique by dropping low-degree
/// members (which removes vertices that do not belong), and extends the
/// result greedily until it is maximal. Rounds repeat while the clique
/// grows and is still below `k_target`. The returned clique is never
/// smaller than `seed`.
pub fn cleanup(g: &Graph, seed: &Clique, k_target: usize) -> Result<Clique> {
    if seed.size() < 2 {
        return Err(Error::invalid("cleanup needs a seed of at least two vertices"));
    }
    if !is_clique(g, seed.vertices())? {
        return Err(Error::invalid("cleanup seed is not a clique"));
    }
    let p = g.density().clamp(1e-9, 1.0 - 1e-9);
    let mut best = seed.clone();
    let mut current = seed.vertices().to_vec();
    while best.size() < k_target {
        let q = current.len();
        let t = admission_threshold(g.n(), q, p);
        let members = VertexSet::from_vertices(g.n(), current.iter().copied());
        let mut pool = current.clone();
        pool.extend((0..g.n()).filter(|&v| !members.contains(v) && and_count(g.row(v), members.words()) >= t));

        let mut clique = peel_to_clique(g, &pool);
        let mut front = crate::graph::frontier(g, &clique).words().to_vec();
        grow(g, &mut clique, &mut front, &mut LowestId);

        if clique.len() <= best.size() {
            break;
        }
        best = Clique::from_unchecked(clique.clone());
        current = clique;
    }
    Ok(best)
}

/// Tie-breaker that always keeps the first (lowest-id) candidate.
struct LowestId;

impl rand::RngCore for LowestId {
    fn next_u32(&mut self) -> u32 {
        u32::MAX
    }
    fn next_u64(&mut self) -> u64 {
        u64::MAX
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        dst.fill(0xff);
    }
}
