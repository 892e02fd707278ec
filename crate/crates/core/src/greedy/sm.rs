use rand::Rng;
use rayon::prelude::*;

use super::SearchOutcome;
use crate::error::{Error, Result};
use crate::graph::{and_count, frontier, is_clique, ones, Clique, Graph};
use crate::rng::{mix_seed, SeededRng};

/// Tie-breaking stream for the start whose seed clique is `start`.
pub fn start_rng(base: u64, start: &[usize]) -> SeededRng {
    let key: Vec<u64> = start.iter().map(|&v| v as u64).collect();
    SeededRng::new(mix_seed(base, &key))
}

/// Grow `clique` greedily while the frontier is non-empty.
///
/// At each step every frontier vertex is scored by the number of its
/// neighbours inside the frontier; ties are broken uniformly by reservoir
/// sampling in vertex-id order.
pub(crate) fn grow<R: Rng + ?Sized>(g: &Graph, clique: &mut Vec<usize>, front: &mut [u64], rng: &mut R) {
    loop {
        let lo = match front.iter().position(|&w| w != 0) {
            Some(lo) => lo,
            None => return,
        };
        let hi = front.iter().rposition(|&w| w != 0).unwrap() + 1;
        let window = &front[lo..hi];

        let mut best = 0usize;
        let mut chosen = usize::MAX;
        let mut ties = 0u32;
        for (off, &word) in window.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let w = (lo + off) * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                let d = and_count(&g.row(w)[lo..hi], window);
                if chosen == usize::MAX || d > best {
                    best = d;
                    chosen = w;
                    ties = 1;
                } else if d == best {
                    ties += 1;
                    if rng.random_range(0..ties) == 0 {
                        chosen = w;
                    }
                }
            }
        }
        clique.push(chosen);
        for (f, r) in front.iter_mut().zip(g.row(chosen)) {
            *f &= r;
        }
    }
}

/// Greedy growth from `seed` (which must already be a clique of `g`).
pub(crate) fn grow_from<R: Rng + ?Sized>(g: &Graph, seed: &[usize], rng: &mut R) -> Clique {
    let mut front = frontier(g, seed).words().to_vec();
    let mut clique = seed.to_vec();
    grow(g, &mut clique, &mut front, rng);
    Clique::from_unchecked(clique)
}

/// SM⁰: one greedy construction from `seed_clique` (empty when `None`).
/// The result is maximal and contains the seed.
pub fn sm0<R: Rng + ?Sized>(g: &Graph, rng: &mut R, seed_clique: Option<&[usize]>) -> Result<Clique> {
    let seed = seed_clique.unwrap_or(&[]);
    if !is_clique(g, seed)? {
        return Err(Error::invalid("seed vertices do not form a clique"));
    }
    Ok(grow_from(g, seed, rng))
}

/// [`sm0`] from `seed` using that start's derived stream; the building block
/// shared by all multi-start variants.
pub fn sm0_from(g: &Graph, base: u64, seed: &[usize]) -> Clique {
    grow_from(g, seed, &mut start_rng(base, seed))
}

/// Keep the larger clique; on equal size keep the one whose start sorts first.
fn better(a: (Clique, Vec<usize>), b: (Clique, Vec<usize>)) -> (Clique, Vec<usize>) {
    if b.0.size() > a.0.size() || (b.0.size() == a.0.size() && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// All complete `i`-subgraphs whose smallest vertex is `first`, in
/// lexicographic order.
fn cliques_from(g: &Graph, first: usize, i: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(g: &Graph, cur: &mut Vec<usize>, cand: Vec<u64>, left: usize, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().unwrap();
        for v in ones(&cand).filter(|&v| v > last) {
            let next: Vec<u64> = cand.iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
            cur.push(v);
            rec(g, cur, next, left - 1, out);
            cur.pop();
        }
    }
    let mut cur = vec![first];
    rec(g, &mut cur, g.row(first).to_vec(), i - 1, out);
}

/// SMⁱ: run SM⁰ from every complete `i`-subgraph and keep the largest result.
///
/// Cost is O(N^(i+2)). When no complete `i`-subgraph exists the plain
/// [`sm0`] result is returned.
pub fn smi<R: Rng + ?Sized>(g: &Graph, i: usize, rng: &mut R) -> Result<SearchOutcome> {
    if i == 0 {
        return Err(Error::invalid("SM^i needs i >= 1"));
    }
    let base = rng.next_u64();
    let per_first: Vec<(Option<(Clique, Vec<usize>)>, u64)> = (0..g.n())
        .into_par_iter()
        .map(|first| {
            let mut starts = Vec::new();
            cliques_from(g, first, i, &mut starts);
            let used = starts.len() as u64;
            let best = starts
                .into_iter()
                .map(|s| (sm0_from(g, base, &s), s))
                .reduce(better);
            (best, used)
        })
        .collect();
    let total: u64 = per_first.iter().map(|(_, c)| c).sum();
    let best = per_first.into_iter().filter_map(|(b, _)| b).reduce(better);
    Ok(match best {
        Some((clique, _)) => SearchOutcome::new(clique, total, total, false),
        None => SearchOutcome::new(grow_from(g, &[], &mut start_rng(base, &[])), 0, 0, false),
    })
}

/// Lexicographic `k`-subsets of `0..n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Best SM⁰ regrowth over the `i`-subsets of `c`. Returns the best result,
/// which is `c` itself unless some regrowth is strictly larger.
fn regrow_subsets(g: &Graph, c: &Clique, i: usize, base: u64) -> (Clique, u64) {
    let i = i.min(c.size());
    let subs = subsets(c.size(), i);
    let count = subs.len() as u64;
    let best = subs
        .into_par_iter()
        .map(|s| {
            let seed: Vec<usize> = s.iter().map(|&k| c.vertices()[k]).collect();
            (sm0_from(g, base, &seed), seed)
        })
        .reduce_with(better);
    match best {
        Some((b, _)) if b.size() > c.size() => (b, count),
        _ => (c.clone(), count),
    }
}

/// SM⁰→SMⁱ: regrow from every `i`-subset of one SM⁰ clique. Never returns a
/// clique smaller than that first SM⁰ result.
pub fn sm0_then_smi<R: Rng + ?Sized>(g: &Graph, i: usize, rng: &mut R) -> Result<SearchOutcome> {
    if i == 0 {
        return Err(Error::invalid("SM0->SM^i needs i >= 1"));
    }
    let first = grow_from(g, &[], rng);
    let base = rng.next_u64();
    let (best, count) = regrow_subsets(g, &first, i, base);
    Ok(SearchOutcome::new(best, count, count, false))
}

/// SM⁰→iter[SMⁱ]: repeat the subset regrowth on the current clique while it
/// strictly grows.
pub fn sm0_iter_smi<R: Rng + ?Sized>(g: &Graph, i: usize, rng: &mut R) -> Result<SearchOutcome> {
    if i == 0 {
        return Err(Error::invalid("SM0->iter[SM^i] needs i >= 1"));
    }
    let mut current = grow_from(g, &[], rng);
    let mut trajectory = vec![current.size()];
    let mut total = 0u64;
    let mut t = 0usize;
    loop {
        t += 1;
        let base = rng.next_u64();
        let (next, count) = regrow_subsets(g, &current, i, base);
        total += count;
        if next.size() > current.size() {
            current = next;
            trajectory.push(current.size());
        } else {
            break;
        }
    }
    let mut out = SearchOutcome::new(current, total, total, false);
    out.iterations_t = t;
    out.trajectory = trajectory;
    Ok(out)
}

/// Seed size for SM⁰→iter[SMⁱ] as a function of graph order.
///
/// Piecewise constant over 100–589 → 2, 590–1499 → 3, 1500–7499 → 4,
/// 7500–12999 → 5, 13000–64999 → 6, 65000–100000 → 7. Smaller graphs use 2;
/// beyond 100000 the value grows by one per decade (10^6 → 8, 10^7 → 9, ...).
pub fn choose_i(n: usize) -> usize {
    match n {
        0..=589 => 2,
        590..=1499 => 3,
        1500..=7499 => 4,
        7500..=12999 => 5,
        13000..=64999 => 6,
        65000..=999_999 => 7,
        _ => 7 + (n as f64 / 1e5).log10().floor() as usize,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_gnp;

    #[test]
    fn sm0_on_trivial_graphs() {
        let mut rng = SeededRng::new(1);
        assert_eq!(sm0(&Graph::complete(5), &mut rng, None).unwrap().size(), 5);
        assert_eq!(sm0(&Graph::empty(5), &mut rng, None).unwrap().size(), 1);
        let g = gen_gnp(50, 0.5, 1).unwrap();
        assert!(sm0(&g, &mut rng, Some(&[0, 0])).is_err());
    }

    #[test]
    fn sm0_contains_seed_and_is_maximal() {
        let g = gen_gnp(200, 0.5, 2).unwrap();
        let mut rng = SeededRng::new(3);
        let (u, v) = g.edges().next().unwrap();
        let c = sm0(&g, &mut rng, Some(&[u, v])).unwrap();
        assert!(c.contains(u) && c.contains(v));
        assert!(c.is_maximal_in(&g));
        assert!(is_clique(&g, c.vertices()).unwrap());
    }

    #[test]
    fn sm0_prefers_high_frontier_degree() {
        // Vertex 0 is adjacent to everything, so it is always picked first.
        let mut g = gen_gnp(40, 0.3, 4).unwrap();
        for v in 1..40 {
            g.set_edge(0, v);
        }
        for s in 0..20 {
            let c = sm0(&g, &mut SeededRng::new(s), None).unwrap();
            assert!(c.contains(0));
        }
    }

    #[test]
    fn smi_on_complete_graph() {
        let mut rng = SeededRng::new(1);
        let out = smi(&Graph::complete(5), 1, &mut rng).unwrap();
        assert_eq!(out.clique.size(), 5);
        assert_eq!(out.total_starts, 5);
        let out2 = smi(&Graph::complete(5), 2, &mut rng).unwrap();
        assert_eq!(out2.total_starts, 10);
    }

    #[test]
    fn smi_falls_back_without_complete_subgraphs() {
        let out = smi(&Graph::empty(6), 2, &mut SeededRng::new(1)).unwrap();
        assert_eq!(out.clique.size(), 1);
        assert_eq!(out.total_starts, 0);
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
        assert_eq!(subsets(5, 5), vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn then_smi_never_shrinks() {
        for s in 0..10 {
            let g = gen_gnp(300, 0.5, s).unwrap();
            let mut a = SeededRng::new(s);
            let mut b = SeededRng::new(s);
            let plain = sm0(&g, &mut a, None).unwrap();
            let out = sm0_then_smi(&g, 2, &mut b).unwrap();
            assert!(out.clique.size() >= plain.size());
        }
        let out = sm0_then_smi(&Graph::complete(7), 3, &mut SeededRng::new(0)).unwrap();
        assert_eq!(out.clique.size(), 7);
    }

    #[test]
    fn iter_trajectory_strictly_increases() {
        for s in 0..10 {
            let g = gen_gnp(400, 0.5, 100 + s).unwrap();
            let out = sm0_iter_smi(&g, 2, &mut SeededRng::new(s)).unwrap();
            assert!(out.trajectory.windows(2).all(|w| w[1] > w[0]));
            assert_eq!(out.iterations_t, out.trajectory.len());
            assert_eq!(*out.trajectory.last().unwrap(), out.clique.size());
        }
    }

    #[test]
    fn iter_fixed_point_on_complete_graph() {
        let out = sm0_iter_smi(&Graph::complete(6), 2, &mut SeededRng::new(0)).unwrap();
        assert_eq!(out.iterations_t, 1);
        assert_eq!(out.clique.size(), 6);
    }

    #[test]
    fn choose_i_table() {
        assert_eq!(choose_i(50), 2);
        assert_eq!(choose_i(100), 2);
        assert_eq!(choose_i(589), 2);
        assert_eq!(choose_i(590), 3);
        assert_eq!(choose_i(5000), 4);
        assert_eq!(choose_i(7500), 5);
        assert_eq!(choose_i(13000), 6);
        assert_eq!(choose_i(64999), 6);
        assert_eq!(choose_i(100_000), 7);
        assert_eq!(choose_i(999_999), 7);
        assert_eq!(choose_i(1_000_000), 8);
        assert_eq!(choose_i(10_000_000), 9);
    }
}
