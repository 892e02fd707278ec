use crate::error::{Error, Result};
use crate::graph::{Clique, Graph};

/// Maximum clique by branch and bound with a greedy colouring bound.
/// Limited to 64 vertices so every vertex set fits in one word.
pub fn exact_max_clique(g: &Graph) -> Result<Clique> {
    if g.n() > 64 {
        return Err(Error::GraphTooLarge { n: g.n(), limit: 64 });
    }
    let adj: Vec<u64> = (0..g.n()).map(|v| g.row(v).first().copied().unwrap_or(0)).collect();
    let all = if g.n() == 64 { !0 } else { (1u64 << g.n()) - 1 };
    let mut best = 0u64;
    expand(&adj, 0, all, &mut best);
    Ok(Clique::from_unchecked(bits(best)))
}

fn bits(mut w: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(w.count_ones() as usize);
    while w != 0 {
        out.push(w.trailing_zeros() as usize);
        w &= w - 1;
    }
    out
}

fn expand(adj: &[u64], current: u64, mut cand: u64, best: &mut u64) {
    if cand == 0 {
        if current.count_ones() > best.count_ones() {
            *best = current;
        }
        return;
    }
    // Greedy colouring: vertices sorted by colour, colour = upper bound on
    // the clique extension available from that vertex onward.
    let mut order = Vec::with_capacity(cand.count_ones() as usize);
    let mut uncoloured = cand;
    let mut colour = 0u32;
    while uncoloured != 0 {
        colour += 1;
        let mut avail = uncoloured;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !(1u64 << v) & !adj[v];
            uncoloured &= !(1u64 << v);
            order.push((v, colour));
        }
    }
    let size = current.count_ones();
    for &(v, c) in order.iter().rev() {
        if size + c <= best.count_ones() {
            return;
        }
        expand(adj, current | (1 << v), cand & adj[v], best);
        cand &= !(1u64 << v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_gnp, is_clique};

    /// Independent oracle: try every subset in decreasing size order.
    fn brute_force(g: &Graph) -> usize {
        let n = g.n();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if is_clique(g, &vs).unwrap() {
                best = size;
            }
        }
        best
    }

    #[test]
    fn small_known_graphs() {
        assert_eq!(exact_max_clique(&Graph::complete(5)).unwrap().size(), 5);
        let c5 = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(exact_max_clique(&c5).unwrap().size(), 2);
        assert_eq!(exact_max_clique(&Graph::empty(0)).unwrap().size(), 0);
        assert_eq!(exact_max_clique(&Graph::complete(64)).unwrap().size(), 64);
        assert!(exact_max_clique(&Graph::empty(65)).is_err());
    }

    #[test]
    fn agrees_with_brute_force() {
        for s in 0..40 {
            let p = [0.2, 0.5, 0.8][s as usize % 3];
            let g = gen_gnp(16, p, s).unwrap();
            let c = exact_max_clique(&g).unwrap();
            assert!(is_clique(&g, c.vertices()).unwrap());
            assert_eq!(c.size(), brute_force(&g), "seed {s}");
        }
    }
}
