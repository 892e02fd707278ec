use rand::RngCore;

use super::{words_for, Graph, DEFAULT_MAX_N};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Erdős–Rényi G(n, p) with the default order limit.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    gen_gnp_with_limit(n, p, seed, DEFAULT_MAX_N)
}

/// Erdős–Rényi G(n, p). Each pair `i < j` gets one Bernoulli draw, visited in
/// row-major order, so the graph is a pure function of `(n, p, seed)`.
pub fn gen_gnp_with_limit(n: usize, p: f64, seed: u64, max_n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::invalid("graph order must be at least 1"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("edge probability {p} is outside (0, 1)")));
    }
    if n > max_n {
        return Err(Error::GraphTooLarge { n, limit: max_n });
    }
    // P(draw < threshold) = threshold / 2^64 = p, up to 2^-64.
    let threshold = (p * 18_446_744_073_709_551_616.0) as u64;
    let words = words_for(n);
    let mut bits = vec![0u64; n * words];
    let mut rng = SeededRng::new(seed);
    let mut edge_count = 0usize;
    for i in 0..n {
        let row = &mut bits[i * words..(i + 1) * words];
        for j in i + 1..n {
            if rng.next_u64() < threshold {
                row[j >> 6] |= 1 << (j & 63);
                edge_count += 1;
            }
        }
    }
    // Mirror the upper triangle into the lower one.
    for i in 0..n {
        for w in (i + 1) / 64..words {
            let mut word = bits[i * words + w];
            if w == i / 64 {
                word &= !((1u64 << (i % 64)) | ((1u64 << (i % 64)) - 1));
            }
            while word != 0 {
                let j = w * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                bits[j * words + (i >> 6)] |= 1 << (i & 63);
            }
        }
    }
    Ok(Graph::from_raw(n, bits, edge_count))
}

/// Flip every off-diagonal pair.
pub fn complement(g: &Graph) -> Graph {
    let n = g.n();
    let words = g.words_per_row();
    let mut bits: Vec<u64> = g.raw_bits().iter().map(|w| !w).collect();
    let tail = n % 64;
    for v in 0..n {
        let row = &mut bits[v * words..(v + 1) * words];
        if tail != 0 {
            row[words - 1] &= (1u64 << tail) - 1;
        }
        row[v >> 6] &= !(1 << (v & 63));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    Graph::from_raw(n, bits, pairs - g.edge_count())
}
