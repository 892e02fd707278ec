//! Approximate message passing for planted-clique recovery.
//!
//! Every ordered pair `(l, i)` carries a message `Γ_{l→i}`; the marginal of
//! `i` is
//!
//! ```text
//! Γ_i = ln(K/√N) + Σ_{l≠i} [ln(1 + (1+ã_li) e^{Γ_{l→i}}/√N) − ln(1 + e^{Γ_{l→i}}/√N)]
//! ```
//!
//! and the outgoing message is the marginal with the reverse message's own
//! term removed: `Γ_{i→j} = Γ_i − term(Γ_{j→i})`. One sweep is therefore
//! O(N²).
//!
//! The state keeps, for each ordered pair, the term `term(Γ_{l→i})`
//! rather than the message itself. Terms are small (at most `ln 2` for
//! edges, `≈ e^Γ/√N` for most non-edges), so storing them in single
//! precision loses far less than storing messages would; messages are
//! rebuilt in double precision as `Γ_l − term(Γ_{i→l})`. The new term for
//! `l → i` needs only the old term for `i → l`, so both directions of a pair
//! live side by side and a sweep updates them in place.

#[doc(hidden)]
pub mod kernel;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{is_clique, Clique, Graph};

/// Storage type of the per-pair terms.
pub trait Precision: Copy + Default + Send + Sync + 'static {
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Precision for f32 {
    #[inline(always)]
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    #[inline(always)]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Precision for f64 {
    #[inline(always)]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline(always)]
    fn to_f64(self) -> f64 {
        self
    }
}

#[derive(Clone, Debug)]
pub struct AmpState<T: Precision = f32> {
    n: usize,
    k_hc: usize,
    t: usize,
    /// Pairs `i < l` in row-major upper-triangle order. At `t = 0`, `up`
    /// holds the initial message `Γ_{l→i}` and `down` holds `Γ_{i→l}`;
    /// afterwards they hold the terms of those messages at step `t − 1`.
    up: Vec<T>,
    down: Vec<T>,
    marginals: Vec<f64>,
}

/// Offset of pair `(i, i + 1)` in upper-triangle storage.
#[inline]
fn row_start(n: usize, i: usize) -> usize {
    i * (2 * n - i - 1) / 2
}

impl<T: Precision> AmpState<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_hc(&self) -> usize {
        self.k_hc
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn marginals(&self) -> &[f64] {
        &self.marginals
    }

    /// Stored value for the message `from → to`.
    fn cell(&self, from: usize, to: usize) -> f64 {
        if to < from {
            self.up[row_start(self.n, to) + from - to - 1].to_f64()
        } else {
            self.down[row_start(self.n, from) + to - from - 1].to_f64()
        }
    }

    /// Message `Γ_{from→to}` at the current step.
    pub fn message(&self, from: usize, to: usize) -> f64 {
        assert!(from != to && from < self.n && to < self.n);
        if self.t == 0 {
            self.cell(from, to)
        } else {
            // Γ_{from→to} = Γ_from − term(Γ_{to→from}).
            self.marginals[from] - self.cell(to, from)
        }
    }

    fn prior(&self) -> f64 {
        (self.k_hc as f64 / (self.n as f64).sqrt()).ln()
    }
}

/// Messages uniform on `[−1, 0)`, drawn pair by pair (`l → i` then
/// `i → l` for `i < l`, row-major); marginals zero.
pub fn amp_init<T: Precision, R: Rng + ?Sized>(n: usize, k_hc: usize, rng: &mut R) -> Result<AmpState<T>> {
    if n < 2 || k_hc == 0 || k_hc > n {
        return Err(Error::invalid(format!("AMP needs 2 <= n and 1 <= k_hc <= n, got n = {n}, k_hc = {k_hc}")));
    }
    let pairs = n * (n - 1) / 2;
    let mut up = Vec::with_capacity(pairs);
    let mut down = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        up.push(T::from_f64(rng.random::<f64>() - 1.0));
        down.push(T::from_f64(rng.random::<f64>() - 1.0));
    }
    Ok(AmpState { n, k_hc, t: 0, up, down, marginals: vec![0.0; n] })
}

/// State with caller-chosen initial messages; `message(from, to)` gives
/// `Γ_{from→to}` at `t = 0`.
pub fn amp_init_with<T: Precision>(
    n: usize,
    k_hc: usize,
    mut message: impl FnMut(usize, usize) -> f64,
) -> Result<AmpState<T>> {
    if n < 2 || k_hc == 0 || k_hc > n {
        return Err(Error::invalid(format!("AMP needs 2 <= n and 1 <= k_hc <= n, got n = {n}, k_hc = {k_hc}")));
    }
    let pairs = n * (n - 1) / 2;
    let mut up = Vec::with_capacity(pairs);
    let mut down = Vec::with_capacity(pairs);
    for i in 0..n {
        for l in i + 1..n {
            up.push(T::from_f64(message(l, i)));
            down.push(T::from_f64(message(i, l)));
        }
    }
    Ok(AmpState { n, k_hc, t: 0, up, down, marginals: vec![0.0; n] })
}

/// Bits `from..from + out.len()` of row `i` as 0.0 / 1.0, all within one
/// word.
#[inline]
fn edge_flags(g: &Graph, i: usize, from: usize, out: &mut [f64]) {
    let word = g.row(i)[from / 64] >> (from % 64);
    for (b, o) in out.iter_mut().enumerate() {
        *o = ((word >> b) & 1) as f64;
    }
}

/// One synchronous sweep: every term from the current messages, then every
/// marginal. Fails with [`Error::NumericalBlowup`] on a non-finite marginal.
///
/// Pairs are visited in storage order, in runs that stay within one
/// adjacency word. Each marginal is summed in a fixed order (terms from
/// lower rows first, then its own row), independent of scheduling.
pub fn amp_step<T: Precision>(state: &mut AmpState<T>, g: &Graph) -> Result<()> {
    let n = state.n;
    if g.n() != n {
        return Err(Error::invalid(format!("state is for {n} vertices, graph has {}", g.n())));
    }
    let half_ln_n = 0.5 * (n as f64).ln();
    let first = state.t == 0;
    let mut sums = vec![0.0f64; n];
    let mut z_up = [0.0f64; 64];
    let mut z_down = [0.0f64; 64];
    let mut flags = [0.0f64; 64];
    let mut t_up = [0.0f64; 64];
    let mut t_down = [0.0f64; 64];
    let marg = &state.marginals;

    for i in 0..n - 1 {
        let base = row_start(n, i);
        let gi = if first { 0.0 } else { marg[i] } - half_ln_n;
        let mut row_sum = 0.0f64;
        let mut l0 = i + 1;
        while l0 < n {
            let len = (64 - l0 % 64).min(n - l0);
            let off = base + l0 - i - 1;
            let up = &mut state.up[off..off + len];
            let down = &mut state.down[off..off + len];
            // up: l → i; its message is Γ_l − term(i → l) = Γ_l − down.
            if first {
                for k in 0..len {
                    z_up[k] = up[k].to_f64() - half_ln_n;
                    z_down[k] = down[k].to_f64() - half_ln_n;
                }
            } else {
                let ml = &marg[l0..l0 + len];
                for k in 0..len {
                    z_up[k] = ml[k] - half_ln_n - down[k].to_f64();
                    z_down[k] = gi - up[k].to_f64();
                }
            }
            edge_flags(g, i, l0, &mut flags[..len]);
            kernel::pair_terms(&z_up[..len], &flags[..len], &mut t_up[..len]);
            kernel::pair_terms(&z_down[..len], &flags[..len], &mut t_down[..len]);
            for k in 0..len {
                up[k] = T::from_f64(t_up[k]);
                down[k] = T::from_f64(t_down[k]);
                row_sum += t_up[k];
            }
            for (s, &d) in sums[l0..l0 + len].iter_mut().zip(&t_down[..len]) {
                *s += d;
            }
            l0 += len;
        }
        sums[i] += row_sum;
    }

    let prior = state.prior();
    state.t += 1;
    for (m, s) in state.marginals.iter_mut().zip(&sums) {
        *m = prior + s;
    }
    if state.marginals.iter().any(|m| !m.is_finite()) {
        return Err(Error::NumericalBlowup { iteration: state.t });
    }
    Ok(())
}

/// Largest absolute change between two marginal vectors is within `eps`.
pub fn amp_converged(prev: &[f64], next: &[f64], eps: f64) -> bool {
    prev.len() == next.len() && prev.iter().zip(next).all(|(a, b)| (a - b).abs() <= eps)
}

pub const DEFAULT_T_MAX: usize = 100;
pub const DEFAULT_EPS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmpFailure {
    NonConvergence,
    Blowup,
    /// Converged, but the top `k_hc` marginals are not a clique.
    WrongSet,
}

#[derive(Clone, Debug)]
pub struct AmpOutcome {
    pub clique: Option<Clique>,
    pub failure: Option<AmpFailure>,
    pub converged: bool,
    pub iterations: usize,
    pub marginals: Vec<f64>,
}

impl AmpOutcome {
    pub fn success(&self) -> bool {
        self.clique.is_some()
    }
}

/// Vertices of the `k` largest marginals (lowest id first on ties).
pub fn top_k(marginals: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..marginals.len()).collect();
    order.sort_by(|&a, &b| marginals[b].total_cmp(&marginals[a]).then(a.cmp(&b)));
    order.truncate(k);
    order
}

/// Iterate until the marginals settle (at most `t_max` sweeps), then take
/// the `k_hc` largest marginals and accept them if they form a clique.
pub fn amp_recover<T: Precision, R: Rng + ?Sized>(
    g: &Graph,
    k_hc: usize,
    rng: &mut R,
    t_max: usize,
    eps: f64,
) -> Result<AmpOutcome> {
    let mut state: AmpState<T> = amp_init(g.n(), k_hc, rng)?;
    let mut prev = state.marginals.clone();
    let mut converged = false;
    let mut failure = None;
    while state.t < t_max {
        match amp_step(&mut state, g) {
            Ok(()) => {}
            Err(Error::NumericalBlowup { .. }) => {
                failure = Some(AmpFailure::Blowup);
                break;
            }
            Err(e) => return Err(e),
        }
        if state.t > 1 && amp_converged(&prev, &state.marginals, eps) {
            converged = true;
            break;
        }
        prev.copy_from_slice(&state.marginals);
    }
    let mut clique = None;
    if converged {
        let top = top_k(&state.marginals, k_hc);
        if is_clique(g, &top)? {
            clique = Some(Clique::from_unchecked(top));
        } else {
            failure = Some(AmpFailure::WrongSet);
        }
    } else if failure.is_none() {
        failure = Some(AmpFailure::NonConvergence);
    }
    Ok(AmpOutcome {
        clique,
        failure,
        converged,
        iterations: state.t,
        marginals: std::mem::take(&mut state.marginals),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_gnp;
    use crate::rng::SeededRng;

    #[test]
    fn init_messages_are_negative_and_seeded() {
        let a: AmpState<f32> = amp_init(30, 5, &mut SeededRng::new(1)).unwrap();
        let b: AmpState<f32> = amp_init(30, 5, &mut SeededRng::new(1)).unwrap();
        for i in 0..30 {
            for l in 0..30 {
                if i != l {
                    assert!(a.message(l, i) < 0.0 && a.message(l, i) >= -1.0);
                }
            }
        }
        assert_eq!(a.up, b.up);
        assert_eq!(a.down, b.down);
        assert!(amp_init::<f32, _>(1, 1, &mut SeededRng::new(1)).is_err());
        assert!(amp_init::<f32, _>(10, 11, &mut SeededRng::new(1)).is_err());
    }

    #[test]
    fn convergence_test() {
        assert!(amp_converged(&[1.0, 2.0], &[1.0, 2.0], 0.0));
        assert!(!amp_converged(&[1.0, 2.0], &[1.0, 2.1], 0.05));
        assert!(amp_converged(&[1.0], &[5.0], f64::INFINITY));
    }

    #[test]
    fn complete_graph_marginals_stay_symmetric() {
        let g = Graph::complete(12);
        let mut s: AmpState<f64> = amp_init(12, 12, &mut SeededRng::new(3)).unwrap();
        s.up.fill(-0.5);
        s.down.fill(-0.5);
        for _ in 0..4 {
            amp_step(&mut s, &g).unwrap();
            {
                let m = s.marginals()[0];
                assert!(s.marginals().iter().all(|x| (x - m).abs() < 1e-9 * m.abs().max(1.0)));
            }
        }
        let out = amp_recover::<f64, _>(&g, 12, &mut SeededRng::new(3), 100, 1e-6).unwrap();
        assert!(out.success());
    }

    #[test]
    fn detects_dimension_mismatch() {
        let mut s: AmpState<f32> = amp_init(10, 3, &mut SeededRng::new(0)).unwrap();
        assert!(amp_step(&mut s, &gen_gnp(11, 0.5, 0).unwrap()).is_err());
    }

    /// Messages and marginals straight from the defining sums, with every
    /// message recomputed from scratch and std `ln`/`exp`.
    fn direct_sweep(g: &Graph, k: usize, msg: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
        let n = g.n();
        let sqrt_n = (n as f64).sqrt();
        let a = |l: usize, i: usize| if g.has_edge(l, i) { 1.0 } else { -1.0 };
        let term = |l: usize, i: usize| {
            let x = msg[l][i].exp() / sqrt_n;
            (1.0 + (1.0 + a(l, i)) * x).ln() - (1.0 + x).ln()
        };
        let prior = (k as f64 / sqrt_n).ln();
        let marg: Vec<f64> = (0..n).map(|i| prior + (0..n).filter(|&l| l != i).map(|l| term(l, i)).sum::<f64>()).collect();
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    next[i][j] = prior + (0..n).filter(|&l| l != i && l != j).map(|l| term(l, i)).sum::<f64>();
                }
            }
        }
        (next, marg)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-6 * a.abs().max(b.abs()).max(1e-3)
    }

    #[test]
    fn fast_update_matches_direct_sums() {
        for (seed, n, k) in [(1u64, 40usize, 6usize), (2, 64, 10), (3, 97, 12)] {
            let g0 = gen_gnp(n, 0.5, seed).unwrap();
            let (g, _) = crate::graph::plant_naive(&g0, k, seed).unwrap();
            let mut s: AmpState<f64> = amp_init(n, k, &mut SeededRng::new(seed)).unwrap();
            let mut msg: Vec<Vec<f64>> =
                (0..n).map(|l| (0..n).map(|i| if l == i { 0.0 } else { s.message(l, i) }).collect()).collect();
            for _ in 0..6 {
                amp_step(&mut s, &g).unwrap();
                let (next, marg) = direct_sweep(&g, k, &msg);
                for i in 0..n {
                    assert!(close(s.marginals()[i], marg[i]), "marginal {i}");
                    for l in 0..n {
                        if l != i {
                            assert!(close(s.message(l, i), next[l][i]), "message {l}->{i}");
                        }
                    }
                }
                msg = next;
            }
        }
    }

    #[test]
    fn top_k_orders_by_marginal() {
        assert_eq!(top_k(&[0.1, 3.0, -1.0, 3.0], 3), vec![1, 3, 0]);
    }
}
