//! Closed-form baselines for cliques in G(n, p).
//!
//! All combinatorial quantities are evaluated in natural-log space. Binomial
//! coefficients with a small lower index are summed term by term, which keeps
//! about 15 significant digits even for `n` around 10^9; larger ones go
//! through `lgamma`.

use crate::error::{Error, Result};

const DIRECT_SUM_LIMIT: u64 = 4096;

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if k <= DIRECT_SUM_LIMIT {
        let base = (n - k) as f64;
        (1..=k).map(|j| ((base + j as f64) / j as f64).ln()).sum()
    } else {
        libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
    }
}

#[inline]
fn pairs(k: u64) -> f64 {
    k as f64 * (k as f64 - 1.0) / 2.0
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("edge probability {p} is outside (0, 1)")))
    }
}

/// `ln E(k)`, the log of the expected number of `k`-cliques, `C(n,k) p^C(k,2)`.
pub fn log_expected_cliques(n: u64, k: u64, p: f64) -> Result<f64> {
    check_p(p)?;
    if k > n {
        return Err(Error::invalid(format!("clique size {k} exceeds graph order {n}")));
    }
    Ok(ln_choose(n, k) + pairs(k) * p.ln())
}

/// Largest `k` with `E(k) >= 1`.
///
/// `ln E(k+1) - ln E(k) = ln((n-k)/(k+1)) + k ln p` decreases in `k`, so the
/// set `{k : E(k) >= 1}` is an interval starting at 0 and a forward scan
/// stops at its end.
pub fn k_max(n: u64, p: f64) -> Result<u64> {
    check_p(p)?;
    if n < 1 {
        return Err(Error::invalid("graph order must be at least 1"));
    }
    let mut k = 1;
    while k < n && log_expected_cliques(n, k + 1, p)? >= 0.0 {
        k += 1;
    }
    Ok(k)
}

/// `R(n, p) = 2 L(n) - 2 L(L(n)) + 2 L(e/2) + 1` with `L = log base 1/p`;
/// the continuous solution of `E(R) = 1`.
pub fn r_continuous(n: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    let log_b = |x: f64| x.ln() / (1.0 / p).ln();
    let inner = log_b(n);
    if !(inner > 0.0) {
        return Err(Error::invalid(format!("log_(1/p) n = {inner} must be positive")));
    }
    Ok(2.0 * inner - 2.0 * log_b(inner) + 2.0 * log_b(std::f64::consts::E / 2.0) + 1.0)
}

/// Bounds on `Prob(K_max >= k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepBounds {
    pub k: u64,
    pub lower: f64,
    pub upper: f64,
    /// The second-moment expression fell outside `[0, 1]` and was clamped.
    pub lower_clamped: bool,
    /// The first-moment bound `E(k)` exceeded 1 and was clamped.
    pub upper_clamped: bool,
}

/// First-moment upper bound and second-moment lower bound on `Prob(K_max >= k)`.
///
/// The lower bound is `E[X]^2 / E[X^2]` for the number `X` of `k`-cliques,
/// written as the reciprocal of a sum over the overlap `j` of two cliques.
pub fn prob_kmax_bounds(n: u64, k: u64, p: f64) -> Result<StepBounds> {
    check_p(p)?;
    if k > n {
        return Err(Error::invalid(format!("clique size {k} exceeds graph order {n}")));
    }
    let ln_p = p.ln();
    let ln_upper = ln_choose(n, k) + pairs(k) * ln_p;
    let upper_clamped = ln_upper > 0.0;
    let upper = ln_upper.min(0.0).exp();

    let ln_total = ln_choose(n, k);
    let j_lo = (2 * k).saturating_sub(n);
    let mut terms: Vec<f64> = (j_lo..=k)
        .map(|j| ln_choose(n - k, k - j) + ln_choose(k, j) - ln_total - pairs(j) * ln_p)
        .filter(|t| t.is_finite())
        .collect();
    let ln_sum = log_sum_exp_desc(&mut terms);
    let lower_raw = (-ln_sum).exp();
    let lower_clamped = !(0.0..=1.0).contains(&lower_raw);
    let lower = lower_raw.clamp(0.0, 1.0).min(upper);
    Ok(StepBounds {
        k,
        lower,
        upper,
        lower_clamped,
        upper_clamped,
    })
}

/// Bounds on `Prob(K_max == k)` derived from the bounds at `k` and `k + 1`.
pub fn exact_size_bounds(n: u64, k: u64, p: f64) -> Result<(f64, f64)> {
    let at = prob_kmax_bounds(n, k, p)?;
    let (next_lower, next_upper) = if k < n {
        let b = prob_kmax_bounds(n, k + 1, p)?;
        (b.lower, b.upper)
    } else {
        (0.0, 0.0)
    };
    Ok(((at.lower - next_upper).max(0.0), (at.upper - next_lower).clamp(0.0, 1.0)))
}

/// `ln sum exp(t)`, summing in descending order and dropping terms more than
/// 745 below the largest.
fn log_sum_exp_desc(terms: &mut [f64]) -> f64 {
    terms.sort_unstable_by(|a, b| b.total_cmp(a));
    let Some(&max) = terms.first() else {
        return f64::NEG_INFINITY;
    };
    let mut acc = 0.0;
    for &t in terms.iter() {
        let d = t - max;
        if d < -745.0 {
            break;
        }
        acc += d.exp();
    }
    max + acc.ln()
}

/// Which end of `{K : C(n-i, K-i) p^(C(K,2)-C(i,2)) >= 1}` to report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StaircaseReading {
    /// Largest such `K`; coincides with [`k_max`] at `i = 0`.
    #[default]
    Largest,
    /// Smallest such `K`, which is always `i` because the expectation is
    /// exactly 1 there.
    Smallest,
}

/// Expected largest clique reachable when growing a fixed complete `i`-subgraph.
pub fn conditioned_staircase(n: u64, i: u64, p: f64, reading: StaircaseReading) -> Result<u64> {
    check_p(p)?;
    if i > n {
        return Err(Error::invalid(format!("seed size {i} exceeds graph order {n}")));
    }
    let ln_p = p.ln();
    let f = |k: u64| ln_choose(n - i, k - i) + (pairs(k) - pairs(i)) * ln_p;
    match reading {
        StaircaseReading::Smallest => Ok(i),
        StaircaseReading::Largest => {
            // f(i) = 0 and f is concave in K, so the admissible set is [i, K*].
            let mut k = i;
            while k < n && f(k + 1) >= 0.0 {
                k += 1;
            }
            Ok(k)
        }
    }
}

/// Probability that none of the `n - k` outside vertices extends a given
/// `k`-clique at `p = 1/2`: `(1 - 2^-k)^(n - k)`.
pub fn stop_probability(n: u64, k: u64) -> f64 {
    assert!(k <= n, "clique size {k} exceeds graph order {n}");
    stop_probability_real(n as f64, k as f64)
}

/// [`stop_probability`] for real-valued arguments (used for collapsed curves).
pub fn stop_probability_real(n: f64, k: f64) -> f64 {
    let outside = n - k;
    if outside <= 0.0 {
        return 1.0;
    }
    (outside * (-(-k).exp2()).ln_1p()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_hand_values() {
        let v = log_expected_cliques(16, 4, 0.5).unwrap();
        assert!((v - (1820.0f64 / 64.0).ln()).abs() < 1e-13);
        for n in [1u64, 7, 1000, 1_000_000_000] {
            assert!((log_expected_cliques(n, 1, 0.3).unwrap() - (n as f64).ln()).abs() < 1e-12);
        }
        assert_eq!(log_expected_cliques(5, 0, 0.5).unwrap(), 0.0);
        assert!(log_expected_cliques(5, 6, 0.5).is_err());
        assert!(log_expected_cliques(5, 2, 1.5).is_err());
    }

    #[test]
    fn ln_choose_branches_agree() {
        // Around the switch between summation and lgamma.
        let n = 20_000u64;
        let k = DIRECT_SUM_LIMIT;
        let direct = ln_choose(n, k);
        let lg = libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0);
        assert!((direct - lg).abs() / direct < 1e-12);
        assert_eq!(ln_choose(3, 5), f64::NEG_INFINITY);
    }

    #[test]
    fn k_max_reference_points() {
        assert_eq!(k_max(1024, 0.5).unwrap(), 15);
        assert_eq!(k_max(1238, 0.5).unwrap(), 15);
        assert_eq!(k_max(1239, 0.5).unwrap(), 16);
    }

    #[test]
    fn r_reference_value() {
        let r = r_continuous(1024.0, 0.5).unwrap();
        assert!((r - 15.2415).abs() < 5e-5, "{r}");
        assert!(r_continuous(1.0, 0.5).is_err());
    }

    #[test]
    fn r_change_of_base() {
        let n: f64 = 1e6;
        let l4 = |x: f64| x.ln() / 4f64.ln();
        let expect = 2.0 * l4(n) - 2.0 * l4(l4(n)) + 2.0 * l4(std::f64::consts::E / 2.0) + 1.0;
        assert!((r_continuous(n, 0.25).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn bounds_trivial_cases() {
        let b = prob_kmax_bounds(50, 1, 0.5).unwrap();
        assert_eq!(b.upper, 1.0);
        assert!(b.upper_clamped);
        let b0 = prob_kmax_bounds(50, 0, 0.5).unwrap();
        assert!((b0.lower - 1.0).abs() < 1e-12 && b0.upper == 1.0);
    }

    #[test]
    fn bounds_ordered_and_in_range() {
        for n in [10u64, 40, 100, 1000, 100_000] {
            for k in 0..=n.min(40) {
                let b = prob_kmax_bounds(n, k, 0.5).unwrap();
                assert!(0.0 <= b.lower && b.lower <= b.upper && b.upper <= 1.0, "{n} {k} {b:?}");
            }
        }
    }

    #[test]
    fn staircase_readings() {
        for n in [10u64, 100, 5000] {
            assert_eq!(
                conditioned_staircase(n, 0, 0.5, StaircaseReading::Largest).unwrap(),
                k_max(n, 0.5).unwrap()
            );
            assert_eq!(conditioned_staircase(n, 3, 0.5, StaircaseReading::Smallest).unwrap(), 3);
        }
        // Larger seeds sit on lower staircases.
        let ks: Vec<u64> = (2..=7)
            .map(|i| conditioned_staircase(50_000, i, 0.5, StaircaseReading::Largest).unwrap())
            .collect();
        assert!(ks.windows(2).all(|w| w[0] >= w[1]), "{ks:?}");
        assert!(ks[0] < k_max(50_000, 0.5).unwrap() + 1);
    }

    #[test]
    fn stop_probability_values() {
        assert_eq!(stop_probability(10, 0), 0.0);
        assert_eq!(stop_probability(10, 10), 1.0);
        assert!((stop_probability(1024, 10) - 0.3713).abs() < 5e-5);
    }
}
