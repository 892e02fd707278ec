//! The SM family of greedy clique constructions.
//!
//! [`sm0`] grows a clique one vertex at a time, always taking the frontier
//! vertex with the most neighbours inside the frontier. The other algorithms
//! differ only in where `sm0` is started: from every complete `i`-subgraph
//! ([`smi`]), from the `i`-subsets of one greedy result ([`sm0_then_smi`],
//! [`sm0_iter_smi`]), or from shuffled vertices or edges until a large enough
//! clique turns up ([`early_stop_search`]).
//!
//! Each start draws its tie-breaking stream from a seed derived from the
//! caller's stream and the start's own vertices, so a start's result does not
//! depend on which other starts ran before it or on which worker ran it.

mod cleanup;
mod early;
mod exact;
mod sm;

pub use cleanup::{cleanup, peel_to_clique};
pub use early::{default_k_stop, early_stop_search, early_stop_search_budget, EarlyStopLevel, EarlyStopRun};
pub use exact::exact_max_clique;
pub use sm::{choose_i, sm0, sm0_from, sm0_iter_smi, sm0_then_smi, smi, start_rng};

use crate::graph::Clique;

/// Result of a multi-start search.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub clique: Clique,
    /// Starts actually run.
    pub starts_used: u64,
    /// Size of the start space (vertices, edges, subsets, ...).
    pub total_starts: u64,
    /// `starts_used / total_starts`.
    pub delta: f64,
    pub stopped_early: bool,
    /// Improvement passes of the iterated variant (1 for single-pass searches).
    pub iterations_t: usize,
    /// Clique size after each pass of the iterated variant.
    pub trajectory: Vec<usize>,
}

impl SearchOutcome {
    pub(crate) fn new(clique: Clique, starts_used: u64, total_starts: u64, stopped_early: bool) -> Self {
        let delta = if total_starts == 0 {
            0.0
        } else {
            starts_used as f64 / total_starts as f64
        };
        let size = clique.size();
        Self {
            clique,
            starts_used,
            total_starts,
            delta,
            stopped_early,
            iterations_t: 1,
            trajectory: vec![size],
        }
    }
}
