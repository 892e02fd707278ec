//! Maximum-clique heuristics and planted-clique recovery on G(N, p) graphs.
//!
//! The crate is organised by method: [`graph`] holds the bit-packed graph,
//! generators and planting; [`bounds`] the closed-form probabilistic
//! baselines; [`greedy`] the SM family, early-stopped search and cleanup;
//! [`spectral`] and [`amp`] the two recovery methods; [`harness`] the
//! seeded experiment runners that produce CSV tables.

pub mod amp;
pub mod bounds;
pub mod error;
pub mod graph;
pub mod greedy;
pub mod harness;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Clique, Graph, PlantMethod, PlantSpec, VertexSet};
pub use greedy::SearchOutcome;
pub use rng::SeededRng;
