//! Simulation and information-flow analysis of reversible classical
//! networks, ensembles of them, and quantum networks in the Heisenberg
//! picture.
//!
//! * [`classical`]: gates, step permutations, trajectories and the locality
//!   cone of a reversible network.
//! * [`ensemble`] and [`enumber`]: multisets of networks, their branches and
//!   the e-number algebra, in exact rational arithmetic.
//! * [`heisenberg`]: qubit descriptors evolved by conjugation, with the
//!   closed-form Toffoli and controlled-not laws; [`oracle`] is an
//!   independent state-vector simulator.
//! * [`analyzer`]: classicality, autonomy, correspondence, information
//!   presence and measurement robustness checks, and branch traces.
//! * [`circuit`], [`orchestrate`] and [`emit`]: the circuit description
//!   language, running documents, and csv/dot/json output.

pub mod analyzer;
pub mod circuit;
pub mod classical;
pub mod config;
pub mod emit;
pub mod ensemble;
pub mod enumber;
pub mod error;
pub mod heisenberg;
pub mod linalg;
pub mod oracle;
pub mod orchestrate;
pub mod random;

pub use error::{Error, Result};
