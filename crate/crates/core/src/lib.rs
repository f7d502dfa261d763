//! Simulation-based instability testing for parameterized families of
//! Markov chains.
//!
//! The crate is organized around four pieces:
//!
//! * [`engine`]: the annealing search over a parameter set (global and
//!   local variants) driven by a state-dependent simulation budget.
//! * [`dominating`]: the level-dependent increment bound `Z(w)`, the
//!   dominating chain `W`, Monte Carlo quantiles of `W_k`, and the
//!   resulting hypothesis test.
//! * [`models`]: the model gallery behind the [`models::ChainModel`] trait.
//! * [`experiment`]: configuration parsing, seeded replication sweeps and
//!   CSV output used by the command-line front end.

pub mod dominating;
pub mod engine;
mod error;
pub mod experiment;
pub mod models;
pub mod rng;

pub use error::{ConfigError, Error, ModelError, Result};
