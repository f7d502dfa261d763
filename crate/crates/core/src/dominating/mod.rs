//! Dominating process for the instability test.
//!
//! Under the stability hypothesis the increments of `f(Y_k)` are bounded
//! in distribution by a level-dependent variable `Z(w)` whose survival
//! function is a capped sum of two Gaussian-type tails. The chain
//! `W_k = W_{k-1} + Z(W_{k-1})` then dominates `f(Y_k)`, and a large
//! `f(Y_k)` relative to a Monte Carlo quantile of `W_k` is evidence of
//! instability.

mod config;
mod process;
mod quantile;
mod sampler;
mod tail;
mod verdict;

pub use config::{Diagnostics, DominatingConfig, WRecursion};
pub use process::{sample_w_at, simulate_w, WPath};
pub use quantile::{estimate_quantiles, QuantileEstimator, QuantileTable, MIN_REPLICATIONS};
pub use sampler::{sample_z, z_max, TAIL_TRUNCATION, Z_TOLERANCE};
pub use tail::{z_coefficients, z_tail, z_tail_monotone, TailProfile, ZCoefficients};
pub use verdict::{decide, instability_test, Decision, Verdict};
