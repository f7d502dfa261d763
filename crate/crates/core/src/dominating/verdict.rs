use std::fmt;
use std::io::{self, Write};

use super::config::{DominatingConfig, WRecursion};
use super::quantile::QuantileEstimator;
use crate::engine::{format_float, run_to_budget, AnnealOutcome, EngineConfig, ParameterSet};
use crate::error::{ConfigError, Result};
use crate::models::ChainModel;
use crate::rng::{derive_seed, purpose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    /// `f(Y_k)` exceeded the quantile of `W_k`.
    Unstable,
    NotRejected,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Unstable => "unstable",
            Decision::NotRejected => "not-rejected",
        })
    }
}

/// Outcome of one test with the point of comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub decision: Decision,
    pub k_compare: u64,
    pub f_value: f64,
    pub quantile: f64,
    pub alpha: f64,
    pub k_star: u64,
    pub seed: u64,
}

impl Verdict {
    pub fn is_unstable(&self) -> bool {
        self.decision == Decision::Unstable
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "decision,k,f_Y,q,alpha,k_star,seed")?;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            self.decision,
            self.k_compare,
            format_float(self.f_value),
            format_float(self.quantile),
            format_float(self.alpha),
            self.k_star,
            self.seed
        )
    }
}

/// Compares a finished run against a quantile estimated at its final `k`.
pub fn decide(outcome: &AnnealOutcome, quantile: f64, alpha: f64, k_star: u64, seed: u64) -> Verdict {
    let decision = if outcome.f_y > quantile {
        Decision::Unstable
    } else {
        Decision::NotRejected
    };
    Verdict {
        decision,
        k_compare: outcome.k,
        f_value: outcome.f_y,
        quantile,
        alpha,
        k_star,
        seed,
    }
}

/// Runs the annealer to budget exhaustion and tests its final value against
/// the `(1−α)`-quantile of `W` started at `f(Y_0)`.
pub fn instability_test<M: ChainModel>(
    model: &M,
    set: &ParameterSet,
    engine_cfg: &EngineConfig,
    dom_cfg: &DominatingConfig,
    n_reps: usize,
) -> Result<Verdict> {
    if engine_cfg.tau != dom_cfg.tau {
        return Err(ConfigError::new(
            "dominating.tau",
            "budget schedule differs from the engine's",
        )
        .into());
    }
    let estimator = QuantileEstimator::new(
        *dom_cfg,
        WRecursion::from(engine_cfg.algorithm),
        n_reps,
        derive_seed(engine_cfg.seed, &[purpose::DOMINATING]),
    )?;
    let outcome = run_to_budget(model, set, engine_cfg)?;
    let q = estimator.quantiles_at(outcome.f_y0, &[outcome.k])[0];
    Ok(decide(&outcome, q, dom_cfg.alpha, engine_cfg.k_star, engine_cfg.seed))
}
