//! Config-driven batches of instability tests.
//!
//! An experiment file names a model, a parameter set, engine and dominating
//! settings, and optionally a sweep over one of them. Each sweep point is
//! tested `replications` times with independent seeds; the quantiles of
//! `W` are computed once per distinct dominating setup and shared.

mod config;
mod output;
mod runner;

pub use config::{
    DominatingSection, EngineSection, ExperimentConfig, Scenario, SetKind, SetSection, SweepParameter,
    SweepSection, DEFAULT_ALPHA, DEFAULT_ETA, DEFAULT_N_REPS, DEFAULT_REPLICATIONS,
};
pub use output::{emit_outputs, write_summary, SUMMARY_HEADER};
pub use runner::{
    quantile_seed, replication_seed, run_replications, summarise, ExperimentReport, ReplicationResult,
    RunOptions, SummaryRecord, Timing,
};
