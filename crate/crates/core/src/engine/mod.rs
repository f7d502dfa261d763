//! Annealing search over a parameter set.
//!
//! The annealer is a bivariate chain `(Y_k, Λ_k)`: at each iteration it
//! proposes a parameter point, simulates the model from the current state
//! for `τ(Y_{k-1})` embedded steps, and keeps or rejects the outcome with a
//! Metropolis rule on the Lyapunov value. `T_k` accumulates the budget.

mod annealer;
mod metropolis;
mod params;
mod schedule;
mod trajectory;

pub use annealer::{
    global_step, local_step, run_annealer, run_to_budget, Algorithm, AnnealOutcome, Annealer,
    AnnealerState, EngineConfig, EngineStreams, StepOutcome,
};
pub use metropolis::{acceptance_probability, metropolis_accept};
pub use params::{BoxSet, GridSet, ParameterSet};
pub use schedule::{tau_of, TauSchedule};
pub use trajectory::{drift_ratio, format_float, Trajectory, TrajectoryRecord, TrajectoryWriter};
