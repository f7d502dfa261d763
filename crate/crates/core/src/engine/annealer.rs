use super::metropolis::metropolis_accept;
use super::params::ParameterSet;
use super::schedule::TauSchedule;
use super::trajectory::Trajectory;
use crate::error::{ConfigError, Error, Result};
use crate::models::{advance, ChainModel};
use crate::rng::{purpose, substream, Substream};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Propose uniformly from the whole set.
    Global,
    /// Propose from the grid neighbourhood of the current point and race the
    /// proposal against the incumbent parameter.
    Local,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Global => "global",
            Algorithm::Local => "local",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub eta: f64,
    pub tau: TauSchedule,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub k_star: u64,
}

impl EngineConfig {
    pub fn new(
        eta: f64,
        tau: TauSchedule,
        algorithm: Algorithm,
        seed: u64,
        k_star: u64,
    ) -> Result<Self, ConfigError> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(ConfigError::new("engine.eta", format!("must be positive, got {eta}")));
        }
        if k_star < 1 {
            return Err(ConfigError::new("engine.k_star", "must be at least 1"));
        }
        Ok(Self {
            eta,
            tau,
            algorithm,
            seed,
            k_star,
        })
    }
}

/// `(Y_k, Λ_k)` together with the iteration count and `T_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealerState<S> {
    pub y: S,
    /// Cached `f(Y_k)`.
    pub f_y: f64,
    pub lambda: Vec<f64>,
    pub k: u64,
    pub t: u64,
}

/// Independent generators used by one annealer run: proposals and
/// Metropolis draws, the chain simulated under the incumbent parameter
/// (local search only), and the chain simulated under the proposal.
#[derive(Debug, Clone)]
pub struct EngineStreams {
    pub proposal: Substream,
    pub incumbent: Substream,
    pub candidate: Substream,
}

impl EngineStreams {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            proposal: substream(seed, &[purpose::PROPOSAL]),
            incumbent: substream(seed, &[purpose::CHAIN_INCUMBENT]),
            candidate: substream(seed, &[purpose::CHAIN_CANDIDATE]),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepOutcome<S> {
    pub state: AnnealerState<S>,
    pub accepted: bool,
    /// Embedded chain steps actually simulated (twice `τ` for local search).
    pub simulated_steps: u64,
}

/// One iteration of the global search.
pub fn global_step<M: ChainModel>(
    state: AnnealerState<M::State>,
    model: &M,
    set: &ParameterSet,
    config: &EngineConfig,
    streams: &mut EngineStreams,
) -> Result<StepOutcome<M::State>> {
    let tau = config.tau.steps(state.f_y);
    let gamma = set.sample(&mut streams.proposal);
    let mut candidate = state.y.clone();
    advance(model, &mut candidate, &gamma, tau, &mut streams.candidate)?;
    let f_candidate = model.lyapunov(&candidate);
    let u: f64 = streams.proposal.random();
    let accepted = metropolis_accept(f_candidate, state.f_y, config.eta, u);
    let next = if accepted {
        AnnealerState {
            y: candidate,
            f_y: f_candidate,
            lambda: gamma,
            k: state.k + 1,
            t: state.t + tau,
        }
    } else {
        AnnealerState {
            k: state.k + 1,
            t: state.t + tau,
            ..state
        }
    };
    Ok(StepOutcome {
        state: next,
        accepted,
        simulated_steps: tau,
    })
}

/// One iteration of the local search. Requires a grid set.
pub fn local_step<M: ChainModel>(
    state: AnnealerState<M::State>,
    model: &M,
    set: &ParameterSet,
    config: &EngineConfig,
    streams: &mut EngineStreams,
) -> Result<StepOutcome<M::State>> {
    let grid = set.as_grid().ok_or_else(|| {
        ConfigError::new("engine.algorithm", "local search requires a grid parameter set")
    })?;
    let index = grid.index_of(&state.lambda).ok_or_else(|| {
        ConfigError::new("set", format!("current point {:?} is not on the grid", state.lambda))
    })?;
    let tau = config.tau.steps(state.f_y);
    let gamma_index = grid.sample_neighbour(&index, &mut streams.proposal);
    let gamma = grid.point(&gamma_index);

    let mut incumbent = state.y.clone();
    advance(model, &mut incumbent, &state.lambda, tau, &mut streams.incumbent)?;
    let mut candidate = state.y;
    advance(model, &mut candidate, &gamma, tau, &mut streams.candidate)?;

    let f_incumbent = model.lyapunov(&incumbent);
    let f_candidate = model.lyapunov(&candidate);
    let u: f64 = streams.proposal.random();
    let accepted = metropolis_accept(f_candidate, f_incumbent, config.eta, u);
    let (y, f_y, lambda) = if accepted {
        (candidate, f_candidate, gamma)
    } else {
        (incumbent, f_incumbent, state.lambda)
    };
    Ok(StepOutcome {
        state: AnnealerState {
            y,
            f_y,
            lambda,
            k: state.k + 1,
            t: state.t + tau,
        },
        accepted,
        simulated_steps: 2 * tau,
    })
}

/// Terminal summary of a run, without the path.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealOutcome {
    pub k: u64,
    pub t: u64,
    pub f_y: f64,
    /// `f(Y_0)`, the starting level of the dominating chain.
    pub f_y0: f64,
    pub lambda: Vec<f64>,
    pub accepted_moves: u64,
    pub simulated_steps: u64,
}

impl AnnealOutcome {
    /// `f(Y_k) / T_k`, zero before the first iteration.
    pub fn drift_ratio(&self) -> f64 {
        if self.t == 0 {
            0.0
        } else {
            self.f_y / self.t as f64
        }
    }
}

/// Stateful driver for a single annealer run.
pub struct Annealer<'a, M: ChainModel> {
    model: &'a M,
    set: &'a ParameterSet,
    config: &'a EngineConfig,
    streams: EngineStreams,
    state: Option<AnnealerState<M::State>>,
    f_y0: f64,
    accepted_moves: u64,
    simulated_steps: u64,
}

impl<'a, M: ChainModel> Annealer<'a, M> {
    /// Starts from `initial_y` (default: the model's empty state) and
    /// `initial_lambda` (default: a uniform draw from the set).
    pub fn new(
        model: &'a M,
        set: &'a ParameterSet,
        config: &'a EngineConfig,
        initial_y: Option<M::State>,
        initial_lambda: Option<Vec<f64>>,
    ) -> Result<Self> {
        check_set(model, set)?;
        if config.algorithm == Algorithm::Local && set.as_grid().is_none() {
            return Err(ConfigError::new(
                "set.kind",
                "local search requires kind = \"grid\"",
            )
            .into());
        }
        let mut streams = EngineStreams::from_seed(config.seed);
        let lambda = match initial_lambda {
            Some(l) if set.contains(&l) => l,
            Some(l) => {
                return Err(ConfigError::new(
                    "initial_lambda",
                    format!("{l:?} is not in the parameter set"),
                )
                .into())
            }
            None => set.sample(&mut streams.proposal),
        };
        let y = initial_y.unwrap_or_else(|| model.initial_state());
        let f_y = model.lyapunov(&y);
        Ok(Self {
            model,
            set,
            config,
            streams,
            state: Some(AnnealerState {
                y,
                f_y,
                lambda,
                k: 0,
                t: 0,
            }),
            f_y0: f_y,
            accepted_moves: 0,
            simulated_steps: 0,
        })
    }

    pub fn state(&self) -> &AnnealerState<M::State> {
        self.state.as_ref().expect("annealer state present")
    }

    /// True once the next iteration would push `T_k` past `k*`.
    pub fn budget_exhausted(&self) -> bool {
        let s = self.state();
        s.t + self.config.tau.steps(s.f_y) > self.config.k_star
    }

    /// Runs one iteration and reports whether the proposal was accepted.
    pub fn step(&mut self) -> Result<bool> {
        let state = self.state.take().expect("annealer state present");
        let outcome = match self.config.algorithm {
            Algorithm::Global => global_step(state, self.model, self.set, self.config, &mut self.streams),
            Algorithm::Local => local_step(state, self.model, self.set, self.config, &mut self.streams),
        }?;
        self.state = Some(outcome.state);
        self.accepted_moves += u64::from(outcome.accepted);
        self.simulated_steps += outcome.simulated_steps;
        Ok(outcome.accepted)
    }

    /// Iterates until the budget is exhausted, calling `observe` after every
    /// iteration.
    pub fn run(&mut self, mut observe: impl FnMut(&AnnealerState<M::State>, bool)) -> Result<()> {
        while !self.budget_exhausted() {
            let accepted = self.step()?;
            observe(self.state(), accepted);
        }
        Ok(())
    }

    pub fn outcome(&self) -> AnnealOutcome {
        let s = self.state();
        AnnealOutcome {
            k: s.k,
            t: s.t,
            f_y: s.f_y,
            f_y0: self.f_y0,
            lambda: s.lambda.clone(),
            accepted_moves: self.accepted_moves,
            simulated_steps: self.simulated_steps,
        }
    }
}

fn check_set<M: ChainModel>(model: &M, set: &ParameterSet) -> Result<()> {
    if set.dim() != model.param_dim() {
        return Err(ConfigError::new(
            "set.lower",
            format!(
                "model {} has {} parameter(s) ({}), set has {}",
                model.id(),
                model.param_dim(),
                model.param_names().join(", "),
                set.dim()
            ),
        )
        .into());
    }
    let b = set.bounds();
    for (bound, key) in [(b.lower(), "set.lower"), (b.upper(), "set.upper")] {
        model
            .check_params(bound)
            .map_err(|e| Error::Config(ConfigError::new(key, e.to_string())))?;
    }
    Ok(())
}

/// Full recorded run, starting with the `k = 0` row.
pub fn run_annealer<M: ChainModel>(
    model: &M,
    set: &ParameterSet,
    config: &EngineConfig,
    initial_y: Option<M::State>,
    initial_lambda: Option<Vec<f64>>,
) -> Result<Trajectory> {
    let mut annealer = Annealer::new(model, set, config, initial_y, initial_lambda)?;
    let mut trajectory = Trajectory::new(set.dim());
    {
        let s = annealer.state();
        trajectory.push(s.k, s.t, s.f_y, &s.lambda, false);
    }
    annealer.run(|s, accepted| trajectory.push(s.k, s.t, s.f_y, &s.lambda, accepted))?;
    trajectory.simulated_steps = annealer.simulated_steps;
    Ok(trajectory)
}

/// Run to budget exhaustion, keeping only the terminal state.
pub fn run_to_budget<M: ChainModel>(
    model: &M,
    set: &ParameterSet,
    config: &EngineConfig,
) -> Result<AnnealOutcome> {
    let mut annealer = Annealer::new(model, set, config, None, None)?;
    annealer.run(|_, _| {})?;
    Ok(annealer.outcome())
}
