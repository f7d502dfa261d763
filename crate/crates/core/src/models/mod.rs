//! Model gallery.
//!
//! Every model is a discrete-time chain (continuous-time models expose their
//! embedded jump chain) behind [`ChainModel`]. Models are immutable
//! descriptions: all randomness comes from the generator handed to
//! [`ChainModel::step`].

mod parallel;
mod ran;
mod rybko_stolyar;
mod simple_queue;
mod switch;
mod tandem_mm1;
mod tandem_renewal;

pub use parallel::{parallel_critical_rate, ParallelQueues};
pub use ran::{RandomAccessNetwork, RanState, INTERFERENCE_EDGES};
pub use rybko_stolyar::RybkoStolyar;
pub use simple_queue::SimpleQueue;
pub use switch::SwitchNetwork;
pub use tandem_mm1::TandemMm1;
pub use tandem_renewal::{RenewalState, TandemRenewal};

use crate::error::{ConfigError, ModelError};
use rand::Rng;
use serde::de::DeserializeOwned;
use std::fmt::Debug;

pub trait ChainModel: Send + Sync {
    type State: Clone + Debug + PartialEq + Send + Sync;

    fn id(&self) -> &'static str;

    /// Names of the parameter coordinates, in order. Its length is the
    /// parameter dimension.
    fn param_names(&self) -> &'static [&'static str];

    /// Legal range of each parameter coordinate.
    fn param_range(&self) -> Vec<(f64, f64)>;

    fn param_dim(&self) -> usize {
        self.param_names().len()
    }

    fn initial_state(&self) -> Self::State;

    /// One embedded step under `params`.
    fn step<R: Rng + ?Sized>(
        &self,
        state: &mut Self::State,
        params: &[f64],
        rng: &mut R,
    ) -> Result<(), ModelError>;

    /// Lyapunov value `f(state)`.
    fn lyapunov(&self, state: &Self::State) -> f64;

    /// Bound `phi_f` on `|f(step(x)) - f(x)|`.
    fn increment_bound(&self) -> f64;

    fn check_params(&self, params: &[f64]) -> Result<(), ModelError> {
        let names = self.param_names();
        if params.len() != names.len() {
            return Err(ModelError::ParameterDim {
                expected: names.len(),
                got: params.len(),
            });
        }
        for ((&value, &name), (min, max)) in params.iter().zip(names).zip(self.param_range()) {
            if !(value >= min && value <= max) {
                return Err(ModelError::ParameterRange {
                    name,
                    value,
                    min,
                    max,
                });
            }
        }
        Ok(())
    }
}

/// Run `steps` embedded steps in place.
pub fn advance<M: ChainModel, R: Rng + ?Sized>(
    model: &M,
    state: &mut M::State,
    params: &[f64],
    steps: u64,
    rng: &mut R,
) -> Result<(), ModelError> {
    for _ in 0..steps {
        model.step(state, params, rng)?;
    }
    Ok(())
}

/// Pick the index of the next jump of a continuous-time chain from its
/// transition rates. Infinite rates (zero mean holding times) pre-empt all
/// finite ones and are chosen among uniformly. Returns `None` when no
/// transition is enabled.
pub(crate) fn select_jump(rates: &[f64], u: f64) -> Option<usize> {
    let infinite = rates.iter().filter(|r| r.is_infinite()).count();
    if infinite > 0 {
        let pick = ((u * infinite as f64) as usize).min(infinite - 1);
        return rates
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_infinite())
            .nth(pick)
            .map(|(i, _)| i);
    }
    let total: f64 = rates.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let target = u * total;
    let mut acc = 0.0;
    let mut last = None;
    for (i, &r) in rates.iter().enumerate() {
        if r > 0.0 {
            acc += r;
            last = Some(i);
            if target < acc {
                return Some(i);
            }
        }
    }
    last
}

/// Model identifiers accepted by [`ModelSpec::from_id`].
pub const MODEL_IDS: [&str; 7] = [
    "simple-queue",
    "parallel",
    "tandem-mm1",
    "tandem-renewal",
    "rybko-stolyar",
    "switch",
    "ran",
];

/// A configured gallery model, selected by string id.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    SimpleQueue(SimpleQueue),
    Parallel(ParallelQueues),
    TandemMm1(TandemMm1),
    TandemRenewal(TandemRenewal),
    RybkoStolyar(RybkoStolyar),
    Switch(SwitchNetwork),
    Ran(RandomAccessNetwork),
}

/// Evaluate `$body` with `$m` bound to the concrete model inside a
/// [`ModelSpec`].
#[macro_export]
macro_rules! with_model {
    ($spec:expr, $m:ident => $body:expr) => {
        match $spec {
            $crate::models::ModelSpec::SimpleQueue($m) => $body,
            $crate::models::ModelSpec::Parallel($m) => $body,
            $crate::models::ModelSpec::TandemMm1($m) => $body,
            $crate::models::ModelSpec::TandemRenewal($m) => $body,
            $crate::models::ModelSpec::RybkoStolyar($m) => $body,
            $crate::models::ModelSpec::Switch($m) => $body,
            $crate::models::ModelSpec::Ran($m) => $body,
        }
    };
}

fn overrides<T: DeserializeOwned + Default>(
    id: &str,
    table: Option<&toml::Table>,
) -> Result<T, ConfigError> {
    let Some(table) = table else {
        return Ok(T::default());
    };
    let value = toml::Value::Table(table.clone());
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let key = if path == "." {
            "model_params".to_string()
        } else {
            format!("model_params.{path}")
        };
        ConfigError::new(key, format!("{} (model {id})", e.into_inner()))
    })
}

impl ModelSpec {
    pub fn from_id(id: &str, table: Option<&toml::Table>) -> Result<Self, ConfigError> {
        let spec = match id {
            "simple-queue" => ModelSpec::SimpleQueue(overrides(id, table)?),
            "parallel" => ModelSpec::Parallel(overrides(id, table)?),
            "tandem-mm1" => ModelSpec::TandemMm1(overrides(id, table)?),
            "tandem-renewal" => ModelSpec::TandemRenewal(overrides(id, table)?),
            "rybko-stolyar" => ModelSpec::RybkoStolyar(overrides(id, table)?),
            "switch" => ModelSpec::Switch(overrides(id, table)?),
            "ran" => ModelSpec::Ran(overrides(id, table)?),
            other => {
                return Err(ConfigError::new(
                    "model",
                    format!("unknown model id `{other}`; expected one of {}", MODEL_IDS.join(", ")),
                ))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let prob = |key: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(ConfigError::new(
                    format!("model_params.{key}"),
                    format!("probability {v} outside [0, 1]"),
                ))
            }
        };
        let nonneg = |key: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::new(
                    format!("model_params.{key}"),
                    format!("rate {v} must be finite and nonnegative"),
                ))
            }
        };
        match self {
            ModelSpec::SimpleQueue(m) => prob("service_prob", m.service_prob),
            ModelSpec::Parallel(m) => {
                if m.n_queues == 0 {
                    return Err(ConfigError::new("model_params.n_queues", "must be at least 1"));
                }
                prob("connect_prob", m.connect_prob)?;
                prob("service_prob", m.service_prob)
            }
            ModelSpec::TandemMm1(m) => nonneg("arrival_rate", m.arrival_rate),
            ModelSpec::TandemRenewal(_) | ModelSpec::Switch(_) => Ok(()),
            ModelSpec::RybkoStolyar(m) => {
                nonneg("lambda", m.lambda)?;
                nonneg("mu_r", m.mu_r)
            }
            ModelSpec::Ran(m) => {
                nonneg("nu", m.nu)?;
                nonneg("mu", m.mu)?;
                for (i, &k) in m.kappa.iter().enumerate() {
                    nonneg(&format!("kappa[{i}]"), k)?;
                }
                Ok(())
            }
        }
    }

    pub fn id(&self) -> &'static str {
        with_model!(self, m => m.id())
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        with_model!(self, m => m.param_names())
    }

    pub fn param_range(&self) -> Vec<(f64, f64)> {
        with_model!(self, m => m.param_range())
    }

    pub fn increment_bound(&self) -> f64 {
        with_model!(self, m => m.increment_bound())
    }

    pub fn initial_lyapunov(&self) -> f64 {
        with_model!(self, m => m.lyapunov(&m.initial_state()))
    }

    /// One-line description for the `models` listing.
    pub fn describe(&self) -> &'static str {
        match self {
            ModelSpec::SimpleQueue(_) => "single discrete-time queue, Bernoulli(p) arrivals",
            ModelSpec::Parallel(_) => "N parallel queues, random connectivity, LQF service",
            ModelSpec::TandemMm1(_) => "two M/M/1 stations in tandem (embedded jump chain)",
            ModelSpec::TandemRenewal(_) => "tandem stations with Erlang arrivals and Weibull service",
            ModelSpec::RybkoStolyar(_) => "two-station two-class network with priority to second stage",
            ModelSpec::Switch(_) => "52-queue network of input-queued switches under LQF",
            ModelSpec::Ran(_) => "six-node queue-based random access network",
        }
    }
}
