use super::ChainModel;
use crate::error::ModelError;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// `n_queues` parallel queues sharing one server. Each slot: Bernoulli(p)
/// arrivals at every queue, then each queue is connected independently with
/// probability `connect_prob`, then the longest connected non-empty queue
/// (lowest index on ties) is served with probability `service_prob`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParallelQueues {
    pub n_queues: usize,
    pub connect_prob: f64,
    pub service_prob: f64,
}

impl Default for ParallelQueues {
    fn default() -> Self {
        Self {
            n_queues: 4,
            connect_prob: 0.8,
            service_prob: 0.8,
        }
    }
}

/// Critical arrival rate `(4/5) (1 - (1/5)^N) / N` for the default
/// connectivity and service probabilities.
pub fn parallel_critical_rate(n: usize) -> Result<f64, ModelError> {
    if n < 1 {
        return Err(ModelError::ParameterRange {
            name: "n_queues",
            value: n as f64,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    Ok(0.8 * (1.0 - 0.2f64.powi(n as i32)) / n as f64)
}

impl ParallelQueues {
    /// Longest connected non-empty queue, lowest index among ties.
    pub fn lqf_choice(x: &[u64], connected: &[bool]) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, (&len, &on)) in x.iter().zip(connected).enumerate() {
            if on && len > 0 && best.is_none_or(|b| len > x[b]) {
                best = Some(i);
            }
        }
        best
    }

    pub fn transition(x: &mut [u64], arrivals: &[bool], connected: &[bool], served: bool) {
        for (q, &a) in x.iter_mut().zip(arrivals) {
            *q += u64::from(a);
        }
        if served {
            if let Some(i) = Self::lqf_choice(x, connected) {
                x[i] -= 1;
            }
        }
    }
}

impl ChainModel for ParallelQueues {
    type State = Vec<u64>;

    fn id(&self) -> &'static str {
        "parallel"
    }

    fn param_names(&self) -> &'static [&'static str] {
        &["p"]
    }

    fn param_range(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1.0)]
    }

    fn initial_state(&self) -> Vec<u64> {
        vec![0; self.n_queues]
    }

    fn step<R: Rng + ?Sized>(
        &self,
        state: &mut Vec<u64>,
        params: &[f64],
        rng: &mut R,
    ) -> Result<(), ModelError> {
        let p = params[0];
        for q in state.iter_mut() {
            if rng.random::<f64>() < p {
                *q += 1;
            }
        }
        let mut best: Option<usize> = None;
        for i in 0..state.len() {
            let on = rng.random::<f64>() < self.connect_prob;
            if on && state[i] > 0 && best.is_none_or(|b| state[i] > state[b]) {
                best = Some(i);
            }
        }
        if rng.random::<f64>() < self.service_prob {
            if let Some(i) = best {
                state[i] -= 1;
            }
        }
        Ok(())
    }

    fn lyapunov(&self, state: &Vec<u64>) -> f64 {
        state.iter().sum::<u64>() as f64
    }

    fn increment_bound(&self) -> f64 {
        self.n_queues as f64
    }
}
