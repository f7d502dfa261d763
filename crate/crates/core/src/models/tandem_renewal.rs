use super::ChainModel;
use crate::error::ModelError;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

/// Tandem stations with Erlang(2) interarrival times of mean 1 and
/// Weibull(shape 2) service times with scales `(mu_1, mu_2)`.
///
/// The state is not Markov in the queue lengths alone, so it carries the
/// residual time of every running clock. Clocks that are running when the
/// parameter point changes keep their residual times. The chain is indexed
/// by events (arrivals and completions).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TandemRenewal {}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RenewalState {
    pub queues: [u64; 2],
    /// Residual time to the next arrival; drawn lazily on the first step.
    pub next_arrival: Option<f64>,
    /// Residual service time at each busy station.
    pub service: [Option<f64>; 2],
}

/// Erlang(shape 2) interarrival with unit mean: two stages of rate 2.
pub fn erlang_interarrival<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let a: f64 = rng.sample(Exp1);
    let b: f64 = rng.sample(Exp1);
    (a + b) / 2.0
}

/// Weibull(shape 2, scale) service time; mean is `Γ(1.5)·scale`.
pub fn weibull_service<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    let e: f64 = rng.sample(Exp1);
    scale * e.sqrt()
}

impl ChainModel for TandemRenewal {
    type State = RenewalState;

    fn id(&self) -> &'static str {
        "tandem-renewal"
    }

    fn param_names(&self) -> &'static [&'static str] {
        &["mu_1", "mu_2"]
    }

    fn param_range(&self) -> Vec<(f64, f64)> {
        vec![(0.0, f64::MAX), (0.0, f64::MAX)]
    }

    fn initial_state(&self) -> RenewalState {
        RenewalState::default()
    }

    fn step<R: Rng + ?Sized>(
        &self,
        state: &mut RenewalState,
        params: &[f64],
        rng: &mut R,
    ) -> Result<(), ModelError> {
        for (i, &mean) in params.iter().enumerate().take(2) {
            match (state.queues[i] > 0, state.service[i].is_some()) {
                (true, false) => state.service[i] = Some(weibull_service(mean, rng)),
                (false, true) => {
                    return Err(ModelError::CorruptState(format!(
                        "idle station {} carries a service clock",
                        i + 1
                    )))
                }
                _ => {}
            }
        }
        let arrival = *state.next_arrival.get_or_insert_with(|| erlang_interarrival(rng));

        // Earliest clock; arrivals win ties, then station order.
        let mut event = 0;
        let mut dt = arrival;
        for i in 0..2 {
            if let Some(s) = state.service[i] {
                if s < dt {
                    dt = s;
                    event = i + 1;
                }
            }
        }
        state.next_arrival = Some(arrival - dt);
        for s in state.service.iter_mut().flatten() {
            *s -= dt;
        }

        match event {
            0 => {
                state.queues[0] += 1;
                state.next_arrival = Some(erlang_interarrival(rng));
                if state.queues[0] == 1 {
                    state.service[0] = Some(weibull_service(params[0], rng));
                }
            }
            1 => {
                state.queues[0] -= 1;
                state.service[0] =
                    (state.queues[0] > 0).then(|| weibull_service(params[0], rng));
                state.queues[1] += 1;
                if state.queues[1] == 1 {
                    state.service[1] = Some(weibull_service(params[1], rng));
                }
            }
            _ => {
                state.queues[1] -= 1;
                state.service[1] =
                    (state.queues[1] > 0).then(|| weibull_service(params[1], rng));
            }
        }
        Ok(())
    }

    fn lyapunov(&self, state: &RenewalState) -> f64 {
        (state.queues[0] + state.queues[1]) as f64
    }

    fn increment_bound(&self) -> f64 {
        1.0
    }
}
