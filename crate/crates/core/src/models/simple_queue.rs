use super::ChainModel;
use crate::error::ModelError;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Single queue in slotted time: a Bernoulli(p) arrival at the start of
/// each slot, then, if the queue is non-empty, a service with probability
/// `service_prob`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimpleQueue {
    pub service_prob: f64,
}

impl Default for SimpleQueue {
    fn default() -> Self {
        Self { service_prob: 0.5 }
    }
}

impl SimpleQueue {
    /// Arrival first, then service.
    pub fn transition(x: u64, arrival: bool, service: bool) -> u64 {
        let x = x + u64::from(arrival);
        if x > 0 && service {
            x - 1
        } else {
            x
        }
    }
}

impl ChainModel for SimpleQueue {
    type State = u64;

    fn id(&self) -> &'static str {
        "simple-queue"
    }

    fn param_names(&self) -> &'static [&'static str] {
        &["p"]
    }

    fn param_range(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1.0)]
    }

    fn initial_state(&self) -> u64 {
        0
    }

    fn step<R: Rng + ?Sized>(
        &self,
        state: &mut u64,
        params: &[f64],
        rng: &mut R,
    ) -> Result<(), ModelError> {
        let arrival = rng.random::<f64>() < params[0];
        let service = rng.random::<f64>() < self.service_prob;
        *state = Self::transition(*state, arrival, service);
        Ok(())
    }

    fn lyapunov(&self, state: &u64) -> f64 {
        *state as f64
    }

    fn increment_bound(&self) -> f64 {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn empty_queue_without_arrivals_stays_empty() {
        let m = SimpleQueue::default();
        let mut rng = substream(1, &[]);
        let mut x = 0;
        for _ in 0..1000 {
            m.step(&mut x, &[0.0], &mut rng).unwrap();
            assert_eq!(x, 0);
        }
    }

    #[test]
    fn arrival_and_service_cancel() {
        assert_eq!(SimpleQueue::transition(5, true, true), 5);
        assert_eq!(SimpleQueue::transition(5, false, true), 4);
        assert_eq!(SimpleQueue::transition(0, false, true), 0);
        assert_eq!(SimpleQueue::transition(0, true, true), 0);
        assert_eq!(SimpleQueue::transition(0, true, false), 1);
    }

    /// Mean one-step change away from the boundary is p - 0.5.
    #[test]
    fn drift_matches_p_minus_half() {
        let m = SimpleQueue::default();
        for (i, p) in [0.2, 0.3, 0.5, 0.8].into_iter().enumerate() {
            let mut rng = substream(11, &[i as u64]);
            let n = 1_000_000;
            let mut total = 0i64;
            for _ in 0..n {
                let mut x = 10u64;
                m.step(&mut x, &[p], &mut rng).unwrap();
                total += x as i64 - 10;
            }
            let drift = total as f64 / n as f64;
            assert!((drift - (p - 0.5)).abs() < 0.003, "p={p}: drift {drift}");
        }
    }
}
