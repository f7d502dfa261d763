use super::{select_jump, ChainModel};
use crate::error::ModelError;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Two exponential stations in tandem with Poisson arrivals. The parameter
/// point is `(mu_1, mu_2)`, the mean service times; a zero mean means
/// instantaneous service. The chain is the embedded jump chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TandemMm1 {
    pub arrival_rate: f64,
}

impl Default for TandemMm1 {
    fn default() -> Self {
        Self { arrival_rate: 1.0 }
    }
}

fn service_rate(mean: f64) -> f64 {
    if mean == 0.0 {
        f64::INFINITY
    } else {
        1.0 / mean
    }
}

impl TandemMm1 {
    /// Rates of (arrival, station-1 completion, station-2 completion).
    pub fn rates(&self, x: &[u64; 2], mu: &[f64]) -> [f64; 3] {
        [
            self.arrival_rate,
            if x[0] > 0 { service_rate(mu[0]) } else { 0.0 },
            if x[1] > 0 { service_rate(mu[1]) } else { 0.0 },
        ]
    }

    /// Probability of each event at the next jump.
    pub fn jump_probabilities(&self, x: &[u64; 2], mu: &[f64]) -> [f64; 3] {
        let r = self.rates(x, mu);
        let inf = r.iter().filter(|v| v.is_infinite()).count();
        if inf > 0 {
            return r.map(|v| if v.is_infinite() { 1.0 / inf as f64 } else { 0.0 });
        }
        let total: f64 = r.iter().sum();
        if total == 0.0 {
            return [0.0; 3];
        }
        r.map(|v| v / total)
    }

    pub fn apply(x: &mut [u64; 2], event: usize) {
        match event {
            0 => x[0] += 1,
            1 => {
                x[0] -= 1;
                x[1] += 1;
            }
            _ => x[1] -= 1,
        }
    }
}

impl ChainModel for TandemMm1 {
    type State = [u64; 2];

    fn id(&self) -> &'static str {
        "tandem-mm1"
    }

    fn param_names(&self) -> &'static [&'static str] {
        &["mu_1", "mu_2"]
    }

    fn param_range(&self) -> Vec<(f64, f64)> {
        vec![(0.0, f64::MAX), (0.0, f64::MAX)]
    }

    fn initial_state(&self) -> [u64; 2] {
        [0, 0]
    }

    fn step<R: Rng + ?Sized>(
        &self,
        state: &mut [u64; 2],
        params: &[f64],
        rng: &mut R,
    ) -> Result<(), ModelError> {
        let rates = self.rates(state, params);
        if let Some(event) = select_jump(&rates, rng.random()) {
            Self::apply(state, event);
        }
        Ok(())
    }

    fn lyapunov(&self, state: &[u64; 2]) -> f64 {
        (state[0] + state[1]) as f64
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
    fn empty_system_only_arrives() {
        let m = TandemMm1::default();
        let mut rng = substream(3, &[]);
        for _ in 0..100 {
            let mut x = [0, 0];
            m.step(&mut x, &[0.7, 0.3], &mut rng).unwrap();
            assert_eq!(x, [1, 0]);
        }
    }

    #[test]
    fn station_one_completion_probability() {
        let m = TandemMm1::default();
        let p = m.jump_probabilities(&[1, 0], &[1.0, 1.0]);
        assert_eq!(p, [0.5, 0.5, 0.0]);
    }

    #[test]
    fn zero_mean_service_is_immediate() {
        let m = TandemMm1::default();
        let p = m.jump_probabilities(&[2, 0], &[0.0, 1.0]);
        assert_eq!(p, [0.0, 1.0, 0.0]);
    }

    /// Each station is an M/M/1 queue with load 0.5 at mu = (0.5, 0.5). In
    /// the embedded chain the time-average weighting differs, so compare
    /// against an occupancy computed by weighting each embedded state by
    /// its mean holding time.
    #[test]
    fn stationary_means_near_one() {
        let m = TandemMm1::default();
        let mu = [0.5, 0.5];
        let mut rng = substream(17, &[]);
        let mut x = [0u64, 0u64];
        let (mut w_sum, mut q1, mut q2) = (0.0, 0.0, 0.0);
        for _ in 0..2_000_000 {
            let total: f64 = m.rates(&x, &mu).iter().sum();
            let hold = 1.0 / total;
            w_sum += hold;
            q1 += hold * x[0] as f64;
            q2 += hold * x[1] as f64;
            m.step(&mut x, &mu, &mut rng).unwrap();
        }
        let (m1, m2) = (q1 / w_sum, q2 / w_sum);
        assert!((m1 - 1.0).abs() < 0.1, "station 1 mean {m1}");
        assert!((m2 - 1.0).abs() < 0.1, "station 2 mean {m2}");
    }
}
