use super::{select_jump, ChainModel};
use crate::error::ModelError;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Buffer indices of the Rybko–Stolyar state.
pub mod buffer {
    /// Class 1, first stage, at the left station.
    pub const C1_LEFT: usize = 0;
    /// Class 1, second stage, at the right station.
    pub const C1_RIGHT: usize = 1;
    /// Class 2, first stage, at the right station.
    pub const C2_RIGHT: usize = 2;
    /// Class 2, second stage, at the left station.
    pub const C2_LEFT: usize = 3;
}

use buffer::*;

/// Two stations, two classes. Class 1 visits left then right, class 2
/// visits right then left; both arrive as Poisson streams of rate `lambda`.
/// Each station serves second-stage jobs with preemptive priority. Service
/// is exponential with rate `mu_l` at the left station (the parameter
/// point) and `mu_r` at the right station. The chain is the embedded jump
/// chain of per-buffer counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RybkoStolyar {
    pub lambda: f64,
    pub mu_r: f64,
}

impl Default for RybkoStolyar {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            mu_r: 4.0,
        }
    }
}

impl RybkoStolyar {
    /// Buffer served by the left station, if any.
    pub fn left_target(x: &[u64; 4]) -> Option<usize> {
        if x[C2_LEFT] > 0 {
            Some(C2_LEFT)
        } else if x[C1_LEFT] > 0 {
            Some(C1_LEFT)
        } else {
            None
        }
    }

    pub fn right_target(x: &[u64; 4]) -> Option<usize> {
        if x[C1_RIGHT] > 0 {
            Some(C1_RIGHT)
        } else if x[C2_RIGHT] > 0 {
            Some(C2_RIGHT)
        } else {
            None
        }
    }

    /// Rates of (class-1 arrival, class-2 arrival, left completion, right
    /// completion).
    pub fn rates(&self, x: &[u64; 4], mu_l: f64) -> [f64; 4] {
        [
            self.lambda,
            self.lambda,
            if Self::left_target(x).is_some() { mu_l } else { 0.0 },
            if Self::right_target(x).is_some() { self.mu_r } else { 0.0 },
        ]
    }

    fn complete(x: &mut [u64; 4], served: usize) {
        x[served] -= 1;
        match served {
            C1_LEFT => x[C1_RIGHT] += 1,
            C2_RIGHT => x[C2_LEFT] += 1,
            _ => {}
        }
    }
}

impl ChainModel for RybkoStolyar {
    type State = [u64; 4];

    fn id(&self) -> &'static str {
        "rybko-stolyar"
    }

    fn param_names(&self) -> &'static [&'static str] {
        &["mu_l"]
    }

    fn param_range(&self) -> Vec<(f64, f64)> {
        vec![(0.0, f64::MAX)]
    }

    fn initial_state(&self) -> [u64; 4] {
        [0; 4]
    }

    fn step<R: Rng + ?Sized>(
        &self,
        state: &mut [u64; 4],
        params: &[f64],
        rng: &mut R,
    ) -> Result<(), ModelError> {
        let rates = self.rates(state, params[0]);
        match select_jump(&rates, rng.random()) {
            Some(0) => state[C1_LEFT] += 1,
            Some(1) => state[C2_RIGHT] += 1,
            Some(2) => {
                let b = Self::left_target(state).expect("left station busy");
                Self::complete(state, b);
            }
            Some(3) => {
                let b = Self::right_target(state).expect("right station busy");
                Self::complete(state, b);
            }
            _ => {}
        }
        Ok(())
    }

    fn lyapunov(&self, state: &[u64; 4]) -> f64 {
        state.iter().sum::<u64>() as f64
    }

    fn increment_bound(&self) -> f64 {
        1.0
    }
}
