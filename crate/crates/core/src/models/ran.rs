use super::{select_jump, ChainModel};
use crate::error::ModelError;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const N_NODES: usize = 6;

/// Interference graph on nodes `1..=6` (zero-based here): two diamonds
/// `{0,2,1,5}` sharing the chord `2-5`, with the tail `2-3-4-5`.
pub const INTERFERENCE_EDGES: [(usize, usize); 7] =
    [(0, 2), (0, 5), (1, 2), (1, 5), (2, 3), (3, 4), (4, 5)];

/// Queue-based random access network. Node `i` receives Poisson arrivals at
/// rate `rho * kappa[i] * mu`, transmits packets in `Exp(mu)` time, and
/// attempts to grab the medium after `Exp(nu)` back-offs when it has
/// packets and no neighbour is transmitting. After a transmission that
/// leaves `x` packets behind it releases the medium with probability
/// `(1 + x)^-2`, so the last packet always releases it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RandomAccessNetwork {
    pub nu: f64,
    pub mu: f64,
    pub kappa: [f64; N_NODES],
}

impl Default for RandomAccessNetwork {
    fn default() -> Self {
        Self {
            nu: 1.0,
            mu: 1.0,
            kappa: [0.4, 0.4, 0.4, 0.4, 0.2, 0.2],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RanState {
    pub queues: [u64; N_NODES],
    pub active: [bool; N_NODES],
}

/// Release probability after a completion at a node holding `x >= 1`
/// packets.
pub fn release_probability(x: u64) -> f64 {
    let remaining = (x - 1) as f64;
    (1.0 + remaining).powi(-2)
}

fn neighbours_silent(active: &[bool; N_NODES], i: usize) -> bool {
    INTERFERENCE_EDGES.iter().all(|&(a, b)| {
        let other = if a == i {
            b
        } else if b == i {
            a
        } else {
            return true;
        };
        !active[other]
    })
}

impl RandomAccessNetwork {
    pub fn check_state(state: &RanState) -> Result<(), ModelError> {
        for &(a, b) in &INTERFERENCE_EDGES {
            if state.active[a] && state.active[b] {
                return Err(ModelError::CorruptState(format!(
                    "interfering nodes {} and {} both active",
                    a + 1,
                    b + 1
                )));
            }
        }
        for i in 0..N_NODES {
            if state.active[i] && state.queues[i] == 0 {
                return Err(ModelError::CorruptState(format!(
                    "node {} active with an empty queue",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Transition rates in blocks of six: arrivals, activations,
    /// completions that keep the medium, completions that release it.
    pub fn rates(&self, state: &RanState, rho: f64) -> [f64; 4 * N_NODES] {
        let mut r = [0.0; 4 * N_NODES];
        for i in 0..N_NODES {
            r[i] = rho * self.kappa[i] * self.mu;
            let x = state.queues[i];
            if x > 0 && !state.active[i] && neighbours_silent(&state.active, i) {
                r[N_NODES + i] = self.nu;
            }
            if x >= 1 && state.active[i] {
                let psi = release_probability(x);
                r[2 * N_NODES + i] = self.mu * (1.0 - psi);
                r[3 * N_NODES + i] = self.mu * psi;
            }
        }
        r
    }

    pub fn apply(state: &mut RanState, event: usize) {
        let i = event % N_NODES;
        match event / N_NODES {
            0 => state.queues[i] += 1,
            1 => state.active[i] = true,
            2 => state.queues[i] -= 1,
            _ => {
                state.queues[i] -= 1;
                state.active[i] = false;
            }
        }
    }
}

impl ChainModel for RandomAccessNetwork {
    type State = RanState;

    fn id(&self) -> &'static str {
        "ran"
    }

    fn param_names(&self) -> &'static [&'static str] {
        &["rho"]
    }

    fn param_range(&self) -> Vec<(f64, f64)> {
        vec![(0.0, f64::MAX)]
    }

    fn initial_state(&self) -> RanState {
        RanState::default()
    }

    fn step<R: Rng + ?Sized>(
        &self,
        state: &mut RanState,
        params: &[f64],
        rng: &mut R,
    ) -> Result<(), ModelError> {
        Self::check_state(state)?;
        let rates = self.rates(state, params[0]);
        if let Some(event) = select_jump(&rates, rng.random()) {
            Self::apply(state, event);
        }
        Ok(())
    }

    fn lyapunov(&self, state: &RanState) -> f64 {
        state.queues.iter().sum::<u64>() as f64
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
    fn empty_network_only_arrivals() {
        let m = RandomAccessNetwork::default();
        let r = m.rates(&RanState::default(), 0.9);
        assert!(r[..N_NODES].iter().all(|&v| v > 0.0));
        assert!(r[N_NODES..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn last_packet_releases_medium() {
        assert_eq!(release_probability(1), 1.0);
        assert_eq!(release_probability(2), 0.25);
        let m = RandomAccessNetwork::default();
        let mut s = RanState::default();
        s.queues[3] = 1;
        s.active[3] = true;
        let r = m.rates(&s, 0.5);
        assert_eq!(r[2 * N_NODES + 3], 0.0);
        assert_eq!(r[3 * N_NODES + 3], 1.0);
    }

    #[test]
    fn interference_violation_is_rejected() {
        let m = RandomAccessNetwork::default();
        let mut s = RanState {
            queues: [1, 0, 1, 0, 0, 0],
            active: [true, false, true, false, false, false],
        };
        let mut rng = substream(1, &[]);
        assert!(matches!(
            m.step(&mut s, &[0.5], &mut rng),
            Err(ModelError::CorruptState(_))
        ));
    }

    #[test]
    fn adjacent_nodes_never_active_together() {
        let m = RandomAccessNetwork::default();
        let mut rng = substream(2, &[]);
        let mut s = m.initial_state();
        for _ in 0..200_000 {
            m.step(&mut s, &[0.95], &mut rng).unwrap();
            RandomAccessNetwork::check_state(&s).unwrap();
        }
    }
}
