//! Network of input-queued switches under longest-queue-first.
//!
//! Queue layout (52 queues):
//!
//! | indices      | owner                 | role                          |
//! |--------------|-----------------------|-------------------------------|
//! | `10m..10m+10`| main switch `m`       | external inputs, type `m`     |
//! | `40 + 2m`    | main switch `m`       | internal input, first pass    |
//! | `41 + 2m`    | main switch `m`       | internal input, second pass   |
//! | `48 + m`     | auxiliary switch `m'` | cross-link buffer             |
//!
//! Main switches are `A, B, C, D` for `m = 0..4`. A type-`m` packet follows
//! `m (external) -> m' -> m+1 (first pass) -> m+2 (second pass) -> exit`,
//! indices mod 4. Every main switch therefore carries load `r` split evenly
//! across its external and two internal input groups, and every auxiliary
//! switch carries `r/3`.
//!
//! Each slot: external arrivals with probability `r/30` per external queue,
//! then every switch picks its longest non-empty queue (lowest index on
//! ties) and forwards one packet. Forwarded packets are visible from the
//! next slot on.

use super::ChainModel;
use crate::error::ModelError;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const N_MAIN: usize = 4;
pub const EXTERNAL_PER_MAIN: usize = 10;
pub const N_EXTERNAL: usize = N_MAIN * EXTERNAL_PER_MAIN;
pub const N_QUEUES: usize = N_EXTERNAL + 2 * N_MAIN + N_MAIN;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchNetwork {}

fn first_pass(m: usize) -> usize {
    N_EXTERNAL + 2 * (m % N_MAIN)
}

fn second_pass(m: usize) -> usize {
    N_EXTERNAL + 2 * (m % N_MAIN) + 1
}

fn aux(m: usize) -> usize {
    N_EXTERNAL + 2 * N_MAIN + m % N_MAIN
}

impl SwitchNetwork {
    /// Queues scheduled by main switch `m`.
    pub fn main_queues(m: usize) -> impl Iterator<Item = usize> {
        (EXTERNAL_PER_MAIN * m..EXTERNAL_PER_MAIN * (m + 1)).chain([first_pass(m), second_pass(m)])
    }

    /// Destination of a packet leaving queue `q`; `None` means it leaves the
    /// network.
    pub fn route(q: usize) -> Option<usize> {
        if q < N_EXTERNAL {
            Some(aux(q / EXTERNAL_PER_MAIN))
        } else if q < N_EXTERNAL + 2 * N_MAIN {
            let m = (q - N_EXTERNAL) / 2;
            if (q - N_EXTERNAL).is_multiple_of(2) {
                Some(second_pass(m + 1))
            } else {
                None
            }
        } else {
            Some(first_pass(q - N_EXTERNAL - 2 * N_MAIN + 1))
        }
    }

    fn longest(x: &[u64], queues: impl Iterator<Item = usize>) -> Option<usize> {
        let mut best: Option<usize> = None;
        for q in queues {
            if x[q] > 0 && best.is_none_or(|b| x[q] > x[b]) {
                best = Some(q);
            }
        }
        best
    }

    /// Service phase: each switch forwards one packet from its longest
    /// queue, all decisions taken on the pre-service state.
    pub fn serve(x: &mut [u64]) {
        let mut moves = [None; 2 * N_MAIN];
        for m in 0..N_MAIN {
            moves[m] = Self::longest(x, Self::main_queues(m));
            moves[N_MAIN + m] = (x[aux(m)] > 0).then_some(aux(m));
        }
        for q in moves.into_iter().flatten() {
            x[q] -= 1;
        }
        for q in moves.into_iter().flatten() {
            if let Some(dest) = Self::route(q) {
                x[dest] += 1;
            }
        }
    }
}

impl ChainModel for SwitchNetwork {
    type State = Vec<u64>;

    fn id(&self) -> &'static str {
        "switch"
    }

    fn param_names(&self) -> &'static [&'static str] {
        &["r"]
    }

    fn param_range(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1.0)]
    }

    fn initial_state(&self) -> Vec<u64> {
        vec![0; N_QUEUES]
    }

    fn step<R: Rng + ?Sized>(
        &self,
        state: &mut Vec<u64>,
        params: &[f64],
        rng: &mut R,
    ) -> Result<(), ModelError> {
        let p = params[0] / 30.0;
        for q in state.iter_mut().take(N_EXTERNAL) {
            if rng.random::<f64>() < p {
                *q += 1;
            }
        }
        Self::serve(state);
        Ok(())
    }

    fn lyapunov(&self, state: &Vec<u64>) -> f64 {
        state.iter().sum::<u64>() as f64
    }

    fn increment_bound(&self) -> f64 {
        N_EXTERNAL as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn dimensions() {
        assert_eq!(N_QUEUES, 52);
        for m in 0..N_MAIN {
            assert_eq!(SwitchNetwork::main_queues(m).count(), 12);
        }
    }

    #[test]
    fn every_route_terminates_after_four_hops() {
        for start in 0..N_EXTERNAL {
            let mut q = start;
            let mut hops = 0;
            while let Some(next) = SwitchNetwork::route(q) {
                q = next;
                hops += 1;
                assert!(hops < 10);
            }
            assert_eq!(hops, 3);
        }
    }

    #[test]
    fn empty_stays_empty_without_arrivals() {
        let m = SwitchNetwork::default();
        let mut rng = substream(1, &[]);
        let mut x = m.initial_state();
        for _ in 0..100 {
            m.step(&mut x, &[0.0], &mut rng).unwrap();
        }
        assert!(x.iter().all(|&v| v == 0));
    }

    #[test]
    fn single_packet_moves_one_hop_per_slot() {
        let mut x = vec![0; N_QUEUES];
        x[3] = 1; // external queue at switch A
        SwitchNetwork::serve(&mut x);
        assert_eq!(x[aux(0)], 1);
        SwitchNetwork::serve(&mut x);
        assert_eq!(x[first_pass(1)], 1);
        SwitchNetwork::serve(&mut x);
        assert_eq!(x[second_pass(2)], 1);
        SwitchNetwork::serve(&mut x);
        assert!(x.iter().all(|&v| v == 0));
    }

    #[test]
    fn increments_bounded_by_external_count() {
        let m = SwitchNetwork::default();
        let mut rng = substream(2, &[]);
        let mut x = m.initial_state();
        for _ in 0..100_000 {
            let before = m.lyapunov(&x);
            m.step(&mut x, &[1.0], &mut rng).unwrap();
            assert!((m.lyapunov(&x) - before).abs() <= 40.0);
        }
    }
}
