use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::io::{self, Write};

use ordered_float::OrderedFloat;

use super::config::{DominatingConfig, WRecursion};
use super::process::JumpChain;
use crate::engine::format_float;
use crate::error::{Error, Result};
use crate::rng::{purpose, substream, Substream};

/// Fewest `W` replications accepted for a quantile estimate.
pub const MIN_REPLICATIONS: usize = 100;

/// `q_0, …, q_K` for one start level.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileTable {
    pub alpha: f64,
    pub values: Vec<f64>,
}

impl QuantileTable {
    pub fn k_max(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,q_alpha")?;
        for (k, q) in self.values.iter().enumerate() {
            writeln!(out, "{k},{}", format_float(*q))?;
        }
        Ok(())
    }
}

/// Monte Carlo `(1−α)`-quantiles of `W_k` over independent replications.
///
/// Replication `j` draws from its own substream, so results do not depend
/// on evaluation order. Steps where `Z` is zero are skipped in one
/// geometric draw, which makes long horizons at high levels cheap.
#[derive(Debug, Clone)]
pub struct QuantileEstimator {
    cfg: DominatingConfig,
    recursion: WRecursion,
    n_reps: usize,
    seed: u64,
}

struct Replication {
    chain: JumpChain,
    rng: Substream,
}

/// The order statistic of a multiset whose members only ever grow.
struct RankTracker {
    lower: BTreeSet<(OrderedFloat<f64>, u32)>,
    upper: BTreeSet<(OrderedFloat<f64>, u32)>,
}

impl RankTracker {
    fn new(w0: f64, n: usize, rank: usize) -> Self {
        let key = |j: usize| (OrderedFloat(w0), j as u32);
        Self {
            lower: (0..rank).map(key).collect(),
            upper: (rank..n).map(key).collect(),
        }
    }

    fn raise(&mut self, j: u32, old: f64, new: f64) {
        let old_key = (OrderedFloat(old), j);
        if self.upper.remove(&old_key) {
            self.upper.insert((OrderedFloat(new), j));
            return;
        }
        let removed = self.lower.remove(&old_key);
        debug_assert!(removed);
        self.upper.insert((OrderedFloat(new), j));
        let least = self.upper.pop_first().expect("upper is nonempty");
        self.lower.insert(least);
    }

    fn value(&self) -> f64 {
        self.lower.last().expect("rank is at least one").0 .0
    }
}

impl QuantileEstimator {
    pub fn new(cfg: DominatingConfig, recursion: WRecursion, n_reps: usize, seed: u64) -> Result<Self> {
        if n_reps < MIN_REPLICATIONS {
            return Err(Error::TooFewReplications {
                min: MIN_REPLICATIONS,
                got: n_reps,
            });
        }
        Ok(Self {
            cfg,
            recursion,
            n_reps,
            seed,
        })
    }

    pub fn config(&self) -> &DominatingConfig {
        &self.cfg
    }

    pub fn n_reps(&self) -> usize {
        self.n_reps
    }

    /// 1-based rank of the reported order statistic, `ceil((1−α)·n)`.
    pub fn rank(&self) -> usize {
        let x = (1.0 - self.cfg.alpha) * self.n_reps as f64;
        ((x - 1e-9).ceil() as usize).clamp(1, self.n_reps)
    }

    /// Quantiles at each requested iteration, in the order given.
    pub fn quantiles_at(&self, w0: f64, ks: &[u64]) -> Vec<f64> {
        let mut sorted = ks.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let values = self.sweep(w0, &sorted);
        ks.iter()
            .map(|k| values[sorted.binary_search(k).expect("k was requested")])
            .collect()
    }

    pub fn table(&self, w0: f64, k_max: u64) -> QuantileTable {
        let ks: Vec<u64> = (0..=k_max).collect();
        QuantileTable {
            alpha: self.cfg.alpha,
            values: self.sweep(w0, &ks),
        }
    }

    fn sweep(&self, w0: f64, ks: &[u64]) -> Vec<f64> {
        assert!(w0 >= 0.0, "W_0 must be nonnegative");
        let start = JumpChain::new(w0, &self.cfg, self.recursion);
        let mut reps: Vec<Replication> = (0..self.n_reps)
            .map(|j| Replication {
                chain: start.clone(),
                rng: substream(self.seed, &[purpose::DOMINATING, j as u64]),
            })
            .collect();
        let mut pending = BinaryHeap::with_capacity(self.n_reps);
        for (j, rep) in reps.iter_mut().enumerate() {
            let next = rep.chain.steps_to_next_move(&mut rep.rng);
            pending.push(Reverse((next, j as u32)));
        }
        let mut tracker = RankTracker::new(w0, self.n_reps, self.rank());
        let mut out = Vec::with_capacity(ks.len());
        let mut running = f64::NEG_INFINITY;
        for &k in ks {
            while let Some(&Reverse((at, j))) = pending.peek() {
                if at > k {
                    break;
                }
                pending.pop();
                let rep = &mut reps[j as usize];
                let old = rep.chain.w;
                rep.chain.jump(&self.cfg, &mut rep.rng);
                tracker.raise(j, old, rep.chain.w);
                let next = at.saturating_add(rep.chain.steps_to_next_move(&mut rep.rng));
                pending.push(Reverse((next, j)));
            }
            running = running.max(tracker.value());
            out.push(running);
        }
        out
    }
}

pub fn estimate_quantiles(
    w0: f64,
    k_max: u64,
    cfg: &DominatingConfig,
    recursion: WRecursion,
    n_reps: usize,
    seed: u64,
) -> Result<QuantileTable> {
    Ok(QuantileEstimator::new(*cfg, recursion, n_reps, seed)?.table(w0, k_max))
}
