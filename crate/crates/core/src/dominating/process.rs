use rand::Rng;

use super::config::{DominatingConfig, WRecursion};
use super::tail::TailProfile;
use crate::rng::open_unit;

/// One realisation `W_0, …, W_K` of the dominating chain.
#[derive(Debug, Clone, PartialEq)]
pub struct WPath {
    pub values: Vec<f64>,
}

impl WPath {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("path holds W_0")
    }
}

/// Steps `W` forward one draw at a time. Local search adds two independent
/// increments per step.
pub fn simulate_w<R: Rng + ?Sized>(
    w0: f64,
    k_max: u64,
    cfg: &DominatingConfig,
    recursion: WRecursion,
    rng: &mut R,
) -> WPath {
    assert!(w0 >= 0.0, "W_0 must be nonnegative");
    let mut values = Vec::with_capacity(k_max as usize + 1);
    values.push(w0);
    let mut w = w0;
    for _ in 0..k_max {
        let profile = TailProfile::new(w, cfg);
        let mut z = profile.inverse(open_unit(rng));
        if recursion == WRecursion::Paired {
            z += profile.inverse(open_unit(rng));
        }
        w += z;
        values.push(w);
    }
    WPath { values }
}

/// A `W` path that moves straight to the next step with a nonzero
/// increment. Runs of zero increments are drawn as one geometric variable.
#[derive(Debug, Clone)]
pub(crate) struct JumpChain {
    pub w: f64,
    profile: TailProfile,
    recursion: WRecursion,
}

impl JumpChain {
    pub fn new(w0: f64, cfg: &DominatingConfig, recursion: WRecursion) -> Self {
        Self {
            w: w0,
            profile: TailProfile::new(w0, cfg),
            recursion,
        }
    }

    /// Chance that one step of `W` moves from the current level.
    fn move_probability(&self) -> f64 {
        let p = self.profile.positive_mass();
        match self.recursion {
            WRecursion::Single => p,
            WRecursion::Paired => 1.0 - (1.0 - p) * (1.0 - p),
        }
    }

    pub fn steps_to_next_move<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let p = self.move_probability();
        if p >= 1.0 {
            return 1;
        }
        if p <= 0.0 {
            return u64::MAX;
        }
        let g = open_unit(rng).ln() / (-p).ln_1p();
        if g >= u64::MAX as f64 {
            u64::MAX
        } else {
            1 + g as u64
        }
    }

    /// Adds an increment conditioned on being nonzero.
    pub fn jump<R: Rng + ?Sized>(&mut self, cfg: &DominatingConfig, rng: &mut R) {
        let p = self.profile.positive_mass();
        let mut z = self.profile.inverse(p * open_unit(rng));
        if self.recursion == WRecursion::Paired {
            let both = p * p / self.move_probability();
            if rng.random::<f64>() < both {
                z += self.profile.inverse(p * open_unit(rng));
            }
        }
        self.w += z;
        self.profile = TailProfile::new(self.w, cfg);
    }
}

/// A draw of `W_k` from `W_0 = w0`, skipping steps where `W` stays put.
pub fn sample_w_at<R: Rng + ?Sized>(
    w0: f64,
    k: u64,
    cfg: &DominatingConfig,
    recursion: WRecursion,
    rng: &mut R,
) -> f64 {
    assert!(w0 >= 0.0, "W_0 must be nonnegative");
    let mut chain = JumpChain::new(w0, cfg, recursion);
    let mut at = chain.steps_to_next_move(rng);
    while at <= k {
        chain.jump(cfg, rng);
        at = at.saturating_add(chain.steps_to_next_move(rng));
    }
    chain.w
}
