use crate::engine::{Algorithm, TauSchedule};
use crate::error::ConfigError;

/// Drift hypothesis `(δ, σ, κ, φ_f)`, the shared budget schedule and the
/// significance level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominatingConfig {
    pub delta: f64,
    pub sigma: u32,
    pub kappa: f64,
    pub phi: f64,
    pub tau: TauSchedule,
    pub alpha: f64,
}

/// Number of independent `Z` draws added per step of `W`: one for global
/// search, two for local search (which keeps the better of two runs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WRecursion {
    Single,
    Paired,
}

impl From<Algorithm> for WRecursion {
    fn from(a: Algorithm) -> Self {
        match a {
            Algorithm::Global => WRecursion::Single,
            Algorithm::Local => WRecursion::Paired,
        }
    }
}

/// Values reported alongside a test; nothing branches on them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// Infimum of the levels at which both Gaussian peaks of the tail sit at
    /// or below zero.
    pub w_star: f64,
    /// Whether `n(w) <= w` for every `w >= w*` (with `c < σ`), the condition
    /// under which the transition kernel of `W` is monotone in its start.
    pub monotone_kernel: bool,
}

impl DominatingConfig {
    pub fn new(
        delta: f64,
        sigma: u32,
        kappa: f64,
        phi: f64,
        tau: TauSchedule,
        alpha: f64,
    ) -> Result<Self, ConfigError> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(ConfigError::new("dominating.delta", format!("must be positive, got {delta}")));
        }
        if sigma < 1 {
            return Err(ConfigError::new("dominating.sigma", "must be at least 1"));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(ConfigError::new("dominating.kappa", format!("must be nonnegative, got {kappa}")));
        }
        if !(phi > 0.0 && phi.is_finite()) {
            return Err(ConfigError::new("dominating.phi", format!("must be positive, got {phi}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ConfigError::new("dominating.alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        Ok(Self {
            delta,
            sigma,
            kappa,
            phi,
            tau,
            alpha,
        })
    }

    /// `n(w)`: smallest integer with `σ·n ≥ τ(w)`.
    pub fn blocks(&self, w: f64) -> u64 {
        ((self.tau.value(w) / f64::from(self.sigma)).ceil() as u64).max(1)
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let sigma = f64::from(self.sigma);
        // Smallest block count with σφ − σnδ ≤ 0.
        let mut n0 = (self.phi / self.delta).ceil().max(1.0) as u64;
        while n0 > 1 && sigma * self.phi - sigma * (n0 - 1) as f64 * self.delta <= 0.0 {
            n0 -= 1;
        }
        while sigma * self.phi - sigma * n0 as f64 * self.delta > 0.0 {
            n0 += 1;
        }
        // n(w) ≥ n0 once τ(w) > σ(n0 − 1).
        let from_blocks = (sigma * (n0 - 1) as f64 - self.tau.d()) / self.tau.c();
        let from_level = sigma * self.phi + self.kappa;
        let w_star = from_blocks.max(from_level).max(0.0);
        // Past w*, w − n(w) is smallest just after each jump of n, and with
        // c < σ those minima increase, so the first two jumps decide.
        let n_star = self.blocks(w_star) as f64;
        let next_jump = (sigma * n_star - self.tau.d()) / self.tau.c();
        let monotone_kernel =
            self.tau.c() < sigma && n_star <= w_star && n_star + 1.0 <= next_jump.max(w_star);
        Diagnostics {
            w_star,
            monotone_kernel,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> DominatingConfig {
        DominatingConfig::new(0.05, 1, 1.0, 1.0, TauSchedule::new(0.5, 1.0).unwrap(), 0.05).unwrap()
    }

    #[test]
    fn validation() {
        let tau = TauSchedule::new(0.5, 1.0).unwrap();
        assert!(DominatingConfig::new(0.0, 1, 1.0, 1.0, tau, 0.05).is_err());
        assert!(DominatingConfig::new(0.05, 0, 1.0, 1.0, tau, 0.05).is_err());
        assert!(DominatingConfig::new(0.05, 1, -1.0, 1.0, tau, 0.05).is_err());
        assert!(DominatingConfig::new(0.05, 1, 1.0, 0.0, tau, 0.05).is_err());
        assert!(DominatingConfig::new(0.05, 1, 1.0, 1.0, tau, 1.0).is_err());
        assert!(DominatingConfig::new(0.05, 1, 0.0, 1.0, tau, 0.5).is_ok());
    }

    #[test]
    fn w_star_brackets_both_peaks() {
        let cfg = base();
        let d = cfg.diagnostics();
        let peaks = |w: f64| {
            let n = cfg.blocks(w) as f64;
            (cfg.phi - n * cfg.delta, cfg.phi - w + cfg.kappa)
        };
        let (a1, a3) = peaks(d.w_star + 1e-9);
        assert!(a1 <= 0.0 && a3 <= 0.0);
        let (a1, a3) = peaks(d.w_star - 1e-3);
        assert!(a1 > 0.0 || a3 > 0.0);
        assert!(d.monotone_kernel);
    }

    #[test]
    fn steep_schedule_flags_kernel_condition() {
        let cfg = DominatingConfig::new(0.05, 1, 1.0, 1.0, TauSchedule::new(2.0, 1.0).unwrap(), 0.05).unwrap();
        assert!(!cfg.diagnostics().monotone_kernel);
    }
}
