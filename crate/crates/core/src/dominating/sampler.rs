use super::config::DominatingConfig;
use super::tail::TailProfile;

/// Survival level below which the support of `Z` is cut off.
pub const TAIL_TRUNCATION: f64 = 1e-12;
/// Absolute accuracy of the inverse-transform root in `z`.
pub const Z_TOLERANCE: f64 = 1e-9;

/// Inverse-transform draw of `Z(w)` from a uniform `u` in `(0, 1)`.
pub fn sample_z(w: f64, cfg: &DominatingConfig, u: f64) -> f64 {
    TailProfile::new(w, cfg).inverse(u)
}

/// Smallest `z` whose envelope tail is below the truncation level.
pub fn z_max(w: f64, cfg: &DominatingConfig) -> f64 {
    TailProfile::new(w, cfg).z_max()
}

impl TailProfile {
    /// Smallest `z ≥ 0` with `monotone(z) ≤ u`, to within `Z_TOLERANCE`.
    pub fn inverse(&self, u: f64) -> f64 {
        debug_assert!(u > 0.0 && u < 1.0, "u = {u}");
        if u >= self.positive_mass() {
            return 0.0;
        }
        if u < TAIL_TRUNCATION {
            return self.z_max();
        }
        self.solve(u, false)
    }

    pub fn z_max(&self) -> f64 {
        if TAIL_TRUNCATION > self.positive_mass() {
            return 0.0;
        }
        self.solve(TAIL_TRUNCATION, true)
    }

    /// Bracketed root of `monotone(z) = u`, using false position on the log
    /// tail with a bisection fallback.
    fn solve(&self, u: f64, strict: bool) -> f64 {
        let below = |m: f64| if strict { m < u } else { m <= u };
        let c = self.coefficients();
        let n = c.n as f64;
        let mut hi = 0f64
            .max(c.a1 + (2.0 * c.a2 * (2.0 / u).ln()).sqrt())
            .max(c.a3 + (2.0 * c.a4 * (2.0 * n / u).ln()).sqrt());
        while !below(self.monotone(hi)) {
            hi = 2.0 * hi + 1.0;
        }
        let mut lo = 0.0;
        let target = u.ln();
        let log_gap = |z: f64| self.monotone(z).ln() - target;
        let mut g_lo = self.positive_mass().ln() - target;
        let mut g_hi = log_gap(hi);
        let mut side = 0i8;
        while hi - lo > Z_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            let mut z = if g_lo.is_finite() && g_hi.is_finite() && g_lo > g_hi {
                lo + (hi - lo) * g_lo / (g_lo - g_hi)
            } else {
                mid
            };
            if !(z > lo && z < hi) {
                z = mid;
            }
            // Keep each update from stalling against one end.
            let span = hi - lo;
            z = z.clamp(lo + 1e-3 * span, hi - 1e-3 * span);
            let m = self.monotone(z);
            let g = m.ln() - target;
            if below(m) {
                hi = z;
                g_hi = g;
                if side == 1 {
                    g_lo *= 0.5;
                }
                side = 1;
            } else {
                lo = z;
                g_lo = g;
                if side == -1 {
                    g_hi *= 0.5;
                }
                side = -1;
            }
            if hi - lo > 0.5 * span {
                // Poor progress; bisect once.
                let m = self.monotone(mid);
                if below(m) {
                    hi = mid;
                    g_hi = m.ln() - target;
                } else {
                    lo = mid;
                    g_lo = m.ln() - target;
                }
            }
        }
        hi
    }
}
