use super::config::DominatingConfig;

/// Parameters of the `Z(w)` survival bound at a fixed level `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZCoefficients {
    pub n: u64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

pub fn z_coefficients(w: f64, cfg: &DominatingConfig) -> ZCoefficients {
    debug_assert!(w >= 0.0);
    let n = cfg.blocks(w);
    let nf = n as f64;
    let sigma = f64::from(cfg.sigma);
    ZCoefficients {
        n,
        a1: sigma * cfg.phi - sigma * nf * cfg.delta,
        a2: (cfg.phi + cfg.delta).powi(2) * sigma * sigma * nf,
        a3: sigma * cfg.phi - w + cfg.kappa,
        a4: cfg.phi * cfg.phi * sigma * sigma * nf,
    }
}

impl ZCoefficients {
    /// The uncapped two-term expression.
    pub fn raw(&self, z: f64) -> f64 {
        let t1 = (-(z - self.a1).powi(2) / (2.0 * self.a2)).exp();
        let t2 = self.n as f64 * (-(z - self.a3).powi(2) / (2.0 * self.a4)).exp();
        t1 + t2
    }

    pub fn tail(&self, z: f64) -> f64 {
        if z <= 0.0 {
            1.0
        } else {
            self.raw(z).min(1.0)
        }
    }
}

pub fn z_tail(w: f64, z: f64, cfg: &DominatingConfig) -> f64 {
    z_coefficients(w, cfg).tail(z)
}

pub fn z_tail_monotone(w: f64, z: f64, cfg: &DominatingConfig) -> f64 {
    TailProfile::new(w, cfg).monotone(z)
}

const SCAN_POINTS: usize = 129;
const GOLDEN_ITERS: usize = 80;

/// Tail bound at one level, with the data needed to evaluate its running
/// minimum in constant time.
///
/// On `z > 0` the expression is a sum of two Gaussian bumps, so it has at
/// most one interior local minimum and it lies between the two peaks. The
/// running minimum over `(0, z]` is therefore the least of the value at
/// `0+`, the value at `z`, and the interior minimum once `z` has passed it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailProfile {
    coeffs: ZCoefficients,
    at_zero: f64,
    dip: Option<(f64, f64)>,
}

impl TailProfile {
    pub fn new(w: f64, cfg: &DominatingConfig) -> Self {
        Self::from_coefficients(z_coefficients(w, cfg))
    }

    pub fn from_coefficients(coeffs: ZCoefficients) -> Self {
        let at_zero = coeffs.raw(0.0).min(1.0);
        let hi = coeffs.a1.max(coeffs.a3);
        let dip = if hi > 0.0 {
            let lo = coeffs.a1.min(coeffs.a3).max(0.0);
            let (z, v) = interior_minimum(&coeffs, lo, hi);
            (v < at_zero).then_some((z, v))
        } else {
            None
        };
        Self { coeffs, at_zero, dip }
    }

    pub fn coefficients(&self) -> &ZCoefficients {
        &self.coeffs
    }

    /// Probability that `Z(w)` is strictly positive.
    pub fn positive_mass(&self) -> f64 {
        self.at_zero
    }

    pub fn tail(&self, z: f64) -> f64 {
        self.coeffs.tail(z)
    }

    /// `P(Z > z)` for the distribution the sampler draws from.
    pub fn survival(&self, z: f64) -> f64 {
        if z == 0.0 {
            self.at_zero
        } else {
            self.monotone(z)
        }
    }

    pub fn monotone(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return 1.0;
        }
        let mut m = self.at_zero.min(self.coeffs.raw(z));
        if let Some((zd, vd)) = self.dip {
            if zd <= z {
                m = m.min(vd);
            }
        }
        m
    }
}

fn interior_minimum(c: &ZCoefficients, lo: f64, hi: f64) -> (f64, f64) {
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let at = |i: usize| lo + step * i as f64;
    let mut best = 0;
    let mut best_v = c.raw(lo);
    for i in 1..SCAN_POINTS {
        let v = c.raw(at(i));
        if v < best_v {
            best = i;
            best_v = v;
        }
    }
    let mut a = at(best.saturating_sub(1));
    let mut b = at((best + 1).min(SCAN_POINTS - 1));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = c.raw(x1);
    let mut f2 = c.raw(x2);
    for _ in 0..GOLDEN_ITERS {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = c.raw(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = c.raw(x2);
        }
    }
    let (z, v) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if v < best_v {
        (z, v)
    } else {
        (at(best), best_v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::TauSchedule;
    use proptest::prelude::*;

    fn cfg() -> DominatingConfig {
        DominatingConfig::new(0.05, 1, 1.0, 1.0, TauSchedule::new(0.5, 1.0).unwrap(), 0.05).unwrap()
    }

    #[test]
    fn coefficients_at_100() {
        let c = z_coefficients(100.0, &cfg());
        assert_eq!(c.n, 51);
        assert!((c.a1 + 1.55).abs() < 1e-12);
        assert!((c.a2 - 56.2275).abs() < 1e-12);
        assert!((c.a3 + 98.0).abs() < 1e-12);
        assert!((c.a4 - 51.0).abs() < 1e-12);
    }

    #[test]
    fn coefficients_at_zero() {
        let c = z_coefficients(0.0, &cfg());
        assert_eq!(c.n, 1);
        assert!((c.a1 - 0.95).abs() < 1e-12);
        assert!((c.a2 - 1.1025).abs() < 1e-12);
        assert!((c.a3 - 2.0).abs() < 1e-12);
        assert!((c.a4 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn block_count_nondecreasing() {
        let cfg = cfg();
        let mut prev = 0;
        for i in 0..2000 {
            let n = z_coefficients(i as f64 * 0.37, &cfg).n;
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn tail_reference_value() {
        let v = z_tail(100.0, 10.0, &cfg());
        let expected = 0.305_356_751_213_227_8;
        assert!(((v - expected) / expected).abs() < 1e-12, "{v}");
        assert_eq!(z_tail(100.0, -3.0, &cfg()), 1.0);
        assert_eq!(z_tail(3.0, 0.0, &cfg()), 1.0);
    }

    #[test]
    fn far_tail_vanishes() {
        let cfg = cfg();
        let mut prev = 1.0;
        for i in 0..200 {
            let v = z_tail(100.0, i as f64, &cfg);
            assert!(v <= prev);
            prev = v;
        }
        assert!(z_tail(100.0, 500.0, &cfg) < 1e-300);
    }

    #[test]
    fn envelope_matches_raw_above_w_star() {
        let cfg = cfg();
        let w = cfg.diagnostics().w_star + 1.0;
        let p = TailProfile::new(w, &cfg);
        for i in 0..500 {
            let z = i as f64 * 0.1;
            assert_eq!(p.monotone(z), p.tail(z));
        }
    }

    #[test]
    fn envelope_flattens_rising_part() {
        // At w = 0 both peaks sit at positive z and the raw tail climbs back
        // to the cap before decaying.
        let p = TailProfile::new(0.0, &cfg());
        let at_zero = p.positive_mass();
        assert!(at_zero < 1.0);
        assert_eq!(p.tail(0.95), 1.0);
        assert_eq!(p.monotone(0.95), at_zero);
        let mut prev = 1.0;
        for i in 1..4000 {
            let z = i as f64 * 0.01;
            let m = p.monotone(z);
            assert!(m <= prev);
            assert!(m <= p.tail(z));
            prev = m;
        }
        assert_eq!(p.monotone(30.0), p.tail(30.0));
    }

    proptest! {
        #[test]
        fn envelope_is_a_running_minimum(
            delta in 0.005f64..0.5,
            sigma in 1u32..4,
            kappa in 0.0f64..6.0,
            phi in 0.2f64..5.0,
            c in 0.05f64..2.0,
            d in 0.1f64..5.0,
            w in 0.0f64..200.0,
        ) {
            let cfg = DominatingConfig::new(delta, sigma, kappa, phi, TauSchedule::new(c, d).unwrap(), 0.05).unwrap();
            let p = TailProfile::new(w, &cfg);
            let a = p.coefficients();
            let top = a.a1.max(a.a3).max(0.0) + 10.0 * a.a2.max(a.a4).sqrt();
            let steps = 2000;
            let mut run_min = p.tail(f64::MIN_POSITIVE);
            let mut prev = 1.0f64;
            for i in 1..=steps {
                let z = top * i as f64 / steps as f64;
                run_min = run_min.min(p.tail(z));
                let m = p.monotone(z);
                prop_assert!(m <= prev);
                prop_assert!(m <= p.tail(z));
                prop_assert!((0.0..=1.0).contains(&m));
                // The envelope may only undershoot the sampled minimum by
                // what the grid failed to resolve.
                prop_assert!(m <= run_min + 1e-12);
                prop_assert!(m >= run_min - 1e-3, "z={z} m={m} run_min={run_min}");
                prev = m;
            }
        }
    }
}

#[cfg(test)]
mod transition_tests {
    use super::*;
    use crate::engine::TauSchedule;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig { max_global_rejects: 100_000, ..ProptestConfig::default() })]

        // Above w*, starting higher can only make W_1 ≥ z more likely.
        #[test]
        fn transition_monotone_in_start(
            delta in 0.01f64..0.3,
            kappa in 0.0f64..5.0,
            phi in 0.5f64..3.0,
            c in 0.05f64..0.95,
            d in 0.1f64..3.0,
            offset in 0.0f64..200.0,
            gap in 0.0f64..50.0,
            excess in 0.0f64..100.0,
        ) {
            let cfg = DominatingConfig::new(delta, 1, kappa, phi, TauSchedule::new(c, d).unwrap(), 0.05).unwrap();
            let diag = cfg.diagnostics();
            prop_assume!(diag.monotone_kernel);
            let v = diag.w_star + 1e-9 + offset;
            let w = v + gap;
            let z = w + excess;
            let from_v = TailProfile::new(v, &cfg).monotone(z - v);
            let from_w = TailProfile::new(w, &cfg).monotone(z - w);
            prop_assert!(from_v <= from_w + 1e-12, "v={v} w={w} z={z}: {from_v} > {from_w}");
        }
    }
}
