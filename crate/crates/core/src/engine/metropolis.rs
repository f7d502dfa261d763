/// `exp(η·min{0, f_candidate − f_incumbent})`.
pub fn acceptance_probability(f_candidate: f64, f_incumbent: f64, eta: f64) -> f64 {
    let diff = f_candidate - f_incumbent;
    if diff >= 0.0 {
        1.0
    } else {
        (eta * diff).exp()
    }
}

/// Metropolis rule with an externally supplied uniform draw `u ∈ [0, 1)`.
/// Always accepts when the candidate is at least as large.
pub fn metropolis_accept(f_candidate: f64, f_incumbent: f64, eta: f64, u: f64) -> bool {
    u < acceptance_probability(f_candidate, f_incumbent, eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn improvement_always_accepted() {
        assert!(metropolis_accept(10.0, 8.0, 0.5, 0.999));
        assert!(metropolis_accept(5.0, 5.0, 2.0, 1.0 - f64::EPSILON));
    }

    #[test]
    fn regression_threshold() {
        // exp(-1) = 0.36787944117144233
        assert!(metropolis_accept(8.0, 10.0, 0.5, 0.3));
        assert!(!metropolis_accept(8.0, 10.0, 0.5, 0.4));
        assert!(metropolis_accept(8.0, 10.0, 0.5, 0.3678794));
        assert!(!metropolis_accept(8.0, 10.0, 0.5, 0.3678795));
    }

    proptest! {
        #[test]
        fn probability_one_iff_not_worse(a in 0.0..1e6f64, b in 0.0..1e6f64, eta in 1e-3..10.0f64) {
            let p = acceptance_probability(a, b, eta);
            prop_assert!((0.0..=1.0).contains(&p));
            if a >= b {
                prop_assert!(metropolis_accept(a, b, eta, 1.0 - f64::EPSILON));
            } else if eta * (b - a) > 1e-12 {
                prop_assert!(p < 1.0);
            }
        }
    }
}
