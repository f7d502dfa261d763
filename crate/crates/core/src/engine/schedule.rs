use crate::error::ConfigError;
use serde::{Deserialize, Serialize};

/// Simulation budget per iteration, `τ(x) = c·f(x) + d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauSchedule {
    c: f64,
    d: f64,
}

impl TauSchedule {
    pub fn new(c: f64, d: f64) -> Result<Self, ConfigError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(ConfigError::new("engine.c", format!("must be positive, got {c}")));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(ConfigError::new("engine.d", format!("must be positive, got {d}")));
        }
        Ok(Self { c, d })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Real-valued budget `c·f + d`.
    pub fn value(&self, f_value: f64) -> f64 {
        self.c * f_value + self.d
    }

    /// Budget rounded up to whole embedded steps.
    pub fn steps(&self, f_value: f64) -> u64 {
        tau_of(self, f_value)
    }
}

pub fn tau_of(schedule: &TauSchedule, f_value: f64) -> u64 {
    debug_assert!(f_value >= 0.0);
    (schedule.value(f_value).ceil() as u64).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_up() {
        let s = TauSchedule::new(0.5, 1.0).unwrap();
        assert_eq!(tau_of(&s, 4.0), 3);
        assert_eq!(tau_of(&s, 0.0), 1);
        assert_eq!(tau_of(&s, 5.0), 4);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(TauSchedule::new(0.0, 1.0).is_err());
        assert!(TauSchedule::new(0.5, -1.0).is_err());
        assert!(TauSchedule::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn small_offset_still_one_step() {
        let s = TauSchedule::new(0.1, 0.01).unwrap();
        assert_eq!(tau_of(&s, 0.0), 1);
    }
}
