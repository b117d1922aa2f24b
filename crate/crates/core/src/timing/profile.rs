use serde::{Deserialize, Serialize};

use super::TimingError;
use crate::time::Time;

/// Net delays of one delay element, plus jitter parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DelayProfile {
    /// Low-latency net, selected by a `1`.
    pub d_low: Time,
    /// High-latency net, selected by a `0`.
    pub d_high: Time,
    /// Standard deviation (ps) of the per-element offsets frozen into each instance.
    pub sigma_static: f64,
    /// Standard deviation (ps) of the per-element noise added on every transition.
    pub sigma_dynamic: f64,
    /// Launch and synchronization overhead added to every traversal.
    pub base_delay: Time,
}

impl Default for DelayProfile {
    /// Averages of the measured net delays used for lossless accuracy.
    fn default() -> Self {
        DelayProfile {
            d_low: Time::from_ps(384.5),
            d_high: Time::from_ps(617.6),
            sigma_static: 0.0,
            sigma_dynamic: 0.0,
            base_delay: Time::ZERO,
        }
    }
}

impl DelayProfile {
    pub fn new(d_low: Time, d_high: Time) -> Self {
        DelayProfile {
            d_low,
            d_high,
            ..Default::default()
        }
    }

    pub fn with_sigmas(mut self, sigma_static: f64, sigma_dynamic: f64) -> Self {
        self.sigma_static = sigma_static;
        self.sigma_dynamic = sigma_dynamic;
        self
    }

    pub fn with_base(mut self, base_delay: Time) -> Self {
        self.base_delay = base_delay;
        self
    }

    /// `d_high - d_low`: the delay saved by each selected low-latency net.
    pub fn delta(&self) -> Time {
        self.d_high - self.d_low
    }

    pub fn is_noiseless(&self) -> bool {
        self.sigma_static == 0.0 && self.sigma_dynamic == 0.0
    }

    pub fn validate(&self) -> Result<(), TimingError> {
        if self.d_low <= Time::ZERO {
            return Err(TimingError::InvalidProfile(format!("d_low must be positive, got {}", self.d_low)));
        }
        if self.d_high <= self.d_low {
            return Err(TimingError::InvalidProfile(format!(
                "d_high ({}) must exceed d_low ({})",
                self.d_high, self.d_low
            )));
        }
        for (name, s) in [("sigma_static", self.sigma_static), ("sigma_dynamic", self.sigma_dynamic)] {
            if !(s.is_finite() && s >= 0.0) {
                return Err(TimingError::InvalidProfile(format!("{name} must be finite and >= 0, got {s}")));
            }
        }
        if self.base_delay < Time::ZERO {
            return Err(TimingError::InvalidProfile("base_delay must be >= 0".into()));
        }
        Ok(())
    }

    /// Zero-noise traversal time for a select vector of Hamming weight `w`
    /// over `n` elements: `base + n*d_high - w*delta`.
    pub fn affine_delay(&self, n: usize, w: usize) -> Time {
        self.base_delay + n as i64 * self.d_high - w as i64 * self.delta()
    }
}

/// Per-design net delays that achieved lossless accuracy on hardware.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetDelayCalibration {
    pub dataset: &'static str,
    pub num_classes: usize,
    pub num_features: usize,
    pub clauses_per_class: usize,
    pub d_low_ps: f64,
    pub d_high_ps: f64,
}

impl NetDelayCalibration {
    pub fn profile(&self) -> DelayProfile {
        DelayProfile::new(Time::from_ps(self.d_low_ps), Time::from_ps(self.d_high_ps))
    }

    pub fn find(dataset: &str, clauses_per_class: usize) -> Option<&'static NetDelayCalibration> {
        NET_DELAY_CALIBRATIONS
            .iter()
            .find(|c| c.dataset.eq_ignore_ascii_case(dataset) && c.clauses_per_class == clauses_per_class)
    }
}

pub const NET_DELAY_CALIBRATIONS: [NetDelayCalibration; 4] = [
    NetDelayCalibration { dataset: "iris", num_classes: 3, num_features: 12, clauses_per_class: 10, d_low_ps: 375.4, d_high_ps: 641.9 },
    NetDelayCalibration { dataset: "iris", num_classes: 3, num_features: 12, clauses_per_class: 50, d_low_ps: 388.6, d_high_ps: 593.0 },
    NetDelayCalibration { dataset: "mnist", num_classes: 10, num_features: 784, clauses_per_class: 50, d_low_ps: 402.8, d_high_ps: 603.3 },
    NetDelayCalibration { dataset: "mnist", num_classes: 10, num_features: 784, clauses_per_class: 100, d_low_ps: 371.1, d_high_ps: 632.1 },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_matches_average_calibration() {
        let p = DelayProfile::default();
        assert_eq!(p.d_low.as_ps(), 384.5);
        assert_eq!(p.d_high.as_ps(), 617.6);
        assert_eq!(p.delta().as_ps(), 233.1);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn invalid_profiles_are_rejected() {
        assert!(DelayProfile::new(Time::from_ps(5.0), Time::from_ps(5.0)).validate().is_err());
        assert!(DelayProfile::new(Time::ZERO, Time::from_ps(5.0)).validate().is_err());
        assert!(DelayProfile::default().with_sigmas(-1.0, 0.0).validate().is_err());
        assert!(DelayProfile::default().with_sigmas(0.0, f64::NAN).validate().is_err());
    }

    #[test]
    fn calibration_lookup() {
        let c = NetDelayCalibration::find("MNIST", 50).unwrap();
        assert_eq!(c.profile().d_high.as_ps(), 603.3);
        assert!(NetDelayCalibration::find("mnist", 60).is_none());
    }

    #[test]
    fn profile_from_toml_with_defaults() {
        let p: DelayProfile = toml::from_str("d_high = 984.5\nsigma_dynamic = 12.5").unwrap();
        assert_eq!(p.d_low.as_ps(), 384.5);
        assert_eq!(p.delta().as_ps(), 600.0);
        assert_eq!(p.sigma_dynamic, 12.5);
    }
}
