//! Analytic latency, resource and switching-activity models for the four
//! popcount/argmax implementations.

mod measured;
mod toggle;
mod trend;

pub use measured::{MeasuredDesign, MEASURED_DESIGNS};
pub use toggle::toggle_model;
pub use trend::{sweep_trend, trend_csv, SweepParams, TrendPoint, Vary};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::time::Time;
use crate::timing::{tree_levels, DelayProfile, DEFAULT_ARBITER_DELAY};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchKind {
    GenericAdder,
    Fpt18Ripple,
    Async21DualRail,
    TimeDomain,
}

impl ArchKind {
    pub const ALL: [ArchKind; 4] = [
        ArchKind::GenericAdder,
        ArchKind::Fpt18Ripple,
        ArchKind::Async21DualRail,
        ArchKind::TimeDomain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ArchKind::GenericAdder => "generic_adder",
            ArchKind::Fpt18Ripple => "fpt18_ripple",
            ArchKind::Async21DualRail => "async21_dualrail",
            ArchKind::TimeDomain => "time_domain",
        }
    }

    pub fn is_adder(self) -> bool {
        matches!(self, ArchKind::GenericAdder | ArchKind::Fpt18Ripple)
    }
}

impl fmt::Display for ArchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ArchKind {
    type Err = CostError;

    fn from_str(s: &str) -> Result<Self, CostError> {
        let key = s.to_ascii_lowercase().replace(['-', '\''], "_");
        match key.as_str() {
            "generic_adder" | "generic" => Ok(ArchKind::GenericAdder),
            "fpt18_ripple" | "fpt18" | "fpt_18" => Ok(ArchKind::Fpt18Ripple),
            "async21_dualrail" | "async21" | "async_21" => Ok(ArchKind::Async21DualRail),
            "time_domain" | "td" => Ok(ArchKind::TimeDomain),
            _ => Err(CostError::UnknownArch(s.to_string())),
        }
    }
}

/// `a * classes * clauses + b * classes + c`, rounded.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearResources {
    pub per_clause: f64,
    pub per_class: f64,
    pub fixed: f64,
}

impl LinearResources {
    fn eval(&self, classes: usize, clauses: usize) -> u64 {
        let v = self.per_clause * (classes * clauses) as f64 + self.per_class * classes as f64 + self.fixed;
        v.round() as u64
    }

    fn constants(&self) -> [f64; 3] {
        [self.per_clause, self.per_class, self.fixed]
    }
}

/// Resource breakdown of the time-domain design.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeDomainResources {
    /// One LUT per delay element.
    pub luts_per_element: u64,
    pub sync_ffs_per_class: u64,
    pub luts_per_arbiter: u64,
    /// Handshake controller and completion logic.
    pub control: u64,
}

/// Dual-rail design built from 8-bit popcount blocks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualRailResources {
    pub rails: f64,
    pub block_luts: f64,
    pub block_bits: f64,
    pub per_class: f64,
}

/// Calibration constants of all four models.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Calibration {
    /// One adder-tree level.
    pub d_stage: Time,
    /// One bit of the ripple chain.
    pub d_ripple: Time,
    /// Comparator delay per bit of class-sum width.
    pub cmp_per_bit: Time,
    /// One arbiter level.
    pub d_arb: Time,
    pub time_domain_profile: DelayProfile,
    pub generic_resources: LinearResources,
    pub fpt18_resources: LinearResources,
    pub async21_resources: DualRailResources,
    pub time_domain_resources: TimeDomainResources,
}

impl Default for Calibration {
    /// Rounded least-squares fits to [`MEASURED_DESIGNS`]; see
    /// `examples/fit_calibration.rs`.
    fn default() -> Self {
        Calibration {
            d_stage: Time::from_ps(662.0),
            d_ripple: Time::from_ps(281.0),
            cmp_per_bit: Time::from_ps(517.0),
            d_arb: DEFAULT_ARBITER_DELAY,
            time_domain_profile: DelayProfile::default(),
            generic_resources: LinearResources {
                per_clause: 1.5,
                per_class: 1.0,
                fixed: 5.0,
            },
            fpt18_resources: LinearResources {
                per_clause: 1.1,
                per_class: 5.0,
                fixed: 15.0,
            },
            async21_resources: DualRailResources {
                rails: 2.0,
                block_luts: 28.0,
                block_bits: 8.0,
                per_class: 10.0,
            },
            time_domain_resources: TimeDomainResources {
                luts_per_element: 1,
                sync_ffs_per_class: 3,
                luts_per_arbiter: 3,
                control: 11,
            },
        }
    }
}

impl Calibration {
    pub fn validate(&self) -> Result<(), CostError> {
        let times = [
            ("d_stage", self.d_stage),
            ("d_ripple", self.d_ripple),
            ("cmp_per_bit", self.cmp_per_bit),
            ("d_arb", self.d_arb),
        ];
        for (name, t) in times {
            if t <= Time::ZERO {
                return Err(CostError::Calibration(format!("{name} must be positive")));
            }
        }
        self.time_domain_profile
            .validate()
            .map_err(|e| CostError::Calibration(e.to_string()))?;
        let mut reals = vec![];
        reals.extend(self.generic_resources.constants());
        reals.extend(self.fpt18_resources.constants());
        let a = self.async21_resources;
        reals.extend([a.rails, a.block_luts, a.block_bits, a.per_class]);
        if reals.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(CostError::Calibration("resource constants must be positive".into()));
        }
        let t = self.time_domain_resources;
        if [t.luts_per_element, t.sync_ffs_per_class, t.luts_per_arbiter, t.control].contains(&0) {
            return Err(CostError::Calibration("resource constants must be positive".into()));
        }
        Ok(())
    }
}

/// An implementation together with its calibration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchModel {
    pub kind: ArchKind,
    pub calibration: Calibration,
}

/// Which delay-line case a time-domain latency describes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LatencyCase {
    /// Every element on its high-latency net.
    Worst,
    /// Expected latency for a given mean Hamming weight.
    Average { mean_weight: f64 },
}

/// Class-sum comparator width: `ceil(log2(C + 1)) + 1` bits.
pub fn comparator_width(clauses_per_class: usize) -> u32 {
    ceil_log2(clauses_per_class + 1) + 1
}

/// Number of two-input arbiters, filler slots included.
pub fn arbiter_nodes(num_classes: usize) -> usize {
    let mut width = num_classes;
    let mut total = 0;
    while width > 1 {
        width = width.div_ceil(2);
        total += width;
    }
    total
}

fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

impl ArchModel {
    pub fn new(kind: ArchKind) -> Self {
        ArchModel {
            kind,
            calibration: Calibration::default(),
        }
    }

    pub fn with_calibration(kind: ArchKind, calibration: Calibration) -> Self {
        ArchModel { kind, calibration }
    }

    /// Popcount latency for an `n_bits` input vector.
    pub fn popcount_latency(&self, n_bits: usize, case: LatencyCase) -> Result<Time, CostError> {
        if n_bits == 0 {
            return Err(CostError::Empty("n_bits"));
        }
        let c = &self.calibration;
        match self.kind {
            ArchKind::GenericAdder => Ok(ceil_log2(n_bits) as i64 * c.d_stage),
            ArchKind::Fpt18Ripple => Ok(n_bits as i64 * c.d_ripple),
            ArchKind::TimeDomain => {
                let p = &c.time_domain_profile;
                let worst = p.base_delay + n_bits as i64 * p.d_high;
                match case {
                    LatencyCase::Worst => Ok(worst),
                    LatencyCase::Average { mean_weight } => {
                        if !(0.0..=n_bits as f64).contains(&mean_weight) {
                            return Err(CostError::BadWeight { mean_weight, n: n_bits });
                        }
                        let saved = (mean_weight * p.delta().as_fs() as f64).round() as i64;
                        Ok(worst - Time::from_fs(saved))
                    }
                }
            }
            ArchKind::Async21DualRail => Err(CostError::NoModel {
                arch: self.kind,
                quantity: "latency",
            }),
        }
    }

    /// Argmax latency over `num_classes` class sums of `sum_width_bits` bits.
    pub fn argmax_latency(&self, num_classes: usize, sum_width_bits: u32) -> Result<Time, CostError> {
        if num_classes < 2 {
            return Err(CostError::TooFewClasses(num_classes));
        }
        let c = &self.calibration;
        match self.kind {
            ArchKind::GenericAdder | ArchKind::Fpt18Ripple => {
                Ok((num_classes as i64 - 1) * (sum_width_bits as i64 * c.cmp_per_bit))
            }
            ArchKind::TimeDomain => Ok(tree_levels(num_classes) as i64 * c.d_arb),
            ArchKind::Async21DualRail => Err(CostError::NoModel {
                arch: self.kind,
                quantity: "latency",
            }),
        }
    }

    /// Popcount plus argmax latency of one inference.
    pub fn total_latency(&self, num_classes: usize, clauses_per_class: usize, case: LatencyCase) -> Result<Time, CostError> {
        Ok(self.popcount_latency(clauses_per_class, case)?
            + self.argmax_latency(num_classes, comparator_width(clauses_per_class))?)
    }

    /// LUTs plus FFs of the popcount and argmax logic.
    pub fn popcount_resources(&self, num_classes: usize, clauses_per_class: usize) -> Result<u64, CostError> {
        if num_classes == 0 || clauses_per_class == 0 {
            return Err(CostError::Empty("num_classes and clauses_per_class"));
        }
        let c = &self.calibration;
        Ok(match self.kind {
            ArchKind::GenericAdder => c.generic_resources.eval(num_classes, clauses_per_class),
            ArchKind::Fpt18Ripple => c.fpt18_resources.eval(num_classes, clauses_per_class),
            ArchKind::Async21DualRail => {
                let a = c.async21_resources;
                let bits = (num_classes * clauses_per_class) as f64;
                (a.rails * a.block_luts * bits / a.block_bits + a.per_class * num_classes as f64).round() as u64
            }
            ArchKind::TimeDomain => {
                let t = c.time_domain_resources;
                let k = num_classes as u64;
                k * clauses_per_class as u64 * t.luts_per_element
                    + k * t.sync_ffs_per_class
                    + (k - 1) * t.luts_per_arbiter
                    + t.control
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CostError {
    #[error("unknown architecture `{0}`")]
    UnknownArch(String),
    #[error("{arch} has no {quantity} model")]
    NoModel { arch: ArchKind, quantity: &'static str },
    #[error("{0} must be at least 1")]
    Empty(&'static str),
    #[error("argmax needs at least 2 classes, got {0}")]
    TooFewClasses(usize),
    #[error("mean weight {mean_weight} outside 0..={n}")]
    BadWeight { mean_weight: f64, n: usize },
    #[error("activity factor {0} outside [0, 1]")]
    BadActivity(f64),
    #[error("invalid calibration: {0}")]
    Calibration(String),
    #[error("sweep range is empty")]
    EmptyRange,
}
