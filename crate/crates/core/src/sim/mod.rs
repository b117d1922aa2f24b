//! Event-driven simulation of one asynchronous TM inference stage.
//!
//! A single MOUSETRAP-style stage is modeled with single-rail bundled data
//! and two-phase handshaking. Each cycle runs
//! `req -> en -> clause_bundle -> pdl_out[k] -> arbiters -> completion -> wait -> ack -> done`,
//! and `done` toggles the next `req`. Consecutive cycles alternate between
//! rising and falling transitions.

mod batch;
mod engine;
mod stg;
mod toggles;

pub use batch::{run_batch, traces_to_csv, BatchResult, BatchSummary};
pub use engine::{run_inference, InferenceTrace};
pub use stg::{check_stg_order, StgArc, StgViolation};
pub use toggles::{count_toggles, ToggleCounts};

use serde::{Deserialize, Serialize};

use crate::event::Edge;
use crate::model::TmModel;
use crate::reference::LengthMismatch;
use crate::time::Time;
use crate::timing::{tree_levels, DelayProfile, PdlInstance, TimingError, DEFAULT_ARBITER_DELAY, DEFAULT_EPSILON_META};

/// Timing of the stage's control path and bundled datapath.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StageConfig {
    /// Worst-case clause-logic delay matched by the bundling line.
    pub clause_bundle_delay: Time,
    /// `req` to latch enable.
    pub latch_delay: Time,
    /// `ack` to `done` through the stage's XNOR.
    pub xnor_delay: Time,
    /// `wait` to `ack` through the controller.
    pub ack_delay: Time,
    /// Latency of one arbiter level.
    pub d_arb: Time,
    /// Arrival gap below which an arbiter is considered metastable.
    pub epsilon_meta: Time,
    /// Transition polarity of cycle 0.
    pub phase0: Edge,
}

impl Default for StageConfig {
    fn default() -> Self {
        StageConfig {
            clause_bundle_delay: Time::from_ps(2_000.0),
            latch_delay: Time::ZERO,
            xnor_delay: Time::ZERO,
            ack_delay: Time::ZERO,
            d_arb: DEFAULT_ARBITER_DELAY,
            epsilon_meta: DEFAULT_EPSILON_META,
            phase0: Edge::Rising,
        }
    }
}

impl StageConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.clause_bundle_delay <= Time::ZERO {
            return Err(SimError::InvalidStage("clause_bundle_delay must be positive".into()));
        }
        let named = [
            ("latch_delay", self.latch_delay),
            ("xnor_delay", self.xnor_delay),
            ("ack_delay", self.ack_delay),
            ("d_arb", self.d_arb),
            ("epsilon_meta", self.epsilon_meta),
        ];
        for (name, t) in named {
            if t < Time::ZERO {
                return Err(SimError::InvalidStage(format!("{name} must be >= 0")));
            }
        }
        Ok(())
    }

    /// Sum of the fixed control-path delays.
    pub fn control_delay(&self) -> Time {
        self.latch_delay + self.ack_delay + self.xnor_delay
    }

    /// Transition polarity of cycle `cycle`.
    pub fn phase_of(&self, cycle: u64) -> Edge {
        if cycle.is_multiple_of(2) {
            self.phase0
        } else {
            self.phase0.flip()
        }
    }
}

/// One delay line per class, each with `clauses_per_class` elements.
#[derive(Clone, Debug, PartialEq)]
pub struct PdlBank {
    pub pdls: Vec<PdlInstance>,
}

impl PdlBank {
    /// Builds the bank for `model`; static offsets come from `seed`.
    pub fn for_model(model: &TmModel, profile: DelayProfile, seed: u64) -> Result<Self, SimError> {
        let pdls = (0..model.num_classes)
            .map(|k| PdlInstance::for_class(model, k, profile, seed))
            .collect::<Result<_, _>>()?;
        Ok(PdlBank { pdls })
    }

    pub fn len(&self) -> usize {
        self.pdls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pdls.is_empty()
    }

    fn check(&self, model: &TmModel) -> Result<(), SimError> {
        if self.pdls.len() != model.num_classes {
            return Err(SimError::BankMismatch(format!(
                "{} delay lines for {} classes",
                self.pdls.len(),
                model.num_classes
            )));
        }
        for (k, pdl) in self.pdls.iter().enumerate() {
            if pdl.n_elements() != model.clauses_per_class {
                return Err(SimError::BankMismatch(format!(
                    "delay line {k} has {} elements, model has {} clauses per class",
                    pdl.n_elements(),
                    model.clauses_per_class
                )));
            }
            if pdl.polarity_map() != model.polarities(k).as_slice() {
                return Err(SimError::BankMismatch(format!(
                    "delay line {k} polarity map differs from class {k} clause polarities"
                )));
            }
        }
        Ok(())
    }
}

/// Upper bound on one cycle's latency: every element on its slow net.
pub fn latency_upper_bound(model: &TmModel, profile: &DelayProfile, stage: &StageConfig) -> Time {
    stage.clause_bundle_delay
        + profile.affine_delay(model.clauses_per_class, 0)
        + tree_levels(model.num_classes) as i64 * stage.d_arb
        + stage.control_delay()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Input(#[from] LengthMismatch),
    #[error(transparent)]
    Timing(#[from] TimingError),
    #[error("delay-line bank does not match model: {0}")]
    BankMismatch(String),
    #[error("invalid stage configuration: {0}")]
    InvalidStage(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("dataset has {found} features, model expects {expected}")]
    DatasetShape { expected: usize, found: usize },
}
