//! Time-domain popcount and comparison: programmable delay lines, SR-latch
//! arbiters, delay characterization and rank correlation.

mod arbiter;
mod characterize;
mod noise;
mod pdl;
mod profile;
mod spearman;

pub use arbiter::{
    arbitrate_pair, arbiter_tree, tree_levels, FillerPolicy, LatchKind, LevelRace, RaceOutcome, Side, TreeOutcome,
    Winner,
};
pub use characterize::{characterize_pdl, Characterization, DelaySample};
pub use noise::{noise_stream, NoiseDomain};
pub use pdl::{select_bits, PdlInstance};
pub use profile::{DelayProfile, NetDelayCalibration, NET_DELAY_CALIBRATIONS};
pub use spearman::{spearman_rho, Spearman};

use crate::time::Time;

/// Default arbiter metastability window.
pub const DEFAULT_EPSILON_META: Time = Time::from_fs(10_000);
/// Default latency of one arbiter level.
pub const DEFAULT_ARBITER_DELAY: Time = Time::from_fs(100_000);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TimingError {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid delay profile: {0}")]
    InvalidProfile(String),
    #[error("arbiter inputs have mixed transition polarity")]
    MixedPolarity,
    #[error("arbiter tree needs at least 2 arrivals, got {0}")]
    TooFewArrivals(usize),
    #[error("Hamming weight {weight} exceeds PDL length {n}")]
    WeightOutOfRange { weight: usize, n: usize },
    #[error("rank correlation needs two sequences of equal length >= 2 (got {xs} and {ys})")]
    BadSequences { xs: usize, ys: usize },
}
