//! Discrete-event timing simulation and cost models for time-domain popcount
//! and argmax in asynchronous Tsetlin Machine inference.
//!
//! Module map:
//! - [`model`], [`dataset`], [`booleanize`]: TM models and Boolean data.
//! - [`reference`]: integer-arithmetic inference used as ground truth.
//! - [`timing`]: delay lines, arbiters, characterization, rank correlation.
//! - [`sim`]: event-driven simulation of one asynchronous inference stage.
//! - [`cost`]: analytic latency, resource and switching models.
//! - [`flowgen`]: placement, pin and routing constraint scripts.

pub mod bits;
pub mod booleanize;
pub mod cost;
pub mod dataset;
pub mod event;
pub mod flowgen;
pub mod model;
pub mod reference;
pub mod sim;
pub mod time;
pub mod timing;

pub use bits::BitVector;
pub use event::{ArrivalEvent, Edge, Node};
pub use model::{Clause, Polarity, TmModel};
pub use time::Time;
