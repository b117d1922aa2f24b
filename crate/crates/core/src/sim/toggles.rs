use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use super::InferenceTrace;
use crate::event::{ArrivalEvent, Node};

/// Transition counts per node group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToggleCounts {
    /// Delay elements traversed by the launched transitions.
    pub delay_elements: u64,
    /// Launch flip-flops at the delay-line inputs.
    pub sync: u64,
    /// Arbiter latches and their completion gates.
    pub arbiters: u64,
    /// Handshake controller, latch enable and bundling line.
    pub control: u64,
}

impl ToggleCounts {
    pub fn total(&self) -> u64 {
        self.delay_elements + self.sync + self.arbiters + self.control
    }
}

impl Add for ToggleCounts {
    type Output = ToggleCounts;

    fn add(self, o: ToggleCounts) -> ToggleCounts {
        ToggleCounts {
            delay_elements: self.delay_elements + o.delay_elements,
            sync: self.sync + o.sync,
            arbiters: self.arbiters + o.arbiters,
            control: self.control + o.control,
        }
    }
}

impl AddAssign for ToggleCounts {
    fn add_assign(&mut self, o: ToggleCounts) {
        *self = *self + o;
    }
}

impl std::iter::Sum for ToggleCounts {
    fn sum<I: Iterator<Item = ToggleCounts>>(iter: I) -> Self {
        iter.fold(ToggleCounts::default(), Add::add)
    }
}

pub(crate) fn trace_toggles(log: &[ArrivalEvent], cycle: u64, elements_per_pdl: usize) -> ToggleCounts {
    let mut t = ToggleCounts::default();
    for e in log.iter().filter(|e| e.cycle == cycle) {
        match e.node {
            Node::PdlOutput(_) => {
                t.delay_elements += elements_per_pdl as u64;
                t.sync += 1;
            }
            Node::Arbiter { .. } | Node::Join { .. } => t.arbiters += 1,
            _ => t.control += 1,
        }
    }
    t
}

/// Sums transitions over `traces`, recounted from their event logs.
pub fn count_toggles(traces: &[InferenceTrace]) -> ToggleCounts {
    traces
        .iter()
        .map(|tr| trace_toggles(&tr.event_log, tr.cycle, tr.elements_per_pdl))
        .sum()
}
