//! Signal transitions shared by the timing models and the event simulator.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::time::Time;

/// Direction of a signal transition. Two-phase handshaking alternates these
/// from one inference cycle to the next.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Rising,
    Falling,
}

impl Edge {
    pub fn flip(self) -> Edge {
        match self {
            Edge::Rising => Edge::Falling,
            Edge::Falling => Edge::Rising,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Edge::Rising => "rising",
            Edge::Falling => "falling",
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named node of the inference netlist.
///
/// The derived ordering is the tie-break rank used by the event queue for
/// simultaneous events, so lower class indices and lower arbiter slots are
/// always handled first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Req,
    /// MOUSETRAP latch enable.
    Enable,
    /// Bundling delay expired: clause outputs are valid and the PDLs launch.
    ClauseBundle,
    PdlOutput(usize),
    /// Decision output of the arbiter at `level` (1 = leaves), position `slot`.
    Arbiter { level: usize, slot: usize },
    /// Arrival of the later of an arbiter's two inputs, propagated up the tree.
    Join { level: usize, slot: usize },
    Completion,
    Wait,
    Ack,
    Done,
}

impl Node {
    /// Short event-kind label used in trace exports.
    pub fn kind(&self) -> &'static str {
        match self {
            Node::Req => "req",
            Node::Enable => "en",
            Node::ClauseBundle => "clause_bundle",
            Node::PdlOutput(_) => "pdl_out",
            Node::Arbiter { .. } => "arbiter",
            Node::Join { .. } => "join",
            Node::Completion => "completion",
            Node::Wait => "wait",
            Node::Ack => "ack",
            Node::Done => "done",
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::PdlOutput(k) => write!(f, "pdl_out[{k}]"),
            Node::Arbiter { level, slot } => write!(f, "arb[L{level}.{slot}]"),
            Node::Join { level, slot } => write!(f, "join[L{level}.{slot}]"),
            other => f.write_str(other.kind()),
        }
    }
}

/// A transition observed at a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArrivalEvent {
    pub node: Node,
    pub time: Time,
    pub edge: Edge,
    /// Inference cycle this transition belongs to.
    pub cycle: u64,
}

impl ArrivalEvent {
    pub fn new(node: Node, time: Time, edge: Edge) -> Self {
        ArrivalEvent { node, time, edge, cycle: 0 }
    }
}
