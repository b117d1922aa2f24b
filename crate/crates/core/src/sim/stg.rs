use std::fmt;

use super::InferenceTrace;
use crate::event::{ArrivalEvent, Node};
use crate::timing::tree_levels;

/// Causal arcs of the stage's signal transition graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StgArc {
    /// `clause_bundle` precedes every `pdl_out`.
    BundleBeforePdl,
    /// `completion` follows the first input of the root arbiter.
    RootInputBeforeCompletion,
    /// `wait` follows every `pdl_out`.
    PdlBeforeWait,
    /// `ack` follows `wait`.
    WaitBeforeAck,
    /// `done` follows `ack`.
    AckBeforeDone,
    /// The next `req` follows `done`.
    DoneBeforeNextReq,
}

impl fmt::Display for StgArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StgArc::BundleBeforePdl => "clause_bundle -> pdl_out",
            StgArc::RootInputBeforeCompletion => "root arbiter input -> completion",
            StgArc::PdlBeforeWait => "pdl_out -> wait",
            StgArc::WaitBeforeAck => "wait -> ack",
            StgArc::AckBeforeDone => "ack -> done",
            StgArc::DoneBeforeNextReq => "done -> next req",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StgViolation {
    Order {
        arc: StgArc,
        before: ArrivalEvent,
        after: ArrivalEvent,
    },
    Missing {
        arc: StgArc,
        node: &'static str,
    },
    Unordered {
        index: usize,
    },
}

impl fmt::Display for StgViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StgViolation::Order { arc, before, after } => write!(
                f,
                "{arc}: {} at {} after {} at {}",
                before.node, before.time, after.node, after.time
            ),
            StgViolation::Missing { arc, node } => write!(f, "{arc}: no {node} event"),
            StgViolation::Unordered { index } => write!(f, "event log not time-ordered at index {index}"),
        }
    }
}

/// Checks the causal ordering of one trace's transitions.
pub fn check_stg_order(trace: &InferenceTrace) -> Result<(), Vec<StgViolation>> {
    let mut out = Vec::new();
    if let Some(i) = trace.event_log.windows(2).position(|w| w[1].time < w[0].time) {
        out.push(StgViolation::Unordered { index: i + 1 });
    }
    let this: Vec<&ArrivalEvent> = trace.event_log.iter().filter(|e| e.cycle == trace.cycle).collect();
    let one = |node: Node| this.iter().copied().find(|e| e.node == node);
    let pdls: Vec<&ArrivalEvent> = this
        .iter()
        .copied()
        .filter(|e| matches!(e.node, Node::PdlOutput(_)))
        .collect();
    let levels = tree_levels(pdls.len());
    let root_inputs: Vec<&ArrivalEvent> = if levels <= 1 {
        pdls.clone()
    } else {
        this.iter()
            .copied()
            .filter(|e| matches!(e.node, Node::Arbiter { level, .. } if level == levels - 1))
            .collect()
    };
    let next_req = trace
        .event_log
        .iter()
        .find(|e| e.node == Node::Req && e.cycle == trace.cycle + 1);

    let mut need = |arc: StgArc, before: Option<&ArrivalEvent>, after: Option<&ArrivalEvent>, names: (&'static str, &'static str)| {
        match (before, after) {
            (Some(b), Some(a)) => {
                if a.time < b.time {
                    out.push(StgViolation::Order {
                        arc,
                        before: *b,
                        after: *a,
                    });
                }
            }
            (None, _) => out.push(StgViolation::Missing { arc, node: names.0 }),
            (_, None) => out.push(StgViolation::Missing { arc, node: names.1 }),
        }
    };

    let bundle = one(Node::ClauseBundle);
    if pdls.is_empty() {
        need(StgArc::BundleBeforePdl, bundle, None, ("clause_bundle", "pdl_out"));
    }
    for p in &pdls {
        need(StgArc::BundleBeforePdl, bundle, Some(p), ("clause_bundle", "pdl_out"));
    }
    let first_root = root_inputs.iter().copied().min_by_key(|e| e.time);
    need(
        StgArc::RootInputBeforeCompletion,
        first_root,
        one(Node::Completion),
        ("root arbiter input", "completion"),
    );
    let wait = one(Node::Wait);
    for p in &pdls {
        need(StgArc::PdlBeforeWait, Some(p), wait, ("pdl_out", "wait"));
    }
    let ack = one(Node::Ack);
    let done = one(Node::Done);
    need(StgArc::WaitBeforeAck, wait, ack, ("wait", "ack"));
    need(StgArc::AckBeforeDone, ack, done, ("ack", "done"));
    need(StgArc::DoneBeforeNextReq, done, next_req, ("done", "req"));

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
