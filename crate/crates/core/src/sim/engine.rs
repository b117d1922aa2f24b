use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::toggles::{trace_toggles, ToggleCounts};
use super::{PdlBank, SimError, StageConfig};
use crate::bits::BitVector;
use crate::event::{ArrivalEvent, Edge, Node};
use crate::model::{validate_model, TmModel};
use crate::reference::{argmax_reference, clause_outputs, ClassSums, votes};
use crate::time::Time;
use crate::timing::{select_bits, tree_levels};

/// Record of one simulated inference cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct InferenceTrace {
    pub cycle: u64,
    pub phase: Edge,
    pub predicted_class: usize,
    /// `done` minus `req`.
    pub latency: Time,
    /// Some arbiter saw its two inputs closer than `epsilon_meta`.
    pub metastable: bool,
    /// The integer reference has a tie for the maximum class sum.
    pub tie_reference: bool,
    pub reference_class: usize,
    pub class_sums: Vec<i64>,
    /// Traversal time of each class's delay line.
    pub pdl_delays: Vec<Time>,
    /// Smallest gap between the two inputs of any arbiter with two real inputs.
    pub min_margin: Option<Time>,
    pub elements_per_pdl: usize,
    /// Time-ordered transitions, ending with the next cycle's `req`.
    pub event_log: Vec<ArrivalEvent>,
    pub toggles: ToggleCounts,
}

impl InferenceTrace {
    pub fn first(&self, node: Node) -> Option<&ArrivalEvent> {
        self.event_log.iter().find(|e| e.node == node && e.cycle == self.cycle)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Pending {
    time: Time,
    node: Node,
    seq: u64,
    /// Class carried by an arbiter decision.
    class: usize,
    cycle: u64,
}

struct Queue {
    heap: BinaryHeap<Reverse<Pending>>,
    seq: u64,
}

impl Queue {
    fn push(&mut self, time: Time, node: Node, class: usize, cycle: u64) {
        self.seq += 1;
        self.heap.push(Reverse(Pending {
            time,
            node,
            seq: self.seq,
            class,
            cycle,
        }));
    }

    fn pop(&mut self) -> Option<Pending> {
        self.heap.pop().map(|Reverse(p)| p)
    }
}

#[derive(Clone, Default)]
struct ArbiterState {
    first: Option<Time>,
    min_margin: Option<Time>,
    joins_seen: usize,
    joins_expected: usize,
    latest_join: Time,
}

struct Tree {
    levels: usize,
    /// `nodes[level - 1][slot]`.
    nodes: Vec<Vec<ArbiterState>>,
}

impl Tree {
    fn new(num_classes: usize) -> Self {
        let levels = tree_levels(num_classes);
        let mut nodes = Vec::with_capacity(levels);
        let mut width = num_classes;
        for _ in 0..levels {
            let arbiters = width.div_ceil(2);
            nodes.push(
                (0..arbiters)
                    .map(|slot| ArbiterState {
                        // a filler input contributes no transition
                        joins_expected: if 2 * slot + 1 < width { 2 } else { 1 },
                        ..Default::default()
                    })
                    .collect(),
            );
            width = arbiters;
        }
        Tree { levels, nodes }
    }

    fn state(&mut self, level: usize, slot: usize) -> &mut ArbiterState {
        &mut self.nodes[level - 1][slot]
    }
}

/// Simulates one inference cycle starting with `req` at t = 0.
///
/// Per-class delay-line jitter is keyed by the run seed and `cycle`, so a
/// cycle can be replayed independently of the others.
pub fn run_inference(
    model: &TmModel,
    input: &BitVector,
    bank: &PdlBank,
    stage: &StageConfig,
    phase: Edge,
    cycle: u64,
    seed: u64,
) -> Result<InferenceTrace, SimError> {
    validate_model(model).map_err(|v| SimError::InvalidModel(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))?;
    stage.validate()?;
    bank.check(model)?;

    let k = model.num_classes;
    let mut tree = Tree::new(k);
    let root = tree.levels;
    let mut queue = Queue {
        heap: BinaryHeap::new(),
        seq: 0,
    };
    let mut log = Vec::new();
    let mut pdl_delays = vec![Time::ZERO; k];
    let mut sums = None;
    let mut completion_seen = false;
    let mut root_joined = false;
    let mut winner = None;
    let mut done_time = None;

    queue.push(Time::ZERO, Node::Req, 0, cycle);
    while let Some(ev) = queue.pop() {
        let t = ev.time;
        log.push(ArrivalEvent {
            node: ev.node,
            time: t,
            edge: if ev.cycle == cycle { phase } else { phase.flip() },
            cycle: ev.cycle,
        });
        if ev.cycle != cycle {
            // next cycle's request: this cycle is finished
            break;
        }
        let mut decision_in: Option<(usize, usize, usize)> = None;
        let mut join_in: Option<(usize, usize)> = None;
        match ev.node {
            Node::Req => queue.push(t + stage.latch_delay, Node::Enable, 0, cycle),
            Node::Enable => queue.push(t + stage.clause_bundle_delay, Node::ClauseBundle, 0, cycle),
            Node::ClauseBundle => {
                let outputs = clause_outputs(model, input)?;
                let mut pos = Vec::with_capacity(k);
                let mut neg = Vec::with_capacity(k);
                for (c, (out, pdl)) in outputs.iter().zip(&bank.pdls).enumerate() {
                    let (p, n) = votes(out, pdl.polarity_map());
                    pos.push(p);
                    neg.push(n);
                    let select = select_bits(out, pdl.polarity_map())?;
                    pdl_delays[c] = pdl.delay(&select, seed, cycle)?;
                    queue.push(t + pdl_delays[c], Node::PdlOutput(c), c, cycle);
                }
                sums = Some(ClassSums::from_votes(pos, neg));
            }
            Node::PdlOutput(c) => {
                decision_in = Some((1, c, c));
                join_in = Some((1, c));
            }
            Node::Arbiter { level, slot } => {
                if level == root {
                    winner = Some(ev.class);
                    queue.push(t, Node::Completion, 0, cycle);
                } else {
                    decision_in = Some((level + 1, slot, ev.class));
                }
            }
            Node::Join { level, slot } => {
                if level == root {
                    root_joined = true;
                } else {
                    join_in = Some((level + 1, slot));
                }
            }
            Node::Completion => completion_seen = true,
            Node::Wait => queue.push(t + stage.ack_delay, Node::Ack, 0, cycle),
            Node::Ack => queue.push(t + stage.xnor_delay, Node::Done, 0, cycle),
            Node::Done => {
                done_time = Some(t);
                queue.push(t, Node::Req, 0, cycle + 1);
            }
        }
        // `child` is the slot index at the level below; it picks this
        // arbiter (child / 2) and the input side (child % 2).
        if let Some((level, child, class)) = decision_in {
            let st = tree.state(level, child / 2);
            match st.first {
                None => {
                    st.first = Some(t);
                    queue.push(t + stage.d_arb, Node::Arbiter { level, slot: child / 2 }, class, cycle);
                }
                Some(first) => {
                    let margin = t - first;
                    st.min_margin = Some(st.min_margin.map_or(margin, |m| m.min(margin)));
                }
            }
        }
        if let Some((level, child)) = join_in {
            let st = tree.state(level, child / 2);
            st.joins_seen += 1;
            st.latest_join = st.latest_join.max(t);
            if st.joins_seen == st.joins_expected {
                let at = st.latest_join + stage.d_arb;
                queue.push(at, Node::Join { level, slot: child / 2 }, 0, cycle);
            }
        }
        if (ev.node == Node::Completion || matches!(ev.node, Node::Join { level, .. } if level == root))
            && completion_seen
            && root_joined
        {
            queue.push(t, Node::Wait, 0, cycle);
        }
    }

    let sums = sums.expect("clause bundle always fires");
    let reference = argmax_reference(&sums);
    let min_margin = tree.nodes.iter().flatten().filter_map(|s| s.min_margin).min();
    let metastable = min_margin.is_some_and(|m| m < stage.epsilon_meta);
    let done = done_time.expect("simulation always reaches done");
    let toggles = trace_toggles(&log, cycle, model.clauses_per_class);
    Ok(InferenceTrace {
        cycle,
        phase,
        predicted_class: winner.expect("root arbiter always decides"),
        latency: done,
        metastable,
        tie_reference: reference.tie,
        reference_class: reference.class,
        class_sums: sums.sums,
        pdl_delays,
        min_margin,
        elements_per_pdl: model.clauses_per_class,
        event_log: log,
        toggles,
    })
}
