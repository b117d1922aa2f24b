use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{arbiter_nodes, ArchKind, ArchModel, CostError};

/// Handshake transitions per cycle: req, en, clause bundle, completion,
/// wait, ack and done.
const CONTROL_TRANSITIONS: u64 = 7;

/// Transitions per cycle of the time-domain design, independent of data.
pub fn time_domain_toggles_per_cycle(num_classes: usize, clauses_per_class: usize) -> u64 {
    let k = num_classes as u64;
    k * clauses_per_class as u64 + k + 2 * arbiter_nodes(num_classes) as u64 + CONTROL_TRANSITIONS
}

/// Total signal transitions over `cycles` inferences.
///
/// Adder designs are simulated bit-accurately on a seeded input stream in
/// which each clause output flips between consecutive cycles with
/// probability `activity_factor`. The first cycle only initializes state.
pub fn toggle_model(
    arch: &ArchModel,
    num_classes: usize,
    clauses_per_class: usize,
    activity_factor: f64,
    cycles: usize,
    input_stream_seed: u64,
) -> Result<u64, CostError> {
    if !(0.0..=1.0).contains(&activity_factor) {
        return Err(CostError::BadActivity(activity_factor));
    }
    if num_classes == 0 || clauses_per_class == 0 {
        return Err(CostError::Empty("num_classes and clauses_per_class"));
    }
    match arch.kind {
        ArchKind::TimeDomain => Ok(cycles as u64 * time_domain_toggles_per_cycle(num_classes, clauses_per_class)),
        ArchKind::Async21DualRail => Err(CostError::NoModel {
            arch: arch.kind,
            quantity: "switching",
        }),
        ArchKind::GenericAdder | ArchKind::Fpt18Ripple => Ok(simulate_adders(
            arch.kind,
            num_classes,
            clauses_per_class,
            activity_factor,
            cycles,
            input_stream_seed,
        )),
    }
}

fn simulate_adders(kind: ArchKind, k: usize, c: usize, activity: f64, cycles: usize, seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits: Vec<bool> = (0..k * c).map(|_| rng.random_bool(0.5)).collect();
    let mut prev: Vec<u32> = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    let mut toggles = 0u64;
    for cycle in 0..cycles {
        if cycle > 0 {
            for b in bits.iter_mut() {
                if rng.random_bool(activity) {
                    *b = !*b;
                }
            }
        }
        cur.clear();
        let mut sums = Vec::with_capacity(k);
        for class in bits.chunks(c) {
            let s = match kind {
                ArchKind::GenericAdder => adder_tree(class, &mut cur),
                _ => ripple_chain(class, &mut cur),
            };
            sums.push(s);
        }
        compare_chain(&sums, &mut cur);
        if cycle > 0 {
            toggles += prev.iter().zip(&cur).map(|(a, b)| (a ^ b).count_ones() as u64).sum::<u64>();
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    toggles
}

/// Balanced tree of two-input adders; pushes every adder output.
fn adder_tree(bits: &[bool], nodes: &mut Vec<u32>) -> u32 {
    let mut level: Vec<u32> = bits.iter().map(|&b| b as u32).collect();
    while level.len() > 1 {
        let next: Vec<u32> = level.chunks(2).map(|p| p.iter().sum()).collect();
        for (pair, &v) in level.chunks(2).zip(&next) {
            if pair.len() == 2 {
                nodes.push(v);
            }
        }
        level = next;
    }
    level[0]
}

/// Running partial sums along the chain.
fn ripple_chain(bits: &[bool], nodes: &mut Vec<u32>) -> u32 {
    let mut s = 0;
    for &b in bits {
        s += b as u32;
        nodes.push(s);
    }
    s
}

/// Sequential comparators: running maximum and its index.
fn compare_chain(sums: &[u32], nodes: &mut Vec<u32>) {
    let (mut best, mut idx) = (sums[0], 0u32);
    for (i, &s) in sums.iter().enumerate().skip(1) {
        if s > best {
            best = s;
            idx = i as u32;
        }
        nodes.push(best);
        nodes.push(idx);
    }
}
