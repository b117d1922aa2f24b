use serde::Serialize;

use super::TimingError;
use crate::event::{ArrivalEvent, Edge};
use crate::time::Time;

/// Which input of a two-input arbiter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Up,
    Lo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Winner {
    Up,
    Lo,
    Metastable,
}

/// Latch used for the race: cross-coupled NANDs for rising transitions,
/// NORs for falling ones. Both resolve a race the same way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LatchKind {
    NandSr,
    NorSr,
}

impl LatchKind {
    pub fn for_edge(edge: Edge) -> Self {
        match edge {
            Edge::Rising => LatchKind::NandSr,
            Edge::Falling => LatchKind::NorSr,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RaceOutcome {
    pub winner: Winner,
    /// Side the latch settles to. Equals `winner` unless the race was
    /// metastable, in which case the earlier input (UP on an exact tie) is
    /// taken.
    pub resolved: Side,
    pub winner_time: Time,
    /// Absent when the opposing input never transitions.
    pub loser_time: Option<Time>,
    /// Arrival gap; absent when the opposing input never transitions.
    pub margin: Option<Time>,
    pub latch: LatchKind,
}

fn race(up: Option<Time>, lo: Option<Time>, epsilon_meta: Time, latch: LatchKind) -> RaceOutcome {
    match (up, lo) {
        (Some(u), Some(l)) => {
            let resolved = if l < u { Side::Lo } else { Side::Up };
            let (winner_time, loser_time) = if resolved == Side::Up { (u, l) } else { (l, u) };
            let margin = u.abs_diff(l);
            let winner = if margin < epsilon_meta {
                Winner::Metastable
            } else if resolved == Side::Up {
                Winner::Up
            } else {
                Winner::Lo
            };
            RaceOutcome {
                winner,
                resolved,
                winner_time,
                loser_time: Some(loser_time),
                margin: Some(margin),
                latch,
            }
        }
        (Some(t), None) | (None, Some(t)) => {
            let side = if up.is_some() { Side::Up } else { Side::Lo };
            RaceOutcome {
                winner: if side == Side::Up { Winner::Up } else { Winner::Lo },
                resolved: side,
                winner_time: t,
                loser_time: None,
                margin: None,
                latch,
            }
        }
        (None, None) => unreachable!("a race always has at least one real input"),
    }
}

/// Resolves which of two same-polarity transitions arrived first.
pub fn arbitrate_pair(up: &ArrivalEvent, lo: &ArrivalEvent, epsilon_meta: Time) -> Result<RaceOutcome, TimingError> {
    if up.edge != lo.edge {
        return Err(TimingError::MixedPolarity);
    }
    Ok(race(Some(up.time), Some(lo.time), epsilon_meta, LatchKind::for_edge(up.edge)))
}

/// Input of an arbiter left over when a tree level has an odd number of slots.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FillerPolicy {
    /// Tied to a constant: never transitions, so the real input always wins.
    #[default]
    NeverArrives,
}

/// One arbiter of the tree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelRace {
    pub level: usize,
    pub slot: usize,
    /// Class arriving on each input; `None` for a filler input.
    pub up_class: Option<usize>,
    pub lo_class: Option<usize>,
    pub outcome: RaceOutcome,
    /// Winning class forwarded to the next level.
    pub forwarded_class: usize,
    /// Time the decision leaves this arbiter.
    pub output_time: Time,
    /// Time the later input's transition leaves this arbiter.
    pub join_time: Time,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeOutcome {
    pub winner_class: usize,
    /// Root decision time: the winning transition after every arbiter level.
    pub decision_time: Time,
    /// Latest real arrival plus one arbiter delay per level.
    pub completion_time: Time,
    pub metastable_any: bool,
    pub levels: Vec<Vec<LevelRace>>,
}

/// Number of arbiter levels for `n` inputs: `ceil(log2 n)`.
pub fn tree_levels(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[derive(Clone, Copy)]
struct Slot {
    time: Time,
    join: Time,
    class: usize,
}

/// Balanced binary tree of pairwise races over per-class arrivals.
///
/// Each level pairs adjacent slots; an odd final slot races a filler input.
/// Every arbiter adds `d_arb`, so every real input crosses exactly
/// `tree_levels(n)` arbiters on its way to the root.
pub fn arbiter_tree(
    arrivals: &[ArrivalEvent],
    epsilon_meta: Time,
    d_arb: Time,
    filler: FillerPolicy,
) -> Result<TreeOutcome, TimingError> {
    if arrivals.len() < 2 {
        return Err(TimingError::TooFewArrivals(arrivals.len()));
    }
    let edge = arrivals[0].edge;
    if arrivals.iter().any(|a| a.edge != edge) {
        return Err(TimingError::MixedPolarity);
    }
    let latch = LatchKind::for_edge(edge);
    let mut slots: Vec<Slot> = arrivals
        .iter()
        .enumerate()
        .map(|(class, a)| Slot {
            time: a.time,
            join: a.time,
            class,
        })
        .collect();
    let mut levels = Vec::new();
    let mut metastable_any = false;
    let mut level = 1;
    while slots.len() > 1 {
        let mut races = Vec::with_capacity(slots.len().div_ceil(2));
        let mut next = Vec::with_capacity(races.capacity());
        for (slot, pair) in slots.chunks(2).enumerate() {
            let up = pair[0];
            let lo = match (pair.get(1), filler) {
                (Some(s), _) => Some(*s),
                (None, FillerPolicy::NeverArrives) => None,
            };
            let outcome = race(Some(up.time), lo.map(|s| s.time), epsilon_meta, latch);
            metastable_any |= outcome.winner == Winner::Metastable;
            let win = match outcome.resolved {
                Side::Up => up,
                Side::Lo => lo.expect("resolved to a real input"),
            };
            let join = lo.map_or(up.join, |l| up.join.max(l.join)) + d_arb;
            let out = Slot {
                time: win.time + d_arb,
                join,
                class: win.class,
            };
            races.push(LevelRace {
                level,
                slot,
                up_class: Some(up.class),
                lo_class: lo.map(|s| s.class),
                outcome,
                forwarded_class: out.class,
                output_time: out.time,
                join_time: out.join,
            });
            next.push(out);
        }
        levels.push(races);
        slots = next;
        level += 1;
    }
    let root = slots[0];
    Ok(TreeOutcome {
        winner_class: root.class,
        decision_time: root.time,
        completion_time: root.join,
        metastable_any,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::Node;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ev(ns: f64, edge: Edge) -> ArrivalEvent {
        ArrivalEvent::new(Node::PdlOutput(0), Time::from_ns(ns), edge)
    }

    fn rising(times_ns: &[f64]) -> Vec<ArrivalEvent> {
        times_ns
            .iter()
            .enumerate()
            .map(|(k, &t)| ArrivalEvent::new(Node::PdlOutput(k), Time::from_ns(t), Edge::Rising))
            .collect()
    }

    const EPS: Time = Time::from_fs(10_000);

    #[test]
    fn pair_examples() {
        let r = arbitrate_pair(&ev(10.0, Edge::Rising), &ev(12.0, Edge::Rising), EPS).unwrap();
        assert_eq!(r.winner, Winner::Up);
        assert_eq!(r.margin, Some(Time::from_ns(2.0)));
        assert_eq!(r.latch, LatchKind::NandSr);

        let r = arbitrate_pair(&ev(10.0, Edge::Rising), &ev(10.005, Edge::Rising), EPS).unwrap();
        assert_eq!(r.winner, Winner::Metastable);
        assert_eq!(r.resolved, Side::Up);

        let r = arbitrate_pair(&ev(12.0, Edge::Rising), &ev(10.0, Edge::Rising), EPS).unwrap();
        assert_eq!(r.winner, Winner::Lo);
        assert!(r.winner_time <= r.loser_time.unwrap());
    }

    #[test]
    fn falling_races_resolve_identically() {
        for (a, b) in [(10.0, 12.0), (12.0, 10.0), (10.0, 10.004)] {
            let rise = arbitrate_pair(&ev(a, Edge::Rising), &ev(b, Edge::Rising), EPS).unwrap();
            let fall = arbitrate_pair(&ev(a, Edge::Falling), &ev(b, Edge::Falling), EPS).unwrap();
            assert_eq!(rise.winner, fall.winner);
            assert_eq!(rise.margin, fall.margin);
            assert_eq!(fall.latch, LatchKind::NorSr);
        }
    }

    #[test]
    fn mixed_polarity_is_rejected() {
        assert_eq!(
            arbitrate_pair(&ev(1.0, Edge::Rising), &ev(2.0, Edge::Falling), EPS),
            Err(TimingError::MixedPolarity)
        );
    }

    #[test]
    fn three_way_tree_with_filler() {
        let out = arbiter_tree(&rising(&[8.0, 11.0, 9.0]), EPS, Time::from_ns(0.1), FillerPolicy::NeverArrives).unwrap();
        assert_eq!(out.winner_class, 0);
        assert_eq!(out.completion_time, Time::from_ns(11.0) + 2 * Time::from_ns(0.1));
        assert_eq!(out.decision_time, Time::from_ns(8.2));
        assert!(!out.metastable_any);
        assert_eq!(out.levels.len(), 2);
        let filler_race = &out.levels[0][1];
        assert_eq!((filler_race.up_class, filler_race.lo_class), (Some(2), None));
        assert_eq!(filler_race.outcome.winner, Winner::Up);
    }

    #[test]
    fn equal_arrivals_are_metastable() {
        let out = arbiter_tree(&rising(&[5.0, 5.0]), EPS, Time::from_ns(0.1), FillerPolicy::NeverArrives).unwrap();
        assert!(out.metastable_any);
        assert_eq!(out.winner_class, 0);
    }

    #[test]
    fn tree_needs_two_arrivals() {
        assert_eq!(
            arbiter_tree(&rising(&[1.0]), EPS, Time::ZERO, FillerPolicy::NeverArrives),
            Err(TimingError::TooFewArrivals(1))
        );
    }

    #[test]
    fn levels_are_ceil_log2() {
        let expect = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (10, 4), (16, 4), (17, 5)];
        for (n, l) in expect {
            assert_eq!(tree_levels(n), l, "n = {n}");
        }
    }

    #[test]
    fn winner_is_min_arrival_when_margins_exceed_epsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let d_arb = Time::from_ps(100.0);
        let mut checked = 0;
        for _ in 0..2000 {
            let k = rng.random_range(2..=12);
            let times: Vec<Time> = (0..k).map(|_| Time::from_fs(rng.random_range(0..2_000_000))).collect();
            let ok = times
                .iter()
                .enumerate()
                .all(|(i, a)| times[i + 1..].iter().all(|b| a.abs_diff(*b) >= EPS));
            if !ok {
                continue;
            }
            let events: Vec<ArrivalEvent> = times
                .iter()
                .enumerate()
                .map(|(c, &t)| ArrivalEvent::new(Node::PdlOutput(c), t, Edge::Falling))
                .collect();
            let out = arbiter_tree(&events, EPS, d_arb, FillerPolicy::NeverArrives).unwrap();
            let min_idx = (0..k).min_by_key(|&i| times[i]).unwrap();
            assert_eq!(out.winner_class, min_idx);
            assert!(!out.metastable_any);
            let latest = *times.iter().max().unwrap();
            assert_eq!(out.completion_time, latest + tree_levels(k) as i64 * d_arb);
            checked += 1;
        }
        assert!(checked > 1000);
    }
}
