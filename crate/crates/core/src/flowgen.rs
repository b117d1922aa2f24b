//! Placement, pin-assignment and routing constraint scripts for delay lines.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SliceCoord {
    pub column: u32,
    pub row: u32,
}

impl fmt::Display for SliceCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SLICE_X{}Y{}", self.column, self.row)
    }
}

fn default_prefix() -> String {
    "PDL".into()
}

fn default_leaf() -> String {
    "MUX".into()
}

/// Grid layout of `num_pdls` delay lines; lines are spaced by
/// `column_stride` and cascaded elements stack upward by `row_stride`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutPlan {
    pub num_pdls: usize,
    pub elements_per_pdl: usize,
    pub origin: SliceCoord,
    pub bel_name: String,
    pub column_stride: u32,
    pub row_stride: u32,
    /// Instance `PDL{j}_{i}`.
    #[serde(default = "default_prefix")]
    pub cell_prefix: String,
    /// Cell `PDL{j}_{i}/MUX`.
    #[serde(default = "default_leaf")]
    pub cell_leaf: String,
}

impl LayoutPlan {
    pub fn new(num_pdls: usize, elements_per_pdl: usize, origin: SliceCoord, bel_name: impl Into<String>) -> Self {
        LayoutPlan {
            num_pdls,
            elements_per_pdl,
            origin,
            bel_name: bel_name.into(),
            column_stride: 2,
            row_stride: 1,
            cell_prefix: default_prefix(),
            cell_leaf: default_leaf(),
        }
    }

    /// The two cross-coupled gates of each arbiter, `ARB{m}_{0,1}/GATE`,
    /// stacked in adjacent slices.
    pub fn arbiter_gates(num_arbiters: usize, origin: SliceCoord, bel_name: impl Into<String>) -> Self {
        LayoutPlan {
            cell_prefix: "ARB".into(),
            cell_leaf: "GATE".into(),
            ..LayoutPlan::new(num_arbiters, 2, origin, bel_name)
        }
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        if self.column_stride == 0 || self.row_stride == 0 {
            return Err(FlowError::ZeroStride);
        }
        if self.row_stride != 1 {
            return Err(FlowError::NonAdjacent(self.row_stride));
        }
        if self.bel_name.is_empty() || self.cell_prefix.is_empty() || self.cell_leaf.is_empty() {
            return Err(FlowError::EmptyName);
        }
        Ok(())
    }
}

/// One placed delay element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub pdl: usize,
    pub element: usize,
    /// `PDL0_0`; nets are named `PDL0_0/I0`.
    pub instance: String,
    /// `PDL0_0/MUX`.
    pub cell: String,
    pub site: SliceCoord,
    pub bel: String,
}

/// Coordinates, names and BEL of every element of `plan`.
pub fn plan_placement(plan: &LayoutPlan) -> Result<Vec<Placement>, FlowError> {
    plan.validate()?;
    let mut out = Vec::with_capacity(plan.num_pdls * plan.elements_per_pdl);
    let mut seen: HashMap<SliceCoord, String> = HashMap::new();
    for j in 0..plan.num_pdls {
        for i in 0..plan.elements_per_pdl {
            let column = j
                .checked_mul(plan.column_stride as usize)
                .and_then(|c| c.checked_add(plan.origin.column as usize))
                .and_then(|c| u32::try_from(c).ok());
            let row = i
                .checked_mul(plan.row_stride as usize)
                .and_then(|r| r.checked_add(plan.origin.row as usize))
                .and_then(|r| u32::try_from(r).ok());
            let (Some(column), Some(row)) = (column, row) else {
                return Err(FlowError::OutOfRange { pdl: j, element: i });
            };
            let site = SliceCoord { column, row };
            let instance = format!("{}{j}_{i}", plan.cell_prefix);
            if let Some(prev) = seen.insert(site, instance.clone()) {
                return Err(FlowError::Collision {
                    site,
                    first: prev,
                    second: instance,
                });
            }
            out.push(Placement {
                pdl: j,
                element: i,
                cell: format!("{instance}/{}", plan.cell_leaf),
                instance,
                site,
                bel: plan.bel_name.clone(),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetryViolation {
    Collision { site: SliceCoord, cells: (String, String) },
    /// Element count or relative position differs from the first line.
    Incongruent { cell: String, reference: String },
    /// Cascaded elements not in vertically adjacent slices.
    NotAdjacent { cell: String, previous: String },
    BelMismatch { cell: String, bel: String, expected: String },
}

impl fmt::Display for SymmetryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryViolation::Collision { site, cells } => {
                write!(f, "{} and {} both placed at {site}", cells.0, cells.1)
            }
            SymmetryViolation::Incongruent { cell, reference } => {
                write!(f, "{cell} is not a column translation of {reference}")
            }
            SymmetryViolation::NotAdjacent { cell, previous } => {
                write!(f, "{cell} is not in the slice directly above {previous}")
            }
            SymmetryViolation::BelMismatch { cell, bel, expected } => {
                write!(f, "{cell} uses BEL {bel}, expected {expected}")
            }
        }
    }
}

/// Checks congruence, adjacency of cascaded elements and BEL uniformity.
pub fn lint_symmetry(placements: &[Placement]) -> Result<(), Vec<SymmetryViolation>> {
    let mut out = Vec::new();
    let mut seen: HashMap<SliceCoord, &str> = HashMap::new();
    for p in placements {
        if let Some(prev) = seen.insert(p.site, &p.cell) {
            out.push(SymmetryViolation::Collision {
                site: p.site,
                cells: (prev.to_string(), p.cell.clone()),
            });
        }
    }
    if let Some(first) = placements.first() {
        for p in placements.iter().filter(|p| p.bel != first.bel) {
            out.push(SymmetryViolation::BelMismatch {
                cell: p.cell.clone(),
                bel: p.bel.clone(),
                expected: first.bel.clone(),
            });
        }
    }

    let mut lines: BTreeMap<usize, Vec<&Placement>> = BTreeMap::new();
    for p in placements {
        lines.entry(p.pdl).or_default().push(p);
    }
    for line in lines.values_mut() {
        line.sort_by_key(|p| p.element);
        for w in line.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b.site.column != a.site.column || b.site.row != a.site.row + 1 {
                out.push(SymmetryViolation::NotAdjacent {
                    cell: b.cell.clone(),
                    previous: a.cell.clone(),
                });
            }
        }
    }
    let mut iter = lines.values();
    if let Some(reference) = iter.next() {
        for line in iter {
            let shift = line[0].site.column as i64 - reference[0].site.column as i64;
            for (i, p) in line.iter().enumerate() {
                let congruent = reference.get(i).is_some_and(|r| {
                    r.element == p.element
                        && r.site.row == p.site.row
                        && p.site.column as i64 - r.site.column as i64 == shift
                });
                if !congruent {
                    out.push(SymmetryViolation::Incongruent {
                        cell: p.cell.clone(),
                        reference: reference.get(i).unwrap_or(&reference[0]).cell.clone(),
                    });
                }
            }
            if line.len() < reference.len() {
                out.push(SymmetryViolation::Incongruent {
                    cell: line[line.len() - 1].cell.clone(),
                    reference: reference[line.len()].cell.clone(),
                });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Minimal routed net delay (ps) to each physical LUT input pin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct PinDelayTable(BTreeMap<String, f64>);

impl PinDelayTable {
    pub fn new(delays: BTreeMap<String, f64>) -> Result<Self, FlowError> {
        if delays.is_empty() {
            return Err(FlowError::TooFewPins(0));
        }
        if let Some((pin, &d)) = delays.iter().find(|(_, d)| !(d.is_finite() && **d > 0.0)) {
            return Err(FlowError::BadPinDelay { pin: pin.clone(), delay: d });
        }
        Ok(PinDelayTable(delays))
    }

    pub fn delays(&self) -> &BTreeMap<String, f64> {
        &self.0
    }
}

impl TryFrom<BTreeMap<String, f64>> for PinDelayTable {
    type Error = FlowError;

    fn try_from(m: BTreeMap<String, f64>) -> Result<Self, FlowError> {
        PinDelayTable::new(m)
    }
}

impl From<PinDelayTable> for BTreeMap<String, f64> {
    fn from(t: PinDelayTable) -> Self {
        t.0
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for PinDelayTable {
    /// Panics on an invalid table; use [`PinDelayTable::new`] for checked input.
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        PinDelayTable::new(iter.into_iter().map(|(k, v)| (k.into(), v)).collect()).expect("invalid pin delay table")
    }
}

/// Physical pins for the low- and high-latency nets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinSelection {
    pub low: String,
    pub high: String,
}

/// Fastest and second-fastest pins; equal delays fall back to name order.
pub fn select_pins(table: &PinDelayTable) -> Result<PinSelection, FlowError> {
    let mut pins: Vec<(&String, f64)> = table.0.iter().map(|(k, &v)| (k, v)).collect();
    if pins.len() < 2 {
        return Err(FlowError::TooFewPins(pins.len()));
    }
    pins.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));
    Ok(PinSelection {
        low: pins[0].0.clone(),
        high: pins[1].0.clone(),
    })
}

/// Logical cell pins driven by the low- and high-latency nets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalPins {
    pub low: String,
    pub high: String,
}

impl Default for LogicalPins {
    fn default() -> Self {
        LogicalPins {
            low: "I1".into(),
            high: "I0".into(),
        }
    }
}

/// Routed-delay bounds (ps) for the two nets of every element.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoutingWindow {
    pub low_max_ps: f64,
    pub high_min_ps: f64,
    pub high_max_ps: f64,
}

impl Default for RoutingWindow {
    fn default() -> Self {
        RoutingWindow {
            low_max_ps: 500.0,
            high_min_ps: 700.0,
            high_max_ps: 800.0,
        }
    }
}

impl RoutingWindow {
    pub fn validate(&self) -> Result<(), FlowError> {
        let ok = [self.low_max_ps, self.high_min_ps, self.high_max_ps]
            .iter()
            .all(|v| v.is_finite())
            && self.high_min_ps >= 0.0
            && self.high_min_ps >= self.low_max_ps
            && self.high_max_ps > self.high_min_ps;
        if ok {
            Ok(())
        } else {
            Err(FlowError::BadWindow(*self))
        }
    }
}

/// Placement, pin and routing constraints for every element of `plan`.
pub fn emit_scripts(
    plan: &LayoutPlan,
    pins: &PinSelection,
    logical: &LogicalPins,
    window: &RoutingWindow,
) -> Result<String, FlowError> {
    window.validate()?;
    if pins.low == pins.high || logical.low == logical.high {
        return Err(FlowError::SamePin);
    }
    let placements = plan_placement(plan)?;
    let mut s = String::new();
    for p in &placements {
        writeln!(s, "set_property BEL {} [get_cells {}]", p.bel, p.cell).unwrap();
        writeln!(s, "set_property LOC {} [get_cells {}]", p.site, p.cell).unwrap();
        writeln!(
            s,
            "set_property LOCK_PINS {{{}:{} {}:{}}} [get_cells {}]",
            logical.low, pins.low, logical.high, pins.high, p.cell
        )
        .unwrap();
    }
    s.push_str("route_design -unroute\n");
    for p in &placements {
        writeln!(
            s,
            "route_design -pins [get_pins {}/{}] -max_delay {}",
            p.cell, logical.low, window.low_max_ps
        )
        .unwrap();
        writeln!(
            s,
            "route_design -pins [get_pins {}/{}] -max_delay {} -min_delay {}",
            p.cell, logical.high, window.high_max_ps, window.high_min_ps
        )
        .unwrap();
    }
    s.push_str("route_design -preserve\n");
    for p in &placements {
        writeln!(
            s,
            "set_property is_route_fixed 1 [get_nets {{{0}/{1} {0}/{2}}}]",
            p.instance, logical.low, logical.high
        )
        .unwrap();
    }
    Ok(s)
}

/// Minimal net delays (ps) measured to the six inputs of a 6-input LUT.
pub const LUT6_PIN_DELAYS_PS: [(&str, f64); 6] = [
    ("A1", 1013.0),
    ("A2", 811.0),
    ("A3", 648.0),
    ("A4", 774.0),
    ("A5", 414.0),
    ("A6", 355.0),
];

/// Everything needed for one script, as read from a plan file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub plan: LayoutPlan,
    pub pin_delays: PinDelayTable,
    #[serde(default)]
    pub logical_pins: LogicalPins,
    #[serde(default)]
    pub window: RoutingWindow,
    /// Arbiter gates constrained with the same pins and window.
    #[serde(default)]
    pub arbiters: Option<LayoutPlan>,
}

impl Default for FlowConfig {
    /// One element at `SLICE_X74Y0`, `D6LUT`, with the measured LUT pin delays.
    fn default() -> Self {
        FlowConfig {
            plan: LayoutPlan::new(1, 1, SliceCoord { column: 74, row: 0 }, "D6LUT"),
            pin_delays: LUT6_PIN_DELAYS_PS.into_iter().collect(),
            logical_pins: LogicalPins::default(),
            window: RoutingWindow::default(),
            arbiters: None,
        }
    }
}

impl FlowConfig {
    pub fn emit(&self) -> Result<String, FlowError> {
        let pins = select_pins(&self.pin_delays)?;
        let mut out = emit_scripts(&self.plan, &pins, &self.logical_pins, &self.window)?;
        if let Some(arb) = &self.arbiters {
            out.push_str(&emit_scripts(arb, &pins, &self.logical_pins, &self.window)?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("strides must be positive")]
    ZeroStride,
    #[error("row_stride {0} leaves cascaded elements in non-adjacent slices; use 1")]
    NonAdjacent(u32),
    #[error("BEL and cell names must be nonempty")]
    EmptyName,
    #[error("coordinate of element {element} of line {pdl} overflows")]
    OutOfRange { pdl: usize, element: usize },
    #[error("{first} and {second} collide at {site}")]
    Collision { site: SliceCoord, first: String, second: String },
    #[error("need at least 2 pins, got {0}")]
    TooFewPins(usize),
    #[error("pin {pin} has invalid delay {delay}")]
    BadPinDelay { pin: String, delay: f64 },
    #[error("invalid routing window {0:?}")]
    BadWindow(RoutingWindow),
    #[error("low- and high-latency nets must use different pins")]
    SamePin,
}
