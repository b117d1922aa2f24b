use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{toggle_model, ArchModel, CostError, LatencyCase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Vary {
    Clauses,
    Classes,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub vary: Vary,
    pub range: Vec<usize>,
    /// Classes when sweeping clauses.
    pub fixed_classes: usize,
    /// Clauses per class when sweeping classes.
    pub fixed_clauses: usize,
    /// Cycles simulated per toggle count.
    pub cycles: usize,
    pub seed: u64,
}

impl SweepParams {
    fn shape(&self, x: usize) -> (usize, usize) {
        match self.vary {
            Vary::Clauses => (self.fixed_classes, x),
            Vary::Classes => (x, self.fixed_clauses),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub arch: String,
    pub x: usize,
    /// Popcount plus argmax latency; worst case for the time-domain design.
    pub latency_ps: Option<f64>,
    pub luts_ffs: u64,
    pub toggles_a01: Option<u64>,
    pub toggles_a05: Option<u64>,
}

/// Evaluates each model at every point of `params.range`.
pub fn sweep_trend(archs: &[ArchModel], params: &SweepParams) -> Result<Vec<TrendPoint>, CostError> {
    if params.range.is_empty() || archs.is_empty() {
        return Err(CostError::EmptyRange);
    }
    let jobs: Vec<(&ArchModel, usize)> = archs
        .iter()
        .flat_map(|a| params.range.iter().map(move |&x| (a, x)))
        .collect();
    jobs.into_par_iter()
        .map(|(arch, x)| {
            let (classes, clauses) = params.shape(x);
            let latency = match arch.total_latency(classes, clauses, LatencyCase::Worst) {
                Ok(t) => Some(t.as_ps()),
                Err(CostError::NoModel { .. }) => None,
                Err(e) => return Err(e),
            };
            let toggles = |activity| match toggle_model(arch, classes, clauses, activity, params.cycles, params.seed) {
                Ok(t) => Ok(Some(t)),
                Err(CostError::NoModel { .. }) => Ok(None),
                Err(e) => Err(e),
            };
            Ok(TrendPoint {
                arch: arch.kind.to_string(),
                x,
                latency_ps: latency,
                luts_ffs: arch.popcount_resources(classes, clauses)?,
                toggles_a01: toggles(0.1)?,
                toggles_a05: toggles(0.5)?,
            })
        })
        .collect()
}

/// `arch,x,latency_ps,luts_ffs,toggles_a01,toggles_a05`; missing models are blank.
pub fn trend_csv(points: &[TrendPoint]) -> String {
    let opt = |v: Option<String>| v.unwrap_or_default();
    let mut out = String::from("arch,x,latency_ps,luts_ffs,toggles_a01,toggles_a05\n");
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            p.arch,
            p.x,
            opt(p.latency_ps.map(|v| v.to_string())),
            p.luts_ffs,
            opt(p.toggles_a01.map(|v| v.to_string())),
            opt(p.toggles_a05.map(|v| v.to_string())),
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::ArchKind;

    fn all() -> Vec<ArchModel> {
        ArchKind::ALL.iter().map(|&k| ArchModel::new(k)).collect()
    }

    #[test]
    fn classes_sweep_shapes() {
        let p = SweepParams {
            vary: Vary::Classes,
            range: (2..=10).collect(),
            fixed_classes: 0,
            fixed_clauses: 100,
            cycles: 20,
            seed: 1,
        };
        let pts = sweep_trend(&all(), &p).unwrap();
        assert_eq!(pts.len(), 4 * 9);
        let lat = |arch: &str| -> Vec<f64> {
            pts.iter().filter(|q| q.arch == arch).map(|q| q.latency_ps.unwrap()).collect()
        };
        let td = lat("time_domain");
        let ratio = td.iter().cloned().fold(0.0, f64::max) / td.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(ratio <= 1.2);
        for arch in ["generic_adder", "fpt18_ripple"] {
            assert!(lat(arch).windows(2).all(|w| w[1] > w[0]));
        }
        assert!(pts.iter().filter(|q| q.arch == "async21_dualrail").all(|q| q.latency_ps.is_none()));
    }

    #[test]
    fn clauses_sweep_resources_increase() {
        let p = SweepParams {
            vary: Vary::Clauses,
            range: (10..=100).step_by(10).collect(),
            fixed_classes: 6,
            fixed_clauses: 0,
            cycles: 5,
            seed: 1,
        };
        let pts = sweep_trend(&all(), &p).unwrap();
        for arch in ArchKind::ALL {
            let r: Vec<u64> = pts.iter().filter(|q| q.arch == arch.as_str()).map(|q| q.luts_ffs).collect();
            assert!(r.windows(2).all(|w| w[1] > w[0]), "{arch}");
        }
        let csv = trend_csv(&pts);
        assert!(csv.starts_with("arch,x,latency_ps,luts_ffs,toggles_a01,toggles_a05\n"));
        assert!(csv.contains("\nasync21_dualrail,10,,"));
    }

    #[test]
    fn empty_range() {
        let p = SweepParams {
            vary: Vary::Clauses,
            range: vec![],
            fixed_classes: 2,
            fixed_clauses: 2,
            cycles: 1,
            seed: 0,
        };
        assert_eq!(sweep_trend(&all(), &p), Err(CostError::EmptyRange));
    }
}
