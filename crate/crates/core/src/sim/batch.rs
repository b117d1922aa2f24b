use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{latency_upper_bound, run_inference, InferenceTrace, PdlBank, SimError, StageConfig};
use crate::dataset::Dataset;
use crate::model::TmModel;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub samples: usize,
    pub mean_latency_ps: f64,
    pub min_latency_ps: f64,
    pub max_latency_ps: f64,
    pub std_latency_ps: f64,
    /// Fraction of samples whose prediction matches the dataset label.
    pub accuracy: f64,
    pub metastable_rate: f64,
    pub tie_rate: f64,
    /// Non-tied samples where the simulated class differs from the reference.
    pub oracle_mismatches: usize,
    /// Nominal latency with every element on its slow net.
    pub worst_case_bound_ps: f64,
}

impl BatchSummary {
    pub const CSV_HEADER: &'static str = "samples,mean_latency_ps,min_latency_ps,max_latency_ps,std_latency_ps,accuracy,metastable_rate,tie_rate,oracle_mismatches,worst_case_bound_ps";

    pub fn to_csv(&self) -> String {
        format!(
            "{}\n{},{},{},{},{},{},{},{},{},{}\n",
            Self::CSV_HEADER,
            self.samples,
            self.mean_latency_ps,
            self.min_latency_ps,
            self.max_latency_ps,
            self.std_latency_ps,
            self.accuracy,
            self.metastable_rate,
            self.tie_rate,
            self.oracle_mismatches,
            self.worst_case_bound_ps
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchResult {
    pub traces: Vec<InferenceTrace>,
    pub summary: BatchSummary,
}

/// Runs every sample of `data` as consecutive cycles of one stage.
///
/// Sample `i` is cycle `i`; its phase alternates from `stage.phase0`. Each
/// trace is timed from its own `req`.
pub fn run_batch(
    model: &TmModel,
    data: &Dataset,
    bank: &PdlBank,
    stage: &StageConfig,
    seed: u64,
) -> Result<BatchResult, SimError> {
    if data.samples.is_empty() {
        return Err(SimError::EmptyDataset);
    }
    if data.num_features != model.num_features {
        return Err(SimError::DatasetShape {
            expected: model.num_features,
            found: data.num_features,
        });
    }
    let traces = data
        .samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let cycle = i as u64;
            run_inference(model, &s.features, bank, stage, stage.phase_of(cycle), cycle, seed)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let n = traces.len() as f64;
    let lat: Vec<i64> = traces.iter().map(|t| t.latency.as_fs()).collect();
    let total: i128 = lat.iter().map(|&l| l as i128).sum();
    let mean_fs = total as f64 / n;
    let var_fs = lat.iter().map(|&l| (l as f64 - mean_fs).powi(2)).sum::<f64>() / n;
    let ps = |fs: f64| fs / 1_000.0;
    let correct = traces
        .iter()
        .zip(&data.samples)
        .filter(|(t, s)| t.predicted_class == s.label)
        .count();
    let rate = |f: &dyn Fn(&InferenceTrace) -> bool| traces.iter().filter(|t| f(t)).count() as f64 / n;
    let profile = bank.pdls.first().map(|p| *p.profile()).unwrap_or_default();
    let summary = BatchSummary {
        samples: traces.len(),
        mean_latency_ps: ps(mean_fs),
        min_latency_ps: ps(lat.iter().copied().min().unwrap_or(0) as f64),
        max_latency_ps: ps(lat.iter().copied().max().unwrap_or(0) as f64),
        std_latency_ps: ps(var_fs.sqrt()),
        accuracy: correct as f64 / n,
        metastable_rate: rate(&|t| t.metastable),
        tie_rate: rate(&|t| t.tie_reference),
        oracle_mismatches: traces
            .iter()
            .filter(|t| !t.tie_reference && t.predicted_class != t.reference_class)
            .count(),
        worst_case_bound_ps: latency_upper_bound(model, &profile, stage).as_ps(),
    };
    Ok(BatchResult { traces, summary })
}

/// One row per transition: `sample,event,node,time_ps,polarity`.
pub fn traces_to_csv(traces: &[InferenceTrace]) -> String {
    let mut out = String::from("sample,event,node,time_ps,polarity\n");
    for tr in traces {
        for e in tr.event_log.iter().filter(|e| e.cycle == tr.cycle) {
            writeln!(
                out,
                "{},{},{},{},{}",
                tr.cycle,
                e.node.kind(),
                e.node,
                e.time.as_ps(),
                e.edge.as_str()
            )
            .unwrap();
        }
    }
    out
}
