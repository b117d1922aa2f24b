use std::fmt::Write as _;

use rand::seq::index::sample;

use super::noise::{noise_stream, NoiseDomain};
use super::{spearman_rho, PdlInstance, Spearman, TimingError};
use crate::bits::BitVector;
use crate::time::Time;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DelaySample {
    pub weight: usize,
    pub trial: usize,
    pub delay: Time,
}

/// Measured delay per (weight, trial) and the rank correlation between
/// Hamming weight and delay.
#[derive(Clone, Debug, PartialEq)]
pub struct Characterization {
    pub samples: Vec<DelaySample>,
    pub spearman: Spearman,
}

impl Characterization {
    pub fn rho(&self) -> f64 {
        self.spearman.rho
    }

    /// Mean delay per weight, in weight order of first appearance.
    pub fn mean_delays(&self) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64, usize)> = Vec::new();
        for s in &self.samples {
            match out.iter_mut().find(|(w, _, _)| *w == s.weight) {
                Some(e) => {
                    e.1 += s.delay.as_ps();
                    e.2 += 1;
                }
                None => out.push((s.weight, s.delay.as_ps(), 1)),
            }
        }
        out.into_iter().map(|(w, sum, n)| (w, sum / n as f64)).collect()
    }

    /// `weight,trial,delay_ps` rows followed by a `rho,,<value>` summary row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,trial,delay_ps\n");
        for s in &self.samples {
            writeln!(out, "{},{},{}", s.weight, s.trial, s.delay.as_ps()).unwrap();
        }
        writeln!(out, "rho,,{}", self.spearman.rho).unwrap();
        out
    }
}

/// Drives `pdl` with random select vectors of each requested Hamming weight.
///
/// Select vectors and jitter are drawn from streams keyed by `seed`, the
/// PDL id and the measurement index, so results are reproducible.
pub fn characterize_pdl(
    pdl: &PdlInstance,
    weights: &[usize],
    trials_per_weight: usize,
    seed: u64,
) -> Result<Characterization, TimingError> {
    let n = pdl.n_elements();
    if let Some(&weight) = weights.iter().find(|&&w| w > n) {
        return Err(TimingError::WeightOutOfRange { weight, n });
    }
    let mut samples = Vec::with_capacity(weights.len() * trials_per_weight);
    let mut transition = 0u64;
    for &weight in weights {
        for trial in 0..trials_per_weight {
            let mut rng = noise_stream(seed, NoiseDomain::Select, pdl.id(), transition);
            let mut select = BitVector::zeros(n);
            for i in sample(&mut rng, n, weight) {
                select.set(i, true);
            }
            let delay = pdl.delay(&select, seed, transition)?;
            samples.push(DelaySample { weight, trial, delay });
            transition += 1;
        }
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.weight as f64).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.delay.as_ps()).collect();
    let spearman = if samples.len() >= 2 {
        spearman_rho(&xs, &ys)?
    } else {
        Spearman {
            rho: 0.0,
            degenerate: true,
        }
    };
    Ok(Characterization { samples, spearman })
}
