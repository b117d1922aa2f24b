//! Integer-arithmetic TM inference: clause evaluation, popcount, class sums
//! and argmax. This is the functional ground truth the timing domain is
//! checked against.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitVector;
use crate::dataset::{Dataset, Sample};
use crate::model::{Clause, Polarity, TmModel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("input has {found} features, expected {expected}")]
pub struct LengthMismatch {
    pub expected: usize,
    pub found: usize,
}

/// Evaluates a clause: the AND of all included literals. A clause that
/// includes nothing evaluates to 1.
pub fn eval_clause(clause: &Clause, input: &BitVector) -> Result<bool, LengthMismatch> {
    let f = clause.num_features();
    if input.len() != f || clause.include.len() != 2 * f {
        return Err(LengthMismatch {
            expected: f,
            found: input.len(),
        });
    }
    Ok(clause.include.ones_iter().all(|lit| {
        if lit < f {
            input.get(lit)
        } else {
            !input.get(lit - f)
        }
    }))
}

pub fn popcount(bits: &BitVector) -> usize {
    bits.count_ones()
}

/// Per-class vote totals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassSums {
    pub sums: Vec<i64>,
    pub pos_votes: Vec<usize>,
    pub neg_votes: Vec<usize>,
}

impl ClassSums {
    pub fn num_classes(&self) -> usize {
        self.sums.len()
    }

    /// Builds sums from explicit vote counts.
    pub fn from_votes(pos_votes: Vec<usize>, neg_votes: Vec<usize>) -> Self {
        let sums = pos_votes
            .iter()
            .zip(&neg_votes)
            .map(|(&p, &n)| p as i64 - n as i64)
            .collect();
        ClassSums { sums, pos_votes, neg_votes }
    }

    /// True when no two classes share a sum.
    pub fn all_distinct(&self) -> bool {
        let mut s = self.sums.clone();
        s.sort_unstable();
        s.windows(2).all(|w| w[0] != w[1])
    }
}

/// Output bit of every clause of every class, in clause order.
pub fn clause_outputs(model: &TmModel, input: &BitVector) -> Result<Vec<BitVector>, LengthMismatch> {
    if input.len() != model.num_features {
        return Err(LengthMismatch {
            expected: model.num_features,
            found: input.len(),
        });
    }
    model
        .classes
        .iter()
        .map(|clauses| clauses.iter().map(|c| eval_clause(c, input)).collect())
        .collect()
}

/// Splits clause outputs by polarity and counts the votes of each half.
pub fn votes(outputs: &BitVector, polarities: &[Polarity]) -> (usize, usize) {
    let mut pos = BitVector::zeros(outputs.len());
    let mut neg = BitVector::zeros(outputs.len());
    for (i, (out, pol)) in outputs.iter().zip(polarities).enumerate() {
        match pol {
            Polarity::Positive => pos.set(i, out),
            Polarity::Negative => neg.set(i, out),
        }
    }
    (popcount(&pos), popcount(&neg))
}

pub fn class_sums(model: &TmModel, input: &BitVector) -> Result<ClassSums, LengthMismatch> {
    let outputs = clause_outputs(model, input)?;
    let (pos, neg) = outputs
        .iter()
        .enumerate()
        .map(|(k, out)| votes(out, &model.polarities(k)))
        .unzip();
    Ok(ClassSums::from_votes(pos, neg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Argmax {
    pub class: usize,
    /// Set when two or more classes attain the maximum.
    pub tie: bool,
}

/// Lowest index attaining the maximum, plus a tie flag.
pub fn argmax(values: &[i64]) -> Argmax {
    assert!(!values.is_empty(), "argmax of an empty slice");
    let mut best = 0;
    let mut tie = false;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
            tie = false;
        } else if v == values[best] {
            tie = true;
        }
    }
    Argmax { class: best, tie }
}

pub fn argmax_reference(sums: &ClassSums) -> Argmax {
    argmax(&sums.sums)
}

/// Sign of the ±1 accumulation of a BNN neuron's XNOR outputs; a zero
/// accumulation maps to +1.
pub fn bnn_neuron(xnor_bits: &BitVector) -> i8 {
    let acc = 2 * popcount(xnor_bits) as i64 - xnor_bits.len() as i64;
    if acc >= 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inference {
    pub class: usize,
    pub tie: bool,
    pub sums: ClassSums,
}

pub fn infer_reference(model: &TmModel, input: &BitVector) -> Result<Inference, LengthMismatch> {
    let sums = class_sums(model, input)?;
    let Argmax { class, tie } = argmax_reference(&sums);
    Ok(Inference { class, tie, sums })
}

/// `n` uniformly random inputs labeled with the reference prediction.
pub fn labeled_random_inputs(model: &TmModel, n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|_| {
            let features: BitVector = (0..model.num_features).map(|_| rng.random_bool(0.5)).collect();
            let label = infer_reference(model, &features).expect("input sized to model").class;
            Sample { label, features }
        })
        .collect();
    Dataset {
        name: "random".into(),
        num_features: model.num_features,
        samples,
    }
}
