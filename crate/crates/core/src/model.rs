//! Tsetlin Machine model representation, validation, synthesis, and file I/O.
//!
//! Literal ordering inside a clause's include mask is fixed: positions
//! `0..F` are the original features `x_0..x_{F-1}` and positions `F..2F` are
//! their negations `¬x_0..¬x_{F-1}`.

use std::fmt;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;

/// Whether a clause votes for (+1) or against (-1) its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Polarity {
    pub fn sign(self) -> i64 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "+",
            Polarity::Negative => "-",
        })
    }
}

/// A conjunction over included literals with a fixed vote polarity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    /// Length `2F`: originals first, then negations.
    pub include: BitVector,
    pub polarity: Polarity,
}

impl Clause {
    pub fn new(include: BitVector, polarity: Polarity) -> Self {
        Clause { include, polarity }
    }

    /// A clause with no included literals.
    pub fn empty(num_features: usize, polarity: Polarity) -> Self {
        Clause {
            include: BitVector::zeros(2 * num_features),
            polarity,
        }
    }

    /// Builds a clause from literal indices in the `0..2F` ordering.
    pub fn from_literals(num_features: usize, literals: &[usize], polarity: Polarity) -> Self {
        let mut include = BitVector::zeros(2 * num_features);
        for &l in literals {
            include.set(l, true);
        }
        Clause { include, polarity }
    }

    pub fn num_features(&self) -> usize {
        self.include.len() / 2
    }
}

/// A trained (or synthesized) TM: `clauses_per_class` clauses for each class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TmModel {
    pub num_classes: usize,
    pub num_features: usize,
    pub clauses_per_class: usize,
    pub classes: Vec<Vec<Clause>>,
    /// Training annotations (T, s, accuracy, ...). Stored verbatim.
    #[serde(default)]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

/// One violated model invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelViolation {
    TooFewClasses { found: usize },
    NoFeatures,
    BadClauseCount { found: usize },
    ClassCount { expected: usize, found: usize },
    ClauseCount { class: usize, expected: usize, found: usize },
    PolarityImbalance { class: usize, positive: usize, negative: usize },
    MaskLength { class: usize, clause: usize, expected: usize, found: usize },
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModelViolation::TooFewClasses { found } => {
                write!(f, "num_classes must be at least 2, found {found}")
            }
            ModelViolation::NoFeatures => write!(f, "num_features must be at least 1"),
            ModelViolation::BadClauseCount { found } => {
                write!(f, "clauses_per_class must be even and at least 2, found {found}")
            }
            ModelViolation::ClassCount { expected, found } => {
                write!(f, "expected {expected} classes, found {found}")
            }
            ModelViolation::ClauseCount { class, expected, found } => {
                write!(f, "class {class}: expected {expected} clauses, found {found}")
            }
            ModelViolation::PolarityImbalance { class, positive, negative } => write!(
                f,
                "polarity imbalance class {class}: {positive} positive, {negative} negative"
            ),
            ModelViolation::MaskLength { class, clause, expected, found } => write!(
                f,
                "mask length ≠ 2F at class {class}, clause {clause}: expected {expected}, found {found}"
            ),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid model: {}", join_violations(.0))]
    Invalid(Vec<ModelViolation>),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[ModelViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Checks every model invariant, returning all violations found.
pub fn validate_model(model: &TmModel) -> Result<(), Vec<ModelViolation>> {
    let mut errs = Vec::new();
    if model.num_classes < 2 {
        errs.push(ModelViolation::TooFewClasses { found: model.num_classes });
    }
    if model.num_features == 0 {
        errs.push(ModelViolation::NoFeatures);
    }
    let c = model.clauses_per_class;
    if c < 2 || !c.is_multiple_of(2) {
        errs.push(ModelViolation::BadClauseCount { found: c });
    }
    if model.classes.len() != model.num_classes {
        errs.push(ModelViolation::ClassCount {
            expected: model.num_classes,
            found: model.classes.len(),
        });
    }
    let mask_len = 2 * model.num_features;
    for (k, clauses) in model.classes.iter().enumerate() {
        if clauses.len() != c {
            errs.push(ModelViolation::ClauseCount {
                class: k,
                expected: c,
                found: clauses.len(),
            });
        }
        let positive = clauses
            .iter()
            .filter(|cl| cl.polarity == Polarity::Positive)
            .count();
        let negative = clauses.len() - positive;
        if positive != negative {
            errs.push(ModelViolation::PolarityImbalance { class: k, positive, negative });
        }
        for (j, cl) in clauses.iter().enumerate() {
            if cl.include.len() != mask_len {
                errs.push(ModelViolation::MaskLength {
                    class: k,
                    clause: j,
                    expected: mask_len,
                    found: cl.include.len(),
                });
            }
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

/// Synthesizes a model with each literal included independently with
/// probability `include_prob`. Clause polarities alternate, starting with
/// positive at index 0.
pub fn random_model(
    seed: u64,
    num_classes: usize,
    clauses_per_class: usize,
    num_features: usize,
    include_prob: f64,
) -> Result<TmModel, ModelError> {
    if clauses_per_class < 2 || !clauses_per_class.is_multiple_of(2) {
        return Err(ModelError::InvalidParameter(format!(
            "clauses_per_class must be even and at least 2, got {clauses_per_class}"
        )));
    }
    if !(0.0..=1.0).contains(&include_prob) {
        return Err(ModelError::InvalidParameter(format!(
            "include_prob must lie in [0, 1], got {include_prob}"
        )));
    }
    if num_classes < 2 || num_features == 0 {
        return Err(ModelError::InvalidParameter(
            "need at least 2 classes and 1 feature".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = (0..num_classes)
        .map(|_| {
            (0..clauses_per_class)
                .map(|j| {
                    let polarity = if j % 2 == 0 {
                        Polarity::Positive
                    } else {
                        Polarity::Negative
                    };
                    let include = (0..2 * num_features)
                        .map(|_| rng.random_bool(include_prob))
                        .collect();
                    Clause { include, polarity }
                })
                .collect()
        })
        .collect();
    Ok(TmModel {
        num_classes,
        num_features,
        clauses_per_class,
        classes,
        metadata: serde_json::Map::new(),
    })
}

impl TmModel {
    /// Polarity of each clause of class `k`, in clause order.
    pub fn polarities(&self, k: usize) -> Vec<Polarity> {
        self.classes[k].iter().map(|c| c.polarity).collect()
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let model: TmModel = serde_json::from_str(text).map_err(|e| ModelError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        validate_model(&model).map_err(ModelError::Invalid)?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TmModel, ModelError> {
    let text = fs::read_to_string(path)?;
    TmModel::from_json(&text)
}

pub fn save_model(model: &TmModel, path: impl AsRef<Path>) -> Result<(), ModelError> {
    fs::write(path, model.to_json() + "\n")?;
    Ok(())
}
