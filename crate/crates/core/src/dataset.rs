//! Boolean datasets and raw feature tables, with their CSV/JSON encodings.
//!
//! Boolean dataset CSV: a header row `label,b0,b1,...` followed by one row
//! per sample, bits written as `0`/`1`. Raw table CSV: a header row
//! `label,<feature names...>` followed by rows of real values.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bits::BitVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub label: usize,
    pub features: BitVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub num_features: usize,
    pub samples: Vec<Sample>,
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("sample {index} has {found} features, expected {expected}")]
    Shape {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("sample {index} has label {label}, but the model has {num_classes} classes")]
    Label {
        index: usize,
        label: usize,
        num_classes: usize,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Dataset {
    pub fn new(name: impl Into<String>, num_features: usize, samples: Vec<Sample>) -> Result<Self, DatasetError> {
        let ds = Dataset {
            name: name.into(),
            num_features,
            samples,
        };
        ds.check_shape()?;
        Ok(ds)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn check_shape(&self) -> Result<(), DatasetError> {
        for (index, s) in self.samples.iter().enumerate() {
            if s.features.len() != self.num_features {
                return Err(DatasetError::Shape {
                    index,
                    expected: self.num_features,
                    found: s.features.len(),
                });
            }
        }
        Ok(())
    }

    pub fn check_labels(&self, num_classes: usize) -> Result<(), DatasetError> {
        for (index, s) in self.samples.iter().enumerate() {
            if s.label >= num_classes {
                return Err(DatasetError::Label {
                    index,
                    label: s.label,
                    num_classes,
                });
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label");
        for i in 0..self.num_features {
            out.push_str(&format!(",b{i}"));
        }
        out.push('\n');
        for s in &self.samples {
            out.push_str(&s.label.to_string());
            for b in s.features.iter() {
                out.push_str(if b { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }

    /// Parses the Boolean dataset CSV. The header row is optional.
    pub fn from_csv(name: impl Into<String>, text: &str) -> Result<Self, DatasetError> {
        let mut samples = Vec::new();
        let mut width: Option<usize> = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with("label")) {
                continue;
            }
            let mut fields = line.split(',');
            let label = parse_field::<usize>(fields.next(), i + 1, "label")?;
            let bits = fields
                .map(|f| match f.trim() {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(DatasetError::Parse {
                        line: i + 1,
                        message: format!("expected 0 or 1, found {other:?}"),
                    }),
                })
                .collect::<Result<BitVector, _>>()?;
            match width {
                None => width = Some(bits.len()),
                Some(w) if w != bits.len() => {
                    return Err(DatasetError::Parse {
                        line: i + 1,
                        message: format!("expected {w} feature columns, found {}", bits.len()),
                    })
                }
                _ => {}
            }
            samples.push(Sample { label, features: bits });
        }
        Dataset::new(name, width.unwrap_or(0), samples)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dataset serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, DatasetError> {
        let ds: Dataset = serde_json::from_str(text)?;
        ds.check_shape()?;
        Ok(ds)
    }

    /// Loads a dataset, choosing JSON for `.json` files and CSV otherwise.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, DatasetError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Self::from_csv(name, &text)
        }
    }
}

/// Real-valued features with integer class labels, prior to Booleanization.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTable {
    pub name: String,
    pub feature_names: Vec<String>,
    pub labels: Vec<usize>,
    pub rows: Vec<Vec<f64>>,
}

impl RawTable {
    pub fn from_csv(name: impl Into<String>, text: &str) -> Result<Self, DatasetError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(DatasetError::Parse {
            line: 1,
            message: "missing header row".into(),
        })?;
        let feature_names: Vec<String> = header.split(',').skip(1).map(|s| s.trim().to_string()).collect();
        let mut labels = Vec::new();
        let mut rows = Vec::new();
        for (i, line) in lines {
            let mut fields = line.split(',');
            labels.push(parse_field::<usize>(fields.next(), i + 1, "label")?);
            let row = fields
                .map(|f| parse_field::<f64>(Some(f), i + 1, "feature"))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != feature_names.len() {
                return Err(DatasetError::Parse {
                    line: i + 1,
                    message: format!("expected {} features, found {}", feature_names.len(), row.len()),
                });
            }
            rows.push(row);
        }
        Ok(RawTable {
            name: name.into(),
            feature_names,
            labels,
            rows,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DatasetError> {
        let path = path.as_ref();
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::from_csv(name, &fs::read_to_string(path)?)
    }

    pub fn num_features(&self) -> usize {
        self.feature_names.len()
    }
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize, what: &str) -> Result<T, DatasetError> {
    let raw = field.ok_or_else(|| DatasetError::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    raw.trim().parse().map_err(|_| DatasetError::Parse {
        line,
        message: format!("invalid {what} {raw:?}"),
    })
}
