//! Conversion of raw features into Boolean inputs.
//!
//! Two schemes are supported: grayscale thresholding (`pixel > threshold`,
//! strict) and quantile binning into one-hot groups. Quantile bin edges are
//! fitted on a training split only; a value equal to an edge falls into the
//! lower bin.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitVector;
use crate::dataset::{Dataset, RawTable, Sample};

/// Threshold used for MNIST grayscale images.
pub const MNIST_THRESHOLD: u8 = 75;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BooleanizeError {
    #[error("need at least 2 bins, got {0}")]
    TooFewBins(usize),
    #[error("training split is empty")]
    EmptyTraining,
    #[error("non-finite value at row {row}, feature {feature}")]
    NonFinite { row: usize, feature: usize },
    #[error("row {row} has {found} features, expected {expected}")]
    Shape {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("training index {0} out of range")]
    BadIndex(usize),
    #[error("pixel value {value} at row {row}, column {column} is not an integer in 0..=255")]
    BadPixel { row: usize, column: usize, value: f64 },
    #[error("train fraction must lie in (0, 1], got {0}")]
    BadFraction(f64),
}

/// Bit `i` is set iff `pixels[i] > threshold`.
pub fn booleanize_threshold(pixels: &[u8], threshold: u8) -> BitVector {
    pixels.iter().map(|&p| p > threshold).collect()
}

/// Thresholds every row of a grayscale table.
pub fn threshold_table(table: &RawTable, threshold: u8) -> Result<Dataset, BooleanizeError> {
    let samples = table
        .rows
        .iter()
        .zip(&table.labels)
        .enumerate()
        .map(|(row, (values, &label))| {
            let pixels = values
                .iter()
                .enumerate()
                .map(|(column, &v)| {
                    if v.fract() == 0.0 && (0.0..=255.0).contains(&v) {
                        Ok(v as u8)
                    } else {
                        Err(BooleanizeError::BadPixel { row, column, value: v })
                    }
                })
                .collect::<Result<Vec<u8>, _>>()?;
            Ok(Sample {
                label,
                features: booleanize_threshold(&pixels, threshold),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Dataset {
        name: table.name.clone(),
        num_features: table.num_features(),
        samples,
    })
}

/// Per-feature quantile bin edges.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantileBinner {
    bins: usize,
    /// `edges[f]` holds the `bins - 1` interior edges of feature `f`, ascending.
    edges: Vec<Vec<f64>>,
}

impl QuantileBinner {
    /// Fits edges at the `k / bins` empirical quantiles (linear interpolation
    /// between order statistics) of each feature over `train`.
    pub fn fit<'a, I>(train: I, bins: usize) -> Result<Self, BooleanizeError>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        if bins < 2 {
            return Err(BooleanizeError::TooFewBins(bins));
        }
        let rows: Vec<&[f64]> = train.into_iter().collect();
        let width = rows.first().ok_or(BooleanizeError::EmptyTraining)?.len();
        let mut columns = vec![Vec::with_capacity(rows.len()); width];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(BooleanizeError::Shape {
                    row: r,
                    expected: width,
                    found: row.len(),
                });
            }
            for (f, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(BooleanizeError::NonFinite { row: r, feature: f });
                }
                columns[f].push(v);
            }
        }
        let edges = columns
            .into_iter()
            .map(|mut col| {
                col.sort_by(f64::total_cmp);
                (1..bins)
                    .map(|k| quantile_sorted(&col, k as f64 / bins as f64))
                    .collect()
            })
            .collect();
        Ok(QuantileBinner { bins, edges })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn edges(&self) -> &[Vec<f64>] {
        &self.edges
    }

    pub fn num_boolean_features(&self) -> usize {
        self.edges.len() * self.bins
    }

    /// Bin index of `value` for feature `f`: the number of edges strictly below it.
    pub fn bin_of(&self, f: usize, value: f64) -> usize {
        self.edges[f].iter().filter(|&&e| value > e).count()
    }

    /// One-hot encodes a row: feature `f` occupies bits `f*bins .. (f+1)*bins`.
    pub fn encode(&self, row: &[f64], row_index: usize) -> Result<BitVector, BooleanizeError> {
        if row.len() != self.edges.len() {
            return Err(BooleanizeError::Shape {
                row: row_index,
                expected: self.edges.len(),
                found: row.len(),
            });
        }
        let mut bits = BitVector::zeros(self.num_boolean_features());
        for (f, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(BooleanizeError::NonFinite { row: row_index, feature: f });
            }
            bits.set(f * self.bins + self.bin_of(f, v), true);
        }
        Ok(bits)
    }
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Booleanizes every row of `table` with edges fitted on the rows listed in `train`.
pub fn booleanize_quantile(
    table: &RawTable,
    train: &[usize],
    bins: usize,
) -> Result<Dataset, BooleanizeError> {
    let train_rows = train
        .iter()
        .map(|&i| table.rows.get(i).map(Vec::as_slice).ok_or(BooleanizeError::BadIndex(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let binner = QuantileBinner::fit(train_rows, bins)?;
    let samples = table
        .rows
        .iter()
        .zip(&table.labels)
        .enumerate()
        .map(|(i, (row, &label))| {
            Ok(Sample {
                label,
                features: binner.encode(row, i)?,
            })
        })
        .collect::<Result<Vec<_>, BooleanizeError>>()?;
    Ok(Dataset {
        name: table.name.clone(),
        num_features: binner.num_boolean_features(),
        samples,
    })
}

/// Seeded shuffle split; returns the sorted training row indices.
pub fn train_split(num_rows: usize, train_fraction: f64, seed: u64) -> Result<Vec<usize>, BooleanizeError> {
    if !(train_fraction > 0.0 && train_fraction <= 1.0) {
        return Err(BooleanizeError::BadFraction(train_fraction));
    }
    let mut idx: Vec<usize> = (0..num_rows).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = ((num_rows as f64 * train_fraction).round() as usize).clamp(1.min(num_rows), num_rows);
    let mut train = idx[..n_train].to_vec();
    train.sort_unstable();
    Ok(train)
}
