//! Labeled numeric datasets: the in-memory [`Dataset`], canonical CSV
//! ingestion, stratified splitting and the benchmark registry.

mod csv;
pub mod fetch;
mod registry;
mod split;

pub use self::csv::{load_csv, write_csv, LABEL_COLUMN};
pub use self::registry::{DatasetDescriptor, Registry, SourceFormat};
pub use self::split::{stratified_split, SplitSpec};

use crate::error::{Error, Result};

/// A labeled feature matrix. Rows are patterns, columns are features and
/// labels are class indices in `0..n_classes`.
///
/// Datasets built with [`Dataset::new`] have every class populated. Subsets
/// (e.g. a test split) keep the parent's class metadata and may leave some
/// classes empty.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    n_features: usize,
    labels: Vec<usize>,
    class_counts: Vec<usize>,
    feature_names: Vec<String>,
    class_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from row vectors. The number of classes is
    /// `max(label) + 1`; every class in that range must occur.
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        let n_classes = labels.iter().max().map_or(0, |m| m + 1);
        Self::with_classes(rows, labels, n_classes)
    }

    pub fn with_classes(rows: Vec<Vec<f64>>, labels: Vec<usize>, n_classes: usize) -> Result<Self> {
        let n_features = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != n_features) {
            return Err(Error::InvalidDataset(format!(
                "row {bad} has {} features, expected {n_features}",
                rows[bad].len()
            )));
        }
        let features = rows.into_iter().flatten().collect();
        Self::from_flat(features, n_features, labels, n_classes)
    }

    /// Builds a dataset from a row-major feature buffer.
    pub fn from_flat(
        features: Vec<f64>,
        n_features: usize,
        labels: Vec<usize>,
        n_classes: usize,
    ) -> Result<Self> {
        let ds = Self::from_flat_unchecked_counts(features, n_features, labels, n_classes)?;
        if let Some(j) = ds.class_counts.iter().position(|&c| c == 0) {
            return Err(Error::EmptyClass(j));
        }
        Ok(ds)
    }

    fn from_flat_unchecked_counts(
        features: Vec<f64>,
        n_features: usize,
        labels: Vec<usize>,
        n_classes: usize,
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if n_features == 0 {
            return Err(Error::InvalidDataset("no feature columns".into()));
        }
        if features.len() != labels.len() * n_features {
            return Err(Error::DimensionMismatch {
                expected: labels.len() * n_features,
                got: features.len(),
            });
        }
        if let Some(i) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at row {}, column {}",
                i / n_features,
                i % n_features
            )));
        }
        let mut class_counts = vec![0; n_classes];
        for (row, &label) in labels.iter().enumerate() {
            if label >= n_classes {
                return Err(Error::InvalidDataset(format!(
                    "row {row}: label {label} outside 0..{n_classes}"
                )));
            }
            class_counts[label] += 1;
        }
        Ok(Self {
            features,
            n_features,
            labels,
            feature_names: (0..n_features).map(|i| format!("x{i}")).collect(),
            class_names: (0..n_classes).map(|j| j.to_string()).collect(),
            class_counts,
        })
    }

    pub fn with_names(mut self, feature_names: Vec<String>, class_names: Vec<String>) -> Result<Self> {
        if feature_names.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: feature_names.len(),
            });
        }
        if class_names.len() != self.n_classes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_classes(),
                got: class_names.len(),
            });
        }
        self.feature_names = feature_names;
        self.class_names = class_names;
        Ok(self)
    }

    /// Number of patterns `P`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of features `N`.
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Number of classes `G`.
    pub fn n_classes(&self) -> usize {
        self.class_counts.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.n_features)
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_counts(&self) -> &[usize] {
        &self.class_counts
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// Indices of the patterns belonging to class `j`, in row order.
    pub fn class_indices(&self, j: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == j).then_some(i))
            .collect()
    }

    /// Rows at `indices`, in the given order. Class metadata is preserved, so
    /// classes absent from `indices` end up with a zero count.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        let mut class_counts = vec![0; self.n_classes()];
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
            class_counts[self.labels[i]] += 1;
        }
        Self {
            features,
            n_features: self.n_features,
            labels,
            class_counts,
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
        }
    }

    /// Applies `(x - mean) / std` column-wise.
    pub fn standardized(&self, scaler: &Standardizer) -> Result<Self> {
        if scaler.mean.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: scaler.mean.len(),
            });
        }
        let mut out = self.clone();
        for row in out.features.chunks_exact_mut(self.n_features) {
            for ((v, m), s) in row.iter_mut().zip(&scaler.mean).zip(&scaler.std) {
                *v = (*v - m) / s;
            }
        }
        Ok(out)
    }
}

/// Column-wise z-score parameters, fitted on a training split.
#[derive(Clone, Debug, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Fits means and population standard deviations. Constant columns get a
    /// unit scale so they pass through centred but unscaled.
    pub fn fit(ds: &Dataset) -> Self {
        let n = ds.len() as f64;
        let mut mean = vec![0.0; ds.n_features()];
        for row in ds.rows() {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v / n;
            }
        }
        let mut var = vec![0.0; ds.n_features()];
        for row in ds.rows() {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                *s += (v - m).powi(2) / n;
            }
        }
        let std = var
            .into_iter()
            .map(|v| if v > 0.0 { v.sqrt() } else { 1.0 })
            .collect();
        Self { mean, std }
    }
}
