use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound for any smoothing parameter.
pub const DEFAULT_UPPER_BOUND: f64 = 10_000.0;

/// Granularity of the smoothing parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothingKind {
    /// One bandwidth shared by every class and feature.
    Scalar,
    /// One bandwidth per class.
    PerClass,
    /// One bandwidth per feature, shared by all classes.
    #[default]
    PerFeature,
    /// One bandwidth per (class, feature) pair.
    Matrix,
}

impl SmoothingKind {
    /// Length of the parameter vector for `n_classes` × `n_features`.
    pub fn dimension(self, n_classes: usize, n_features: usize) -> usize {
        match self {
            Self::Scalar => 1,
            Self::PerClass => n_classes,
            Self::PerFeature => n_features,
            Self::Matrix => n_classes * n_features,
        }
    }
}

/// Smoothing parameters of a PNN. Each class sees a diagonal bandwidth
/// matrix: `h·I` for [`Scalar`](Self::Scalar), `h_g·I` for
/// [`PerClass`](Self::PerClass), `diag(h)` for
/// [`PerFeature`](Self::PerFeature) and `diag(row g)` for
/// [`Matrix`](Self::Matrix).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "kebab-case")]
pub enum SmoothingSpec {
    Scalar(f64),
    PerClass(Vec<f64>),
    PerFeature(Vec<f64>),
    /// Row-major `n_classes × n_features`.
    Matrix { n_features: usize, values: Vec<f64> },
}

impl SmoothingSpec {
    /// Builds a spec of `kind` from a flat parameter vector, as produced by
    /// an optimizer.
    pub fn from_vector(kind: SmoothingKind, values: &[f64], n_classes: usize, n_features: usize) -> Result<Self> {
        let expected = kind.dimension(n_classes, n_features);
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: values.len() });
        }
        let spec = match kind {
            SmoothingKind::Scalar => Self::Scalar(values[0]),
            SmoothingKind::PerClass => Self::PerClass(values.to_vec()),
            SmoothingKind::PerFeature => Self::PerFeature(values.to_vec()),
            SmoothingKind::Matrix => Self::Matrix {
                n_features,
                values: values.to_vec(),
            },
        };
        spec.check_values(DEFAULT_UPPER_BOUND)?;
        Ok(spec)
    }

    pub fn kind(&self) -> SmoothingKind {
        match self {
            Self::Scalar(_) => SmoothingKind::Scalar,
            Self::PerClass(_) => SmoothingKind::PerClass,
            Self::PerFeature(_) => SmoothingKind::PerFeature,
            Self::Matrix { .. } => SmoothingKind::Matrix,
        }
    }

    /// The parameters as a flat vector (inverse of [`from_vector`](Self::from_vector)).
    pub fn as_vector(&self) -> Vec<f64> {
        match self {
            Self::Scalar(h) => vec![*h],
            Self::PerClass(v) | Self::PerFeature(v) | Self::Matrix { values: v, .. } => v.clone(),
        }
    }

    /// All entries must be finite, strictly positive and at most `upper`.
    pub fn check_values(&self, upper: f64) -> Result<()> {
        match self.as_vector().into_iter().find(|&h| !(h > 0.0 && h <= upper)) {
            Some(h) => Err(Error::InvalidSmoothing(format!(
                "bandwidth {h} outside (0, {upper}]"
            ))),
            None => Ok(()),
        }
    }

    /// Checks that the variant's dimensions fit `n_classes × n_features`.
    pub fn check_shape(&self, n_classes: usize, n_features: usize) -> Result<()> {
        let expected = self.kind().dimension(n_classes, n_features);
        let got = self.as_vector().len();
        if got != expected {
            return Err(Error::DimensionMismatch { expected, got });
        }
        if let Self::Matrix { n_features: nf, .. } = self {
            if *nf != n_features {
                return Err(Error::DimensionMismatch { expected: n_features, got: *nf });
            }
        }
        Ok(())
    }

    /// Diagonal of the bandwidth matrix used for class `class`, written to
    /// `out` (length `n_features`).
    pub fn class_diagonal(&self, class: usize, out: &mut [f64]) {
        match self {
            Self::Scalar(h) => out.fill(*h),
            Self::PerClass(v) => out.fill(v[class]),
            Self::PerFeature(v) => out.copy_from_slice(v),
            Self::Matrix { n_features, values } => {
                out.copy_from_slice(&values[class * n_features..(class + 1) * n_features])
            }
        }
    }

    /// True when every class shares the same bandwidth matrix.
    pub fn is_class_independent(&self) -> bool {
        matches!(self, Self::Scalar(_) | Self::PerFeature(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_per_kind() {
        assert_eq!(SmoothingKind::Scalar.dimension(3, 4), 1);
        assert_eq!(SmoothingKind::PerClass.dimension(3, 4), 3);
        assert_eq!(SmoothingKind::PerFeature.dimension(3, 4), 4);
        assert_eq!(SmoothingKind::Matrix.dimension(3, 4), 12);
    }

    #[test]
    fn class_diagonals() {
        let mut d = [0.0; 2];
        let m = SmoothingSpec::from_vector(SmoothingKind::Matrix, &[1.0, 2.0, 3.0, 4.0], 2, 2).unwrap();
        m.class_diagonal(1, &mut d);
        assert_eq!(d, [3.0, 4.0]);
        let c = SmoothingSpec::from_vector(SmoothingKind::PerClass, &[0.5, 0.7], 2, 2).unwrap();
        c.class_diagonal(1, &mut d);
        assert_eq!(d, [0.7, 0.7]);
        assert!(!c.is_class_independent());
        let f = SmoothingSpec::PerFeature(vec![0.1, 0.2]);
        f.class_diagonal(0, &mut d);
        assert_eq!(d, [0.1, 0.2]);
    }

    #[test]
    fn rejects_bad_values_and_shapes() {
        assert!(SmoothingSpec::from_vector(SmoothingKind::PerFeature, &[1.0, 0.0], 2, 2).is_err());
        assert!(SmoothingSpec::from_vector(SmoothingKind::PerFeature, &[1.0, 2e4], 2, 2).is_err());
        assert!(SmoothingSpec::from_vector(SmoothingKind::PerFeature, &[1.0], 2, 2).is_err());
        assert!(SmoothingSpec::PerClass(vec![1.0; 3]).check_shape(2, 5).is_err());
        assert!(SmoothingSpec::Scalar(f64::NAN).check_values(10.0).is_err());
    }

    #[test]
    fn vector_round_trip() {
        let s = SmoothingSpec::from_vector(SmoothingKind::Matrix, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], 2, 3).unwrap();
        assert_eq!(s.as_vector(), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(s.kind(), SmoothingKind::Matrix);
    }
}
