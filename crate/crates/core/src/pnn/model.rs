use serde::{Deserialize, Serialize};

use super::kernel::cauchy_kernel;
use super::smoothing::SmoothingSpec;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Intensity `c` of the per-pattern smoothing modification and the floor
/// applied to densities before taking logarithms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModificationConfig {
    pub intensity: f64,
    pub density_floor: f64,
}

impl Default for ModificationConfig {
    fn default() -> Self {
        Self {
            intensity: 0.0,
            density_floor: 1e-300,
        }
    }
}

impl ModificationConfig {
    pub fn new(intensity: f64, density_floor: f64) -> Result<Self> {
        if !(intensity >= 0.0 && intensity.is_finite()) {
            return Err(Error::InvalidConfig(format!("modification intensity must be >= 0, got {intensity}")));
        }
        if density_floor.is_nan() || density_floor <= 0.0 {
            return Err(Error::InvalidConfig(format!("density floor must be > 0, got {density_floor}")));
        }
        Ok(Self { intensity, density_floor })
    }
}

/// A trained PNN: the pattern layer (training patterns), the smoothing
/// parameters and one modification coefficient per pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct PnnModel {
    patterns: Dataset,
    smoothing: SmoothingSpec,
    modification: Vec<f64>,
    by_class: Vec<Vec<usize>>,
}

impl PnnModel {
    pub fn new(patterns: Dataset, smoothing: SmoothingSpec) -> Result<Self> {
        smoothing.check_shape(patterns.n_classes(), patterns.n_features())?;
        smoothing.check_values(f64::MAX)?;
        if let Some(j) = patterns.class_counts().iter().position(|&c| c == 0) {
            return Err(Error::EmptyClass(j));
        }
        let by_class = (0..patterns.n_classes()).map(|j| patterns.class_indices(j)).collect();
        let modification = vec![1.0; patterns.len()];
        Ok(Self {
            patterns,
            smoothing,
            modification,
            by_class,
        })
    }

    /// Replaces the per-pattern modification coefficients.
    pub fn with_modification(mut self, s: Vec<f64>) -> Result<Self> {
        if s.len() != self.patterns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.patterns.len(),
                got: s.len(),
            });
        }
        if s.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidConfig("modification coefficients must be positive".into()));
        }
        self.modification = s;
        Ok(self)
    }

    /// Swaps in new smoothing parameters, keeping patterns and modification.
    pub fn with_smoothing(mut self, smoothing: SmoothingSpec) -> Result<Self> {
        smoothing.check_shape(self.patterns.n_classes(), self.patterns.n_features())?;
        smoothing.check_values(f64::MAX)?;
        self.smoothing = smoothing;
        Ok(self)
    }

    pub fn patterns(&self) -> &Dataset {
        &self.patterns
    }

    pub fn smoothing(&self) -> &SmoothingSpec {
        &self.smoothing
    }

    pub fn modification(&self) -> &[f64] {
        &self.modification
    }

    pub fn n_classes(&self) -> usize {
        self.patterns.n_classes()
    }

    fn check_query(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.patterns.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.patterns.n_features(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Density estimate of class `class` at `x`.
    pub fn class_density(&self, x: &[f64], class: usize) -> Result<f64> {
        self.check_query(x)?;
        if class >= self.n_classes() {
            return Err(Error::InvalidConfig(format!("class {class} out of range")));
        }
        self.density_excluding(x, class, None, &self.modification)
            .ok_or(Error::EmptyClass(class))
    }

    /// Density with pattern `exclude` removed from the pattern layer. `None`
    /// when no pattern of the class remains.
    fn density_excluding(&self, x: &[f64], class: usize, exclude: Option<usize>, s: &[f64]) -> Option<f64> {
        let n = x.len();
        let mut diag = vec![0.0; n];
        self.smoothing.class_diagonal(class, &mut diag);
        let det: f64 = diag.iter().product();
        let mut sum = 0.0;
        let mut count = 0usize;
        for &p in &self.by_class[class] {
            if Some(p) == exclude {
                continue;
            }
            let sp = s[p];
            let k: f64 = x
                .iter()
                .zip(self.patterns.row(p))
                .zip(&diag)
                .map(|((xi, pi), hi)| cauchy_kernel((xi - pi) / (hi * sp)))
                .product();
            sum += k / sp.powi(n as i32);
            count += 1;
        }
        (count > 0).then(|| sum / (count as f64 * det))
    }

    /// Densities of every class at `x`.
    pub fn densities(&self, x: &[f64]) -> Result<Vec<f64>> {
        (0..self.n_classes()).map(|j| self.class_density(x, j)).collect()
    }

    /// The class with the highest density; ties go to the lowest index.
    pub fn classify(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.densities(x)?))
    }

    /// Classifies training pattern `i` with itself removed from the pattern
    /// layer. A class left without patterns has zero density.
    pub fn classify_leave_one_out(&self, i: usize) -> usize {
        let x = self.patterns.row(i);
        let d: Vec<f64> = (0..self.n_classes())
            .map(|j| self.density_excluding(x, j, Some(i), &self.modification).unwrap_or(0.0))
            .collect();
        argmax(&d)
    }

    /// Fraction of training patterns misclassified under leave-one-out.
    pub fn leave_one_out_error(&self) -> f64 {
        let wrong = (0..self.patterns.len())
            .filter(|&i| self.classify_leave_one_out(i) != self.patterns.labels()[i])
            .count();
        wrong as f64 / self.patterns.len() as f64
    }

    /// Computes per-pattern modification coefficients from the unmodified
    /// densities of each pattern within its own class:
    /// `s_p = (f(x_p) / g)^(-c)` with `g` the geometric mean of the densities.
    pub fn apply_modification(&self, cfg: &ModificationConfig) -> Result<Self> {
        let cfg = ModificationConfig::new(cfg.intensity, cfg.density_floor)?;
        let ones = vec![1.0; self.patterns.len()];
        let log_densities: Vec<f64> = (0..self.patterns.len())
            .map(|p| {
                let f = self
                    .density_excluding(self.patterns.row(p), self.patterns.labels()[p], None, &ones)
                    .unwrap_or(0.0);
                f.max(cfg.density_floor).ln()
            })
            .collect();
        let log_mean = log_densities.iter().sum::<f64>() / log_densities.len() as f64;
        let s = if cfg.intensity == 0.0 {
            ones
        } else {
            log_densities
                .iter()
                .map(|lf| (-cfg.intensity * (lf - log_mean)).exp())
                .collect()
        };
        self.clone().with_modification(s)
    }
}

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = j;
        }
    }
    best
}
