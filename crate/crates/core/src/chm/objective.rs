use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metaheuristics::Objective;
use crate::pnn::{PnnModel, SmoothingKind, SmoothingSpec};

/// Smallest bandwidth handed to the classifier; reflection can put a
/// coordinate exactly on a zero lower bound.
pub const MIN_BANDWIDTH: f64 = 1e-10;

/// Turns an optimizer position into smoothing parameters.
pub fn candidate_to_spec(kind: SmoothingKind, candidate: &[f64], n_classes: usize, n_features: usize) -> Result<SmoothingSpec> {
    let values: Vec<f64> = candidate.iter().map(|&h| h.max(MIN_BANDWIDTH)).collect();
    SmoothingSpec::from_vector(kind, &values, n_classes, n_features)
}

/// Error rate on `eval_set` of a PNN whose pattern layer is `train` and
/// whose smoothing parameters are `candidate`.
pub fn fitness_of(kind: SmoothingKind, candidate: &[f64], train: &Dataset, eval_set: &Dataset) -> Result<f64> {
    if eval_set.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if eval_set.n_features() != train.n_features() {
        return Err(Error::DimensionMismatch {
            expected: train.n_features(),
            got: eval_set.n_features(),
        });
    }
    let spec = candidate_to_spec(kind, candidate, train.n_classes(), train.n_features())?;
    let model = PnnModel::new(train.clone(), spec)?;
    let mut wrong = 0usize;
    for (x, &y) in eval_set.rows().zip(eval_set.labels()) {
        if model.classify(x)? != y {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / eval_set.len() as f64)
}

/// Leave-one-out training error of a PNN, as a function of its smoothing
/// parameters. One evaluation is charged as `n_t` function evaluations.
pub struct LooObjective {
    kind: SmoothingKind,
    inner: Inner,
    n: usize,
}

enum Inner {
    /// Class-independent bandwidths: every constant factor shared by the
    /// classes is dropped.
    Shared(PairCache),
    Generic(PnnModel),
}

struct PairCache {
    n_features: usize,
    labels: Vec<usize>,
    class_counts: Vec<usize>,
    /// Feature-major copy of the patterns: `columns[k * n + p]`.
    columns: Vec<f64>,
}

impl PairCache {
    fn new(ds: &Dataset) -> Self {
        let n = ds.len();
        let nf = ds.n_features();
        let mut columns = vec![0.0; n * nf];
        for (p, row) in ds.rows().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                columns[k * n + p] = v;
            }
        }
        Self {
            n_features: nf,
            labels: ds.labels().to_vec(),
            class_counts: ds.class_counts().to_vec(),
            columns,
        }
    }

    /// Number of leave-one-out misclassifications for per-feature inverse
    /// bandwidths `inv_h`.
    fn errors(&self, inv_h: &[f64]) -> usize {
        let n = self.labels.len();
        let g = self.class_counts.len();
        let scaled: Vec<f64> = self
            .columns
            .chunks_exact(n)
            .zip(inv_h)
            .flat_map(|(col, &w)| col.iter().map(move |&v| v * w))
            .collect();
        let mut score = vec![0.0; n * g];
        let mut acc = vec![0.0; n];
        for i in 0..n.saturating_sub(1) {
            let acc = &mut acc[..n - i - 1];
            products(&scaled, n, i, acc);
            let yi = self.labels[i];
            for (q, &a) in acc.iter().enumerate() {
                let p = i + 1 + q;
                let k = 1.0 / (a * a);
                score[i * g + self.labels[p]] += k;
                score[p * g + yi] += k;
            }
        }
        let mut wrong = 0;
        let mut dens = vec![0.0; g];
        for i in 0..n {
            let yi = self.labels[i];
            for j in 0..g {
                let count = self.class_counts[j] - usize::from(j == yi);
                dens[j] = if count == 0 { 0.0 } else { score[i * g + j] / count as f64 };
            }
            if crate::pnn::argmax(&dens) != yi {
                wrong += 1;
            }
        }
        wrong
    }
}

const BLOCK: usize = 16;

/// `acc[q] = prod_k ((z[k][i+1+q] - z[k][i])^2 + 1)` over feature-major
/// columns of length `n`.
#[inline(always)]
fn products_generic(columns: &[f64], n: usize, i: usize, acc: &mut [f64]) {
    let m = acc.len();
    let full = m - m % BLOCK;
    for q0 in (0..full).step_by(BLOCK) {
        let mut a = [1.0; BLOCK];
        for col in columns.chunks_exact(n) {
            let zi = col[i];
            let z = &col[i + 1 + q0..i + 1 + q0 + BLOCK];
            for l in 0..BLOCK {
                let d = z[l] - zi;
                a[l] *= d * d + 1.0;
            }
        }
        acc[q0..q0 + BLOCK].copy_from_slice(&a);
    }
    acc[full..].fill(1.0);
    for col in columns.chunks_exact(n) {
        let zi = col[i];
        for (a, &z) in acc[full..].iter_mut().zip(&col[i + 1 + full..]) {
            let d = z - zi;
            *a *= d * d + 1.0;
        }
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
fn products_avx2(columns: &[f64], n: usize, i: usize, acc: &mut [f64]) {
    products_generic(columns, n, i, acc)
}

/// Same arithmetic in every path (no fused multiply-add), so results do
/// not depend on the CPU.
fn products(columns: &[f64], n: usize, i: usize, acc: &mut [f64]) {
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("avx2") {
        // SAFETY: the CPU supports AVX2, checked just above.
        return unsafe { products_avx2(columns, n, i, acc) };
    }
    products_generic(columns, n, i, acc)
}

impl LooObjective {
    pub fn new(train: &Dataset, kind: SmoothingKind) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let inner = match kind {
            SmoothingKind::Scalar | SmoothingKind::PerFeature => Inner::Shared(PairCache::new(train)),
            SmoothingKind::PerClass | SmoothingKind::Matrix => {
                let dim = kind.dimension(train.n_classes(), train.n_features());
                let spec = SmoothingSpec::from_vector(kind, &vec![1.0; dim], train.n_classes(), train.n_features())?;
                Inner::Generic(PnnModel::new(train.clone(), spec)?)
            }
        };
        Ok(Self { kind, inner, n: train.len() })
    }

    pub fn kind(&self) -> SmoothingKind {
        self.kind
    }

    /// Leave-one-out error rate, or an error if `candidate` has the wrong
    /// length.
    pub fn try_evaluate(&self, candidate: &[f64]) -> Result<f64> {
        let wrong = match &self.inner {
            Inner::Shared(cache) => {
                let expected = self.kind.dimension(cache.class_counts.len(), cache.n_features);
                if candidate.len() != expected {
                    return Err(Error::DimensionMismatch { expected, got: candidate.len() });
                }
                let inv: Vec<f64> = (0..cache.n_features)
                    .map(|k| {
                        1.0 / candidate[if candidate.len() == 1 { 0 } else { k }].max(MIN_BANDWIDTH)
                    })
                    .collect();
                cache.errors(&inv)
            }
            Inner::Generic(model) => {
                let ds = model.patterns();
                let spec = candidate_to_spec(self.kind, candidate, ds.n_classes(), ds.n_features())?;
                let model = model.clone().with_smoothing(spec)?;
                (0..self.n)
                    .filter(|&i| model.classify_leave_one_out(i) != ds.labels()[i])
                    .count()
            }
        };
        Ok(wrong as f64 / self.n as f64)
    }
}

impl Objective for LooObjective {
    fn evaluate(&self, position: &[f64]) -> f64 {
        self.try_evaluate(position).unwrap_or(1.0)
    }

    fn cost(&self) -> u64 {
        self.n as u64
    }
}
