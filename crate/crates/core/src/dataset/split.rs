use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

/// Stratified train/test partition settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub test_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            test_fraction: 0.2,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn new(test_fraction: f64, seed: u64) -> Result<Self> {
        if !(test_fraction > 0.0 && test_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "test_fraction must be in (0, 1), got {test_fraction}"
            )));
        }
        Ok(Self { test_fraction, seed })
    }
}

/// Number of test samples per class. Classes get `floor(P_j * f)` and the
/// remaining seats up to `round(P * f)` go to the largest remainders (lowest
/// class index first on ties). Every class keeps at least one training row.
pub(crate) fn test_counts(class_counts: &[usize], test_fraction: f64) -> Vec<usize> {
    let total: usize = class_counts.iter().sum();
    let target = (total as f64 * test_fraction).round() as usize;
    let mut counts: Vec<usize> = class_counts
        .iter()
        .map(|&c| ((c as f64 * test_fraction).floor() as usize).min(c.saturating_sub(1)))
        .collect();
    let mut order: Vec<usize> = (0..class_counts.len()).collect();
    let remainder = |j: usize| class_counts[j] as f64 * test_fraction - counts[j] as f64;
    order.sort_by(|&a, &b| remainder(b).total_cmp(&remainder(a)).then(a.cmp(&b)));
    let mut assigned: usize = counts.iter().sum();
    for &j in &order {
        if assigned >= target {
            break;
        }
        if counts[j] + 1 < class_counts[j] {
            counts[j] += 1;
            assigned += 1;
        }
    }
    counts
}

/// Splits `ds` into `(train, test)` preserving class proportions. Rows keep
/// their original relative order within each part.
pub fn stratified_split(ds: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let spec = SplitSpec::new(spec.test_fraction, spec.seed)?;
    if let Some((class, &count)) = ds.class_counts().iter().enumerate().find(|(_, &c)| c < 2) {
        return Err(Error::ClassTooSmall { class, count });
    }
    let per_class = test_counts(ds.class_counts(), spec.test_fraction);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut is_test = vec![false; ds.len()];
    for (j, &n_test) in per_class.iter().enumerate() {
        let mut idx = ds.class_indices(j);
        idx.shuffle(&mut rng);
        for &i in &idx[..n_test] {
            is_test[i] = true;
        }
    }
    let (test, train): (Vec<usize>, Vec<usize>) = (0..ds.len()).partition(|&i| is_test[i]);
    Ok((ds.subset(&train), ds.subset(&test)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dataset(counts: &[usize]) -> Dataset {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (j, &c) in counts.iter().enumerate() {
            for k in 0..c {
                rows.push(vec![k as f64, j as f64]);
                labels.push(j);
            }
        }
        Dataset::new(rows, labels).unwrap()
    }

    #[test]
    fn iris_shape_gives_ten_per_class() {
        let ds = dataset(&[50, 50, 50]);
        let (train, test) = stratified_split(&ds, &SplitSpec::default()).unwrap();
        assert_eq!(test.class_counts(), &[10, 10, 10]);
        assert_eq!(train.class_counts(), &[40, 40, 40]);
    }

    #[test]
    fn banknote_shape_totals() {
        assert_eq!(test_counts(&[762, 610], 0.2), vec![152, 122]);
        let counts = test_counts(&[76, 70, 29, 17, 13, 9], 0.2);
        assert_eq!(counts.iter().sum::<usize>(), 43);
    }

    #[test]
    fn large_fraction_keeps_one_training_row() {
        let ds = dataset(&[2, 3]);
        let (train, test) = stratified_split(&ds, &SplitSpec::new(0.9, 1).unwrap()).unwrap();
        assert!(train.class_counts().iter().all(|&c| c >= 1));
        assert_eq!(train.len() + test.len(), 5);
    }

    #[test]
    fn rejects_singleton_class_and_bad_fraction() {
        let ds = dataset(&[1, 4]);
        assert!(matches!(
            stratified_split(&ds, &SplitSpec::default()),
            Err(Error::ClassTooSmall { class: 0, count: 1 })
        ));
        assert!(SplitSpec::new(1.0, 0).is_err());
        assert!(SplitSpec::new(0.0, 0).is_err());
    }

    #[test]
    fn same_seed_same_partition() {
        let ds = dataset(&[30, 20]);
        let spec = SplitSpec::new(0.2, 7).unwrap();
        let a = stratified_split(&ds, &spec).unwrap();
        let b = stratified_split(&ds, &spec).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn partition_is_disjoint_exhaustive_and_proportional(
            counts in proptest::collection::vec(2usize..40, 1..5),
            fraction in 0.05f64..0.6,
            seed in any::<u64>(),
        ) {
            // Rows are tagged with a unique id so the partition can be checked
            // at index level.
            let mut rows = Vec::new();
            let mut labels = Vec::new();
            for (j, &c) in counts.iter().enumerate() {
                for _ in 0..c {
                    rows.push(vec![rows.len() as f64]);
                    labels.push(j);
                }
            }
            let ds = Dataset::new(rows, labels).unwrap();
            let (train, test) = stratified_split(&ds, &SplitSpec::new(fraction, seed).unwrap()).unwrap();
            let mut ids: Vec<usize> = train.rows().chain(test.rows()).map(|r| r[0] as usize).collect();
            ids.sort_unstable();
            prop_assert_eq!(ids, (0..ds.len()).collect::<Vec<_>>());
            for (j, &c) in counts.iter().enumerate() {
                let expected = c as f64 * fraction;
                prop_assert!((test.class_counts()[j] as f64 - expected).abs() <= 1.0);
                prop_assert!(train.class_counts()[j] >= 1);
            }
        }
    }
}
