//! Classification metrics, aggregation over repeated runs and the Rank
//! statistic used to compare methods across datasets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Metrics of one classification run on a test set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub accuracy: f64,
    /// Macro-averaged over classes.
    pub precision: f64,
    /// Macro-averaged over classes.
    pub recall: f64,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    pub seed: u64,
}

/// Accuracy, macro precision and macro recall of `predictions` against
/// `labels` over `n_classes` classes. Classes whose denominator is empty
/// contribute 0 to the macro average.
pub fn compute_metrics(predictions: &[usize], labels: &[usize], n_classes: usize) -> Result<RunMetrics> {
    if predictions.len() != labels.len() {
        return Err(Error::LengthMismatch(predictions.len(), labels.len()));
    }
    if labels.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut confusion = vec![vec![0usize; n_classes]; n_classes];
    for (&p, &y) in predictions.iter().zip(labels) {
        if p >= n_classes || y >= n_classes {
            return Err(Error::InvalidDataset(format!("class index outside 0..{n_classes}")));
        }
        confusion[y][p] += 1;
    }
    let correct: usize = (0..n_classes).map(|j| confusion[j][j]).sum();
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let precision = (0..n_classes)
        .map(|j| ratio(confusion[j][j], (0..n_classes).map(|i| confusion[i][j]).sum()))
        .sum::<f64>()
        / n_classes as f64;
    let recall = (0..n_classes)
        .map(|j| ratio(confusion[j][j], confusion[j].iter().sum()))
        .sum::<f64>()
        / n_classes as f64;
    Ok(RunMetrics {
        accuracy: correct as f64 / labels.len() as f64,
        precision,
        recall,
        confusion,
        seed: 0,
    })
}

pub fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub avg: f64,
    pub max: f64,
}

impl Stat {
    fn of(values: impl Iterator<Item = f64> + Clone) -> Self {
        let n = values.clone().count() as f64;
        Self {
            avg: values.clone().sum::<f64>() / n,
            max: values.fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Both values rounded to three decimals.
    pub fn rounded(&self) -> Self {
        Self {
            avg: round3(self.avg),
            max: round3(self.max),
        }
    }
}

/// Average and maximum of each metric over repeated runs (raw values).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub runs: usize,
    pub accuracy: Stat,
    pub precision: Stat,
    pub recall: Stat,
}

impl MethodSummary {
    pub fn get(&self, metric: Metric) -> Stat {
        match metric {
            Metric::Accuracy => self.accuracy,
            Metric::Precision => self.precision,
            Metric::Recall => self.recall,
        }
    }
}

pub fn aggregate_runs(runs: &[RunMetrics]) -> Result<MethodSummary> {
    if runs.is_empty() {
        return Err(Error::NoRuns);
    }
    Ok(MethodSummary {
        runs: runs.len(),
        accuracy: Stat::of(runs.iter().map(|r| r.accuracy)),
        precision: Stat::of(runs.iter().map(|r| r.precision)),
        recall: Stat::of(runs.iter().map(|r| r.recall)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Accuracy,
    Precision,
    Recall,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Accuracy, Metric::Precision, Metric::Recall];

    pub fn name(self) -> &'static str {
        match self {
            Self::Accuracy => "accuracy",
            Self::Precision => "precision",
            Self::Recall => "recall",
        }
    }
}

/// Counts, per method, the datasets on which it attains the best score
/// after rounding to three decimals. Every tied method is credited.
/// `scores[d][m]` is method `m`'s score on dataset `d`; `None` marks a
/// missing cell, which never wins.
pub fn rank(scores: &[Vec<Option<f64>>], n_methods: usize) -> Vec<usize> {
    let mut out = vec![0; n_methods];
    for row in scores {
        let rounded: Vec<Option<f64>> = row.iter().map(|s| s.map(round3)).collect();
        let Some(best) = rounded.iter().flatten().copied().reduce(f64::max) else {
            continue;
        };
        for (m, s) in rounded.iter().enumerate().take(n_methods) {
            if *s == Some(best) {
                out[m] += 1;
            }
        }
    }
    out
}

/// Per-dataset, per-method summaries in a fixed order, with table output.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub methods: Vec<String>,
    pub datasets: Vec<String>,
    /// Keyed by `(dataset, method)`.
    pub cells: BTreeMap<String, BTreeMap<String, MethodSummary>>,
}

impl SummaryTable {
    pub fn new(datasets: Vec<String>, methods: Vec<String>) -> Self {
        Self {
            methods,
            datasets,
            cells: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, dataset: &str, method: &str, summary: MethodSummary) {
        self.cells
            .entry(dataset.to_string())
            .or_default()
            .insert(method.to_string(), summary);
    }

    pub fn get(&self, dataset: &str, method: &str) -> Option<&MethodSummary> {
        self.cells.get(dataset).and_then(|m| m.get(method))
    }

    /// Scores for [`rank`], one row per dataset.
    pub fn scores(&self, metric: Metric, max: bool) -> Vec<Vec<Option<f64>>> {
        self.datasets
            .iter()
            .map(|d| {
                self.methods
                    .iter()
                    .map(|m| {
                        self.get(d, m).map(|s| {
                            let st = s.get(metric);
                            if max { st.max } else { st.avg }
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// CSV with one row per dataset, one column per method and a final
    /// `Rank` row. Scores are printed with three decimals; missing cells are
    /// left empty.
    pub fn to_csv(&self, metric: Metric, max: bool) -> String {
        let mut out = String::from("dataset");
        for m in &self.methods {
            out.push(',');
            out.push_str(m);
        }
        out.push('\n');
        let scores = self.scores(metric, max);
        for (d, row) in self.datasets.iter().zip(&scores) {
            out.push_str(d);
            for s in row {
                out.push(',');
                if let Some(v) = s {
                    out.push_str(&format!("{:.3}", round3(*v)));
                }
            }
            out.push('\n');
        }
        out.push_str("Rank");
        for r in rank(&scores, self.methods.len()) {
            out.push_str(&format!(",{r}"));
        }
        out.push('\n');
        out
    }
}
