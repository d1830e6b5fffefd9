use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{load_csv, Dataset, LABEL_COLUMN};
use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../registry/datasets.toml");

/// How a raw source file is laid out before conversion to canonical CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourceFormat {
    /// `","`, `";"` or `"whitespace"`.
    pub delimiter: String,
    pub header: bool,
    /// Source column holding the label; negative values count from the end.
    pub label_column: i64,
    pub drop_columns: Vec<usize>,
    /// Source columns with string values, encoded as integer codes by first
    /// appearance.
    pub categorical_columns: Vec<usize>,
    /// Rows whose label is listed here are dropped.
    pub drop_classes: Vec<String>,
    /// Drop rows containing missing values instead of failing.
    pub skip_incomplete: bool,
}

impl Default for SourceFormat {
    /// Comma-separated, no header, label in the last column.
    fn default() -> Self {
        Self {
            delimiter: ",".into(),
            header: false,
            label_column: -1,
            drop_columns: Vec::new(),
            categorical_columns: Vec::new(),
            drop_classes: Vec::new(),
            skip_incomplete: false,
        }
    }
}

/// Expected shape of a benchmark dataset, used to validate downloads.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub rows: usize,
    pub features: usize,
    pub classes: usize,
    /// Class sizes in decreasing order. May list fewer entries than
    /// `classes` when the published balance is incomplete.
    #[serde(default)]
    pub class_balance: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetDescriptor {
    pub name: String,
    #[serde(default)]
    pub urls: Vec<String>,
    /// Hex SHA-256 of the concatenated raw download, when known.
    #[serde(default)]
    pub sha256: Option<String>,
    /// Instructions for sources that cannot be downloaded anonymously. The
    /// raw file is then expected at `<data dir>/raw/<name>`.
    #[serde(default)]
    pub manual: Option<String>,
    #[serde(default)]
    pub format: SourceFormat,
    pub expected: Expected,
}

impl DatasetDescriptor {
    /// Location of the canonical CSV inside `data_dir`.
    pub fn csv_path(&self, data_dir: &Path) -> PathBuf {
        data_dir.join(format!("{}.csv", self.name))
    }

    pub fn raw_path(&self, data_dir: &Path) -> PathBuf {
        data_dir.join("raw").join(&self.name)
    }

    /// Loads the canonical CSV from `data_dir` and returns it together with
    /// any mismatches against the expected shape.
    pub fn load(&self, data_dir: &Path) -> Result<(Dataset, Vec<String>)> {
        let path = self.csv_path(data_dir);
        if !path.exists() {
            return Err(Error::MissingData {
                name: self.name.clone(),
                path,
            });
        }
        let ds = load_csv(&path, LABEL_COLUMN)?;
        let warnings = self.validate(&ds);
        Ok((ds, warnings))
    }

    /// Compares `ds` against the expected counts. Mismatches are reported,
    /// not treated as errors.
    pub fn validate(&self, ds: &Dataset) -> Vec<String> {
        let e = &self.expected;
        let mut warnings = Vec::new();
        let mut check = |what: &str, expected: usize, got: usize| {
            if expected != got {
                warnings.push(format!("{}: expected {expected} {what}, found {got}", self.name));
            }
        };
        check("rows", e.rows, ds.len());
        check("features", e.features, ds.n_features());
        check("classes", e.classes, ds.n_classes());
        if !e.class_balance.is_empty() {
            let mut counts = ds.class_counts().to_vec();
            counts.sort_unstable_by(|a, b| b.cmp(a));
            counts.truncate(e.class_balance.len());
            if counts != e.class_balance {
                warnings.push(format!(
                    "{}: expected class balance {:?}, found {:?}",
                    self.name, e.class_balance, counts
                ));
            }
        }
        warnings
    }
}

/// The list of benchmark datasets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Registry {
    #[serde(rename = "dataset")]
    pub datasets: Vec<DatasetDescriptor>,
}

impl Registry {
    /// The 16 benchmark datasets shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("builtin registry is valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let registry: Self = toml::from_str(text)?;
        for d in &registry.datasets {
            match d.format.delimiter.as_str() {
                "," | ";" | "whitespace" => {}
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "{}: unsupported delimiter `{other}`",
                        d.name
                    )))
                }
            }
        }
        Ok(registry)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, name: &str) -> Result<&DatasetDescriptor> {
        self.datasets
            .iter()
            .find(|d| d.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownDataset(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.datasets.iter().map(|d| d.name.as_str())
    }
}
