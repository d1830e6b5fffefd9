use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};

/// Name of the label column in canonical CSV files.
pub const LABEL_COLUMN: &str = "class";

const MISSING_TOKENS: [&str; 4] = ["", "?", "NA", "NaN"];

/// Loads a canonical CSV file: UTF-8, header row, comma separated, one label
/// column. Every other column must be numeric.
///
/// Labels are encoded `0..G` in order of first appearance. Rows with a
/// missing value are rejected with their 1-based data row number.
pub fn load_csv(path: &Path, label_column: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let parse_err = |row: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        row,
        message,
    };

    let headers = reader.headers()?.clone();
    if headers.is_empty() {
        return Err(parse_err(0, "missing header row".into()));
    }
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::UnknownLabelColumn(label_column.to_string()))?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.to_string())
        .collect();

    let mut class_of: HashMap<String, usize> = HashMap::new();
    let mut class_names = Vec::new();
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let row = r + 1;
        let record = record?;
        if record.len() != headers.len() {
            return Err(parse_err(
                row,
                format!("expected {} fields, found {}", headers.len(), record.len()),
            ));
        }
        for (i, field) in record.iter().enumerate() {
            if MISSING_TOKENS.contains(&field) {
                return Err(parse_err(row, format!("missing value in column `{}`", &headers[i])));
            }
            if i == label_idx {
                continue;
            }
            let value: f64 = field
                .parse()
                .map_err(|_| parse_err(row, format!("non-numeric value `{field}` in column `{}`", &headers[i])))?;
            if !value.is_finite() {
                return Err(parse_err(row, format!("non-finite value in column `{}`", &headers[i])));
            }
            features.push(value);
        }
        let label = record[label_idx].to_string();
        let next = class_names.len();
        let class = *class_of.entry(label.clone()).or_insert_with(|| {
            class_names.push(label);
            next
        });
        labels.push(class);
    }
    if labels.is_empty() {
        return Err(parse_err(0, "no data rows".into()));
    }
    let n_classes = class_names.len();
    Dataset::from_flat(features, feature_names.len(), labels, n_classes)?
        .with_names(feature_names, class_names)
}

/// Writes `ds` in the canonical layout read by [`load_csv`].
pub fn write_csv<W: Write>(ds: &Dataset, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = ds.feature_names().iter().map(String::as_str).collect();
    header.push(LABEL_COLUMN);
    writer.write_record(&header)?;
    for (row, &label) in ds.rows().zip(ds.labels()) {
        let mut record: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        record.push(ds.class_names()[label].clone());
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}
