//! Downloading raw benchmark files and converting them to canonical CSV.

use std::collections::HashMap;
use std::fs;
use std::io::Read;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{write_csv, Dataset, DatasetDescriptor, Registry};
use crate::error::{Error, Result};

const MISSING: [&str; 3] = ["", "?", "NA"];

/// Source of raw bytes for a URL.
pub trait Downloader {
    fn get(&self, url: &str) -> Result<Vec<u8>>;
}

/// HTTP(S) via `ureq`; `file://` URLs and bare paths are read from disk.
#[derive(Debug, Default)]
pub struct HttpDownloader;

impl Downloader for HttpDownloader {
    fn get(&self, url: &str) -> Result<Vec<u8>> {
        if let Some(path) = url.strip_prefix("file://") {
            return Ok(fs::read(path)?);
        }
        if !url.contains("://") {
            return Ok(fs::read(url)?);
        }
        let err = |message: String| Error::Download {
            url: url.to_string(),
            message,
        };
        let response = ureq::get(url).call().map_err(|e| err(e.to_string()))?;
        let mut body = Vec::new();
        response
            .into_reader()
            .read_to_end(&mut body)
            .map_err(|e| err(e.to_string()))?;
        Ok(body)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FetchStatus {
    /// A loadable canonical CSV was already present.
    Cached,
    Downloaded,
    Failed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FetchOutcome {
    pub name: String,
    pub status: FetchStatus,
    pub warnings: Vec<String>,
}

/// Fetches every dataset in `registry` into `data_dir`. Failures are
/// recorded per dataset and do not stop the remaining downloads.
pub fn fetch_all(registry: &Registry, data_dir: &Path, downloader: &dyn Downloader) -> Vec<FetchOutcome> {
    registry
        .datasets
        .iter()
        .map(|d| match fetch_one(d, data_dir, downloader) {
            Ok((status, warnings)) => FetchOutcome {
                name: d.name.clone(),
                status,
                warnings,
            },
            Err(e) => FetchOutcome {
                name: d.name.clone(),
                status: FetchStatus::Failed(e.to_string()),
                warnings: Vec::new(),
            },
        })
        .collect()
}

pub fn fetch_one(
    d: &DatasetDescriptor,
    data_dir: &Path,
    downloader: &dyn Downloader,
) -> Result<(FetchStatus, Vec<String>)> {
    if let Ok((_, warnings)) = d.load(data_dir) {
        return Ok((FetchStatus::Cached, warnings));
    }
    let raw = if d.urls.is_empty() {
        let path = d.raw_path(data_dir);
        fs::read(&path).map_err(|_| {
            Error::InvalidDataset(format!(
                "{}: no download source; {}",
                d.name,
                d.manual.as_deref().unwrap_or("raw file missing")
            ))
        })?
    } else {
        let mut raw = download(d, downloader)?;
        if let Some(expected) = &d.sha256 {
            if !digest_matches(&raw, expected) {
                raw = download(d, downloader)?;
                if !digest_matches(&raw, expected) {
                    return Err(Error::Checksum(d.name.clone()));
                }
            }
        }
        raw
    };
    let text = String::from_utf8_lossy(&raw);
    let ds = convert(&text, d)?;
    fs::create_dir_all(data_dir)?;
    write_csv(&ds, fs::File::create(d.csv_path(data_dir))?)?;
    Ok((FetchStatus::Downloaded, d.validate(&ds)))
}

fn download(d: &DatasetDescriptor, downloader: &dyn Downloader) -> Result<Vec<u8>> {
    let mut raw = Vec::new();
    for url in &d.urls {
        let mut part = downloader.get(url)?;
        if !part.is_empty() && !part.ends_with(b"\n") {
            part.push(b'\n');
        }
        raw.extend(part);
    }
    Ok(raw)
}

fn digest_matches(raw: &[u8], expected_hex: &str) -> bool {
    hex::encode(Sha256::digest(raw)).eq_ignore_ascii_case(expected_hex.trim())
}

/// Converts raw delimited text to a [`Dataset`] following the descriptor's
/// source format.
pub fn convert(raw: &str, d: &DatasetDescriptor) -> Result<Dataset> {
    let f = &d.format;
    let split = |line: &str| -> Vec<String> {
        if f.delimiter == "whitespace" {
            line.split_whitespace().map(str::to_string).collect()
        } else {
            line.split(f.delimiter.as_str()).map(|s| s.trim().trim_matches('"').to_string()).collect()
        }
    };
    let parse_err = |row: usize, message: String| Error::Parse {
        path: d.name.clone().into(),
        row,
        message,
    };

    let mut lines = raw.lines().filter(|l| !l.trim().is_empty());
    let header = if f.header { lines.next().map(split) } else { None };
    let mut width = header.as_ref().map(Vec::len);
    let mut label_idx = None;
    let mut codes: HashMap<usize, HashMap<String, f64>> = HashMap::new();
    let mut class_of: HashMap<String, usize> = HashMap::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels = Vec::new();

    'rows: for (r, line) in lines.enumerate() {
        let row = r + 1;
        let fields = split(line);
        let n = *width.get_or_insert(fields.len());
        if fields.len() != n {
            return Err(parse_err(row, format!("expected {n} fields, found {}", fields.len())));
        }
        let li = *label_idx.get_or_insert_with(|| {
            if f.label_column < 0 {
                (n as i64 + f.label_column) as usize
            } else {
                f.label_column as usize
            }
        });
        if li >= n {
            return Err(parse_err(row, format!("label column {} out of range", f.label_column)));
        }
        if fields.iter().any(|v| MISSING.contains(&v.as_str())) {
            if f.skip_incomplete {
                continue;
            }
            return Err(parse_err(row, "missing value".into()));
        }
        let label = &fields[li];
        if f.drop_classes.iter().any(|c| c == label) {
            continue;
        }
        let mut values = Vec::with_capacity(n);
        for (i, field) in fields.iter().enumerate() {
            if i == li || f.drop_columns.contains(&i) {
                continue;
            }
            if f.categorical_columns.contains(&i) {
                let column = codes.entry(i).or_default();
                let next = column.len() as f64;
                values.push(*column.entry(field.clone()).or_insert(next));
                continue;
            }
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ if f.skip_incomplete => continue 'rows,
                _ => return Err(parse_err(row, format!("non-numeric value `{field}`"))),
            }
        }
        let next = class_names.len();
        let class = *class_of.entry(label.clone()).or_insert_with(|| {
            class_names.push(label.clone());
            next
        });
        rows.push(values);
        labels.push(class);
    }

    let (Some(n), Some(li)) = (width, label_idx) else {
        return Err(parse_err(0, "no data rows".into()));
    };
    let feature_names = (0..n)
        .filter(|&i| i != li && !f.drop_columns.contains(&i))
        .map(|i| match &header {
            Some(h) => sanitize(&h[i]),
            None => format!("x{i}"),
        })
        .collect();
    let n_classes = class_names.len();
    Dataset::with_classes(rows, labels, n_classes)?.with_names(feature_names, class_names)
}

fn sanitize(name: &str) -> String {
    name.trim().replace([',', '"'], "_")
}
