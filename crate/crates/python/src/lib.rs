//! Python bindings: datasets, PNN models, the portfolio trainer and the
//! evaluation helpers.

use std::path::PathBuf;

use pnn_chm::chm::{chm_train as train_portfolio, single_train, ChmConfig};
use pnn_chm::dataset::{load_csv, stratified_split, SplitSpec, LABEL_COLUMN};
use pnn_chm::evaluation::{compute_metrics, rank as rank_methods};
use pnn_chm::metaheuristics::{Method, MethodParams};
use pnn_chm::pnn::{ModificationConfig, SmoothingKind};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: pnn_chm::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_kind(kind: &str) -> PyResult<SmoothingKind> {
    match kind.replace('_', "-").as_str() {
        "scalar" => Ok(SmoothingKind::Scalar),
        "per-class" => Ok(SmoothingKind::PerClass),
        "per-feature" => Ok(SmoothingKind::PerFeature),
        "matrix" => Ok(SmoothingKind::Matrix),
        other => Err(PyValueError::new_err(format!("unknown smoothing kind `{other}`"))),
    }
}

fn kind_name(kind: SmoothingKind) -> &'static str {
    match kind {
        SmoothingKind::Scalar => "scalar",
        SmoothingKind::PerClass => "per-class",
        SmoothingKind::PerFeature => "per-feature",
        SmoothingKind::Matrix => "matrix",
    }
}

/// Labelled feature matrix with classes `0..n_classes`.
#[pyclass(module = "pnnchm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Dataset {
    inner: pnn_chm::dataset::Dataset,
}

#[pymethods]
impl Dataset {
    #[new]
    fn new(rows: Vec<Vec<f64>>, labels: Vec<usize>) -> PyResult<Self> {
        let inner = pnn_chm::dataset::Dataset::new(rows, labels).map_err(err)?;
        Ok(Self { inner })
    }

    /// Reads a numeric CSV with a header and a `class` column.
    #[staticmethod]
    #[pyo3(signature = (path, label_column = LABEL_COLUMN))]
    fn from_csv(path: PathBuf, label_column: &str) -> PyResult<Self> {
        Ok(Self {
            inner: load_csv(&path, label_column).map_err(err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn n_features(&self) -> usize {
        self.inner.n_features()
    }

    #[getter]
    fn n_classes(&self) -> usize {
        self.inner.n_classes()
    }

    #[getter]
    fn labels(&self) -> Vec<usize> {
        self.inner.labels().to_vec()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner.rows().map(<[f64]>::to_vec).collect()
    }

    /// Stratified split into `(train, test)`.
    #[pyo3(signature = (test_fraction = 0.2, seed = 0))]
    fn split(&self, test_fraction: f64, seed: u64) -> PyResult<(Dataset, Dataset)> {
        let spec = SplitSpec::new(test_fraction, seed).map_err(err)?;
        let (train, test) = stratified_split(&self.inner, &spec).map_err(err)?;
        Ok((Dataset { inner: train }, Dataset { inner: test }))
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(len={}, n_features={}, n_classes={})",
            self.inner.len(),
            self.inner.n_features(),
            self.inner.n_classes()
        )
    }
}

/// Smoothing parameters: a kind plus its flat value vector.
#[pyclass(module = "pnnchm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct SmoothingSpec {
    inner: pnn_chm::pnn::SmoothingSpec,
}

#[pymethods]
impl SmoothingSpec {
    #[new]
    fn new(kind: &str, values: Vec<f64>, n_classes: usize, n_features: usize) -> PyResult<Self> {
        let inner = pnn_chm::pnn::SmoothingSpec::from_vector(parse_kind(kind)?, &values, n_classes, n_features)
            .map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        kind_name(self.inner.kind())
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.as_vector()
    }

    fn __repr__(&self) -> String {
        format!("SmoothingSpec(kind={:?}, values={:?})", self.kind(), self.values())
    }
}

/// Cauchy-kernel PNN over stored training patterns.
#[pyclass(module = "pnnchm", frozen)]
struct PnnModel {
    inner: pnn_chm::pnn::PnnModel,
}

#[pymethods]
impl PnnModel {
    #[new]
    fn new(patterns: &Dataset, smoothing: &SmoothingSpec) -> PyResult<Self> {
        let inner = pnn_chm::pnn::PnnModel::new(patterns.inner.clone(), smoothing.inner.clone()).map_err(err)?;
        Ok(Self { inner })
    }

    fn class_density(&self, x: Vec<f64>, class_index: usize) -> PyResult<f64> {
        self.inner.class_density(&x, class_index).map_err(err)
    }

    fn densities(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.densities(&x).map_err(err)
    }

    fn classify(&self, x: Vec<f64>) -> PyResult<usize> {
        self.inner.classify(&x).map_err(err)
    }

    fn predict(&self, data: &Dataset) -> PyResult<Vec<usize>> {
        data.inner.rows().map(|x| self.inner.classify(x).map_err(err)).collect()
    }

    fn leave_one_out_error(&self) -> f64 {
        self.inner.leave_one_out_error()
    }

    /// Model with per-pattern modification coefficients of intensity `c`.
    fn with_modification(&self, intensity: f64) -> PyResult<PnnModel> {
        let cfg = ModificationConfig::new(intensity, ModificationConfig::default().density_floor).map_err(err)?;
        Ok(PnnModel {
            inner: self.inner.apply_modification(&cfg).map_err(err)?,
        })
    }

    #[getter]
    fn modification(&self) -> Vec<f64> {
        self.inner.modification().to_vec()
    }
}

fn config(
    n: usize,
    population: usize,
    smoothing: &str,
    methods: Option<Vec<String>>,
    seed: u64,
) -> PyResult<ChmConfig> {
    let mut cfg = ChmConfig {
        n,
        n_p: population,
        smoothing: parse_kind(smoothing)?,
        seed,
        ..ChmConfig::default()
    };
    if let Some(m) = methods {
        cfg.methods = m
            .iter()
            .map(|s| s.parse::<Method>().map_err(err))
            .collect::<PyResult<_>>()?;
    }
    Ok(cfg)
}

/// Trains smoothing parameters with the method portfolio. Returns a dict
/// with `smoothing`, `fitness`, `selected` and the JSON-lines `trace`.
#[pyfunction]
#[pyo3(signature = (train, eval_set, n = 5, population = 20, smoothing = "per-feature", methods = None, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn chm_train<'py>(
    py: Python<'py>,
    train: &Dataset,
    eval_set: &Dataset,
    n: usize,
    population: usize,
    smoothing: &str,
    methods: Option<Vec<String>>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config(n, population, smoothing, methods, seed)?;
    let result = py
        .detach(|| train_portfolio(&train.inner, &eval_set.inner, &cfg, &MethodParams::default()))
        .map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("smoothing", SmoothingSpec { inner: result.smoothing })?;
    out.set_item("fitness", result.fitness)?;
    out.set_item("selected", result.trace.selected().map(Method::name).collect::<Vec<_>>())?;
    out.set_item("trace", result.trace.to_json_lines().map_err(err)?)?;
    Ok(out)
}

/// Trains with a single method on the budget equivalent to a portfolio
/// run of `n` iterations. Returns `(smoothing, fitness)`.
#[pyfunction]
#[pyo3(signature = (train, method, n = 5, population = 20, smoothing = "per-feature", seed = 0))]
fn train_single(
    py: Python<'_>,
    train: &Dataset,
    method: &str,
    n: usize,
    population: usize,
    smoothing: &str,
    seed: u64,
) -> PyResult<(SmoothingSpec, f64)> {
    let method: Method = method.parse().map_err(err)?;
    let cfg = config(n, population, smoothing, None, seed)?;
    let (spec, fitness) = py
        .detach(|| single_train(&train.inner, method, &cfg, &MethodParams::default()))
        .map_err(err)?;
    Ok((SmoothingSpec { inner: spec }, fitness))
}

/// Accuracy, macro precision, macro recall and the confusion matrix.
#[pyfunction]
fn metrics<'py>(
    py: Python<'py>,
    predictions: Vec<usize>,
    labels: Vec<usize>,
    n_classes: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let m = compute_metrics(&predictions, &labels, n_classes).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("accuracy", m.accuracy)?;
    out.set_item("precision", m.precision)?;
    out.set_item("recall", m.recall)?;
    out.set_item("confusion", m.confusion)?;
    Ok(out)
}

/// Best-on-dataset counts per method from a datasets x methods score table.
#[pyfunction]
fn rank(scores: Vec<Vec<Option<f64>>>) -> Vec<usize> {
    let n_methods = scores.first().map_or(0, Vec::len);
    rank_methods(&scores, n_methods)
}

#[pymodule]
fn pnnchm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Dataset>()?;
    m.add_class::<SmoothingSpec>()?;
    m.add_class::<PnnModel>()?;
    m.add_function(wrap_pyfunction!(chm_train, m)?)?;
    m.add_function(wrap_pyfunction!(train_single, m)?)?;
    m.add_function(wrap_pyfunction!(metrics, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    Ok(())
}
