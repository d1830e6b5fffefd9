//! Experiment driver behind the `pnn-chm` binary: configuration, single
//! runs, the benchmark grid and report files.

mod report;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use self::report::{selection_frequencies, selection_svg, SelectionRow};

use crate::chm::{chm_train, single_train, ChmConfig, ChmTrace, IterationRecord};
use crate::dataset::fetch::{fetch_all, Downloader, FetchOutcome};
use crate::dataset::{stratified_split, Dataset, Registry, SplitSpec, Standardizer};
use crate::error::{Error, Result};
use crate::evaluation::{aggregate_runs, compute_metrics, round3, Metric, MethodSummary, RunMetrics, SummaryTable};
use crate::metaheuristics::{BatParams, BfoParams, FpaParams, Method, MethodParams, PsoParams, SaParams};
use crate::pnn::{ModificationConfig, PnnModel, SmoothingSpec};

/// Environment variable naming the dataset directory.
pub const DATA_DIR_ENV: &str = "PNN_CHM_DATA";

/// The data directory: `explicit`, else `$PNN_CHM_DATA`, else `./data`.
pub fn data_dir(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("data"))
}

/// A trainer: the portfolio or one method on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Trainer {
    Chm,
    Single(Method),
}

impl Trainer {
    pub fn name(self) -> &'static str {
        match self {
            Self::Chm => "chm",
            Self::Single(m) => m.name(),
        }
    }

    /// `chm` followed by the five single methods.
    pub fn all() -> Vec<Trainer> {
        std::iter::once(Self::Chm).chain(Method::ALL.map(Self::Single)).collect()
    }
}

impl fmt::Display for Trainer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Trainer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("chm") {
            Ok(Self::Chm)
        } else {
            s.parse().map(Self::Single)
        }
    }
}

impl Serialize for Trainer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Trainer {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A benchmark or training setup, read from TOML. Method sections use the
/// parameter names of each optimizer (`[bat] loudness = 10`, ...).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Registry names, or `["all"]`.
    pub datasets: Vec<String>,
    pub methods: Vec<Trainer>,
    pub runs: usize,
    /// Run `r` uses seed `seed + r` for its split and its optimizer.
    pub seed: u64,
    pub test_fraction: f64,
    /// Standardize features with statistics of the training split.
    pub standardize: bool,
    /// Post-hoc modification intensity applied after training; 0 disables it.
    pub modification: f64,
    /// Also write SVG charts of the selection frequencies.
    pub svg: bool,
    pub data_dir: Option<PathBuf>,
    /// Alternative dataset registry file.
    pub registry: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    pub threads: usize,
    pub chm: ChmConfig,
    pub pso: PsoParams,
    pub bat: BatParams,
    pub bfo: BfoParams,
    pub fpa: FpaParams,
    pub sa: SaParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            datasets: vec!["all".into()],
            methods: Trainer::all(),
            runs: 10,
            seed: 0,
            test_fraction: 0.2,
            standardize: false,
            modification: 0.0,
            svg: false,
            data_dir: None,
            registry: None,
            threads: 0,
            chm: ChmConfig::default(),
            pso: PsoParams::default(),
            bat: BatParams::default(),
            bfo: BfoParams::default(),
            fpa: FpaParams::default(),
            sa: SaParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("methods must not be empty".into()));
        }
        if self.datasets.is_empty() {
            return Err(Error::InvalidConfig("datasets must not be empty".into()));
        }
        SplitSpec::new(self.test_fraction, 0)?;
        ModificationConfig::new(self.modification, ModificationConfig::default().density_floor)?;
        self.chm.validate()?;
        self.method_params().validated()?;
        let registry = self.load_registry()?;
        self.dataset_names(&registry).map(|_| ())
    }

    pub fn method_params(&self) -> MethodParams {
        MethodParams {
            pso: self.pso,
            bat: self.bat,
            bfo: self.bfo,
            fpa: self.fpa,
            sa: self.sa,
        }
    }

    pub fn load_registry(&self) -> Result<Registry> {
        match &self.registry {
            Some(path) => Registry::from_path(path),
            None => Ok(Registry::builtin()),
        }
    }

    /// The selected datasets in canonical registry spelling.
    pub fn dataset_names(&self, registry: &Registry) -> Result<Vec<String>> {
        if self.datasets.iter().any(|d| d.eq_ignore_ascii_case("all")) {
            return Ok(registry.names().map(str::to_string).collect());
        }
        self.datasets
            .iter()
            .map(|d| registry.get(d).map(|r| r.name.clone()))
            .collect()
    }

    pub fn data_dir(&self) -> PathBuf {
        data_dir(self.data_dir.as_deref())
    }

    pub fn run_seed(&self, run: usize) -> u64 {
        self.seed.wrapping_add(run as u64)
    }
}

/// Everything recorded about one (dataset, trainer, run) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRun {
    pub dataset: String,
    pub method: Trainer,
    pub run: usize,
    pub seed: u64,
    pub metrics: RunMetrics,
    pub smoothing: SmoothingSpec,
    /// Leave-one-out error on the training split that drove the search.
    pub train_error: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<ChmTrace>,
}

/// Splits `ds` for run `run`, trains with `trainer` and scores the test split.
pub fn run_cell(name: &str, ds: &Dataset, trainer: Trainer, cfg: &ExperimentConfig, run: usize) -> Result<CellRun> {
    let seed = cfg.run_seed(run);
    let (train, test) = stratified_split(ds, &SplitSpec::new(cfg.test_fraction, seed)?)?;
    let (train, test) = if cfg.standardize {
        let scaler = Standardizer::fit(&train);
        (train.standardized(&scaler)?, test.standardized(&scaler)?)
    } else {
        (train, test)
    };
    let chm_cfg = ChmConfig { seed, ..cfg.chm.clone() };
    let params = cfg.method_params();
    let (smoothing, train_error, trace) = match trainer {
        Trainer::Chm => {
            let r = chm_train(&train, &test, &chm_cfg, &params)?;
            (r.smoothing, r.fitness, Some(r.trace))
        }
        Trainer::Single(m) => {
            let (s, f) = single_train(&train, m, &chm_cfg, &params)?;
            (s, f, None)
        }
    };
    let mut model = PnnModel::new(train, smoothing.clone())?;
    if cfg.modification != 0.0 {
        model = model.apply_modification(&ModificationConfig::new(
            cfg.modification,
            ModificationConfig::default().density_floor,
        )?)?;
    }
    let predictions = test.rows().map(|x| model.classify(x)).collect::<Result<Vec<_>>>()?;
    let mut metrics = compute_metrics(&predictions, test.labels(), test.n_classes())?;
    metrics.seed = seed;
    Ok(CellRun {
        dataset: name.to_string(),
        method: trainer,
        run,
        seed,
        metrics,
        smoothing,
        train_error,
        trace,
    })
}

/// Loads a registry dataset from the configured data directory.
pub fn load_dataset(cfg: &ExperimentConfig, registry: &Registry, name: &str) -> Result<(Dataset, Vec<String>)> {
    registry.get(name)?.load(&cfg.data_dir())
}

/// Runs `cfg.runs` repetitions of one trainer on one dataset.
pub fn train_runs(cfg: &ExperimentConfig, dataset: &str, trainer: Trainer) -> Result<Vec<CellRun>> {
    let registry = cfg.load_registry()?;
    let (ds, warnings) = load_dataset(cfg, &registry, dataset)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let name = registry.get(dataset)?.name.clone();
    pool(cfg)?.install(|| {
        (0..cfg.runs)
            .into_par_iter()
            .map(|r| run_cell(&name, &ds, trainer, cfg, r))
            .collect()
    })
}

fn pool(cfg: &ExperimentConfig) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

#[derive(Serialize)]
struct TraceLine<'a> {
    run: usize,
    #[serde(flatten)]
    record: &'a IterationRecord,
}

fn trace_lines(runs: &[CellRun]) -> Result<String> {
    let mut out = String::new();
    for r in runs {
        for record in r.trace.iter().flat_map(|t| &t.iterations) {
            out.push_str(&serde_json::to_string(&TraceLine { run: r.run, record })?);
            out.push('\n');
        }
    }
    Ok(out)
}

/// Summary written by the `train` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainSummary {
    pub dataset: String,
    pub method: Trainer,
    pub runs: usize,
    pub summary: MethodSummary,
    /// Run whose training error was lowest (first on ties).
    pub best_run: usize,
    pub best_smoothing: SmoothingSpec,
}

/// Trains and writes `runs.json`, `summary.json`, `summary.txt`,
/// `smoothing.json` and, for the portfolio, `trace.jsonl` into `out`.
pub fn cmd_train(cfg: &ExperimentConfig, dataset: &str, trainer: Trainer, out: &Path) -> Result<TrainSummary> {
    cfg.validate()?;
    let runs = train_runs(cfg, dataset, trainer)?;
    let metrics: Vec<RunMetrics> = runs.iter().map(|r| r.metrics.clone()).collect();
    let summary = aggregate_runs(&metrics)?;
    let best = runs
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.train_error < runs[b].train_error { i } else { b });
    let report = TrainSummary {
        dataset: runs[0].dataset.clone(),
        method: trainer,
        runs: runs.len(),
        summary,
        best_run: best,
        best_smoothing: runs[best].smoothing.clone(),
    };
    fs::create_dir_all(out)?;
    let stripped: Vec<CellRun> = runs.iter().map(|r| CellRun { trace: None, ..r.clone() }).collect();
    fs::write(out.join("runs.json"), serde_json::to_string_pretty(&stripped)? + "\n")?;
    fs::write(out.join("summary.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    fs::write(out.join("smoothing.json"), serde_json::to_string_pretty(&report.best_smoothing)? + "\n")?;
    fs::write(out.join("summary.txt"), report::summary_text(&report))?;
    let trace_path = out.join("trace.jsonl");
    if trainer == Trainer::Chm {
        fs::write(&trace_path, trace_lines(&runs)?)?;
    } else if trace_path.exists() {
        fs::remove_file(&trace_path)?;
    }
    Ok(report)
}

/// A benchmark cell that could not be completed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub dataset: String,
    pub method: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkReport {
    pub table: SummaryTable,
    pub runs: Vec<CellRun>,
    pub failures: Vec<Failure>,
    pub selection: Vec<SelectionRow>,
}

impl BenchmarkReport {
    pub fn succeeded(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the whole (dataset × method × run) grid in a worker pool and
/// returns results in grid order.
pub fn run_benchmark(cfg: &ExperimentConfig) -> Result<BenchmarkReport> {
    cfg.validate()?;
    let registry = cfg.load_registry()?;
    let names = cfg.dataset_names(&registry)?;
    let mut failures = Vec::new();
    let mut loaded = Vec::new();
    for name in &names {
        match load_dataset(cfg, &registry, name) {
            Ok((ds, warnings)) => {
                for w in warnings {
                    eprintln!("warning: {w}");
                }
                loaded.push((name.clone(), ds));
            }
            Err(e) => {
                for m in &cfg.methods {
                    failures.push(Failure {
                        dataset: name.clone(),
                        method: m.to_string(),
                        error: e.to_string(),
                    });
                }
            }
        }
    }
    let cells: Vec<(usize, Trainer, usize)> = (0..loaded.len())
        .flat_map(|d| cfg.methods.iter().flat_map(move |&m| (0..cfg.runs).map(move |r| (d, m, r))))
        .collect();
    let results: Vec<Result<CellRun>> = pool(cfg)?.install(|| {
        cells
            .par_iter()
            .map(|&(d, m, r)| run_cell(&loaded[d].0, &loaded[d].1, m, cfg, r))
            .collect()
    });

    let method_names: Vec<String> = cfg.methods.iter().map(|m| m.to_string()).collect();
    let mut table = SummaryTable::new(names.clone(), method_names);
    let mut runs = Vec::new();
    for (chunk, cell_chunk) in results.chunks(cfg.runs).zip(cells.chunks(cfg.runs)) {
        let (d, m, _) = cell_chunk[0];
        let dataset = &loaded[d].0;
        let mut ok = Vec::new();
        let mut error = None;
        for r in chunk {
            match r {
                Ok(c) => ok.push(c.clone()),
                Err(e) => error = error.or_else(|| Some(e.to_string())),
            }
        }
        match error {
            Some(error) => failures.push(Failure {
                dataset: dataset.clone(),
                method: m.to_string(),
                error,
            }),
            None => {
                let metrics: Vec<RunMetrics> = ok.iter().map(|c| c.metrics.clone()).collect();
                table.insert(dataset, m.name(), aggregate_runs(&metrics)?);
            }
        }
        runs.extend(ok);
    }
    let selection = selection_frequencies(&runs, &cfg.chm.methods, cfg.chm.n);
    Ok(BenchmarkReport {
        table,
        runs,
        failures,
        selection,
    })
}

/// Runs the benchmark and writes its reports into `out`:
/// `tables/<metric>_{avg,max}.csv` (with a `Rank` row), `summary.json`,
/// `runs.jsonl`, `traces.jsonl`, `selection_frequency.csv`, optional SVG
/// charts and `failures.csv`.
pub fn cmd_benchmark(cfg: &ExperimentConfig, out: &Path) -> Result<BenchmarkReport> {
    let report = run_benchmark(cfg)?;
    let tables = out.join("tables");
    fs::create_dir_all(&tables)?;
    for metric in Metric::ALL {
        for (max, tag) in [(false, "avg"), (true, "max")] {
            fs::write(
                tables.join(format!("{}_{tag}.csv", metric.name())),
                report.table.to_csv(metric, max),
            )?;
        }
    }
    fs::write(out.join("summary.json"), serde_json::to_string_pretty(&report.table)? + "\n")?;
    let mut runs_text = String::new();
    for r in &report.runs {
        runs_text.push_str(&serde_json::to_string(&CellRun { trace: None, ..r.clone() })?);
        runs_text.push('\n');
    }
    fs::write(out.join("runs.jsonl"), runs_text)?;
    fs::write(out.join("traces.jsonl"), report::benchmark_traces(&report.runs)?)?;
    fs::write(out.join("selection_frequency.csv"), report::selection_csv(&report.selection))?;
    if cfg.svg {
        let names = cfg.dataset_names(&cfg.load_registry()?)?;
        for name in names {
            if report.selection.iter().any(|s| s.dataset == name) {
                fs::write(
                    out.join(format!("selection_{name}.svg")),
                    selection_svg(&name, &report.selection, &cfg.chm.methods),
                )?;
            }
        }
    }
    let mut failures = String::from("dataset,method,error\n");
    for f in &report.failures {
        failures.push_str(&format!("{},{},\"{}\"\n", f.dataset, f.method, f.error.replace('"', "'")));
    }
    fs::write(out.join("failures.csv"), failures)?;
    Ok(report)
}

/// Downloads and converts every registry dataset that is not yet cached.
pub fn cmd_fetch(registry: &Registry, dir: &Path, downloader: &dyn Downloader) -> Vec<FetchOutcome> {
    fetch_all(registry, dir, downloader)
}

/// Rounded avg/max line used in human-readable output.
pub fn format_stat(label: &str, avg: f64, max: f64) -> String {
    format!("{label:<10} avg {:.3}  max {:.3}", round3(avg), round3(max))
}
