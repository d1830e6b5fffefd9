use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pnn_chm::cli::{cmd_benchmark, cmd_fetch, cmd_train, format_stat, ExperimentConfig, Trainer};
use pnn_chm::dataset::fetch::{FetchStatus, HttpDownloader};
use pnn_chm::dataset::Registry;

#[derive(Parser)]
#[command(name = "pnn-chm", version, about = "PNN smoothing-parameter training with a metaheuristic portfolio")]
struct Cli {
    /// Dataset directory (defaults to $PNN_CHM_DATA, then ./data).
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Download and convert the benchmark datasets.
    Fetch {
        /// Alternative registry file.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Train one method on one dataset over several seeded runs.
    Train {
        #[arg(long)]
        dataset: String,
        /// `chm`, `pso`, `bat`, `bfo`, `sa` or `fpa`.
        #[arg(long, default_value = "chm")]
        method: Trainer,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// TOML file with parameter overrides.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run a benchmark grid described by a TOML file.
    Benchmark {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> pnn_chm::Result<bool> {
    match cli.command {
        Command::Fetch { registry } => {
            let registry = match registry {
                Some(p) => Registry::from_path(&p)?,
                None => Registry::builtin(),
            };
            let dir = pnn_chm::cli::data_dir(cli.data_dir.as_deref());
            let outcomes = cmd_fetch(&registry, &dir, &HttpDownloader);
            let mut ok = true;
            for o in &outcomes {
                for w in &o.warnings {
                    eprintln!("warning: {w}");
                }
                match &o.status {
                    FetchStatus::Cached => println!("{:<10} cached", o.name),
                    FetchStatus::Downloaded => println!("{:<10} downloaded", o.name),
                    FetchStatus::Failed(e) => {
                        ok = false;
                        println!("{:<10} FAILED: {e}", o.name);
                    }
                }
            }
            Ok(ok)
        }
        Command::Train {
            dataset,
            method,
            seed,
            runs,
            out,
            config,
        } => {
            let mut cfg = match config {
                Some(p) => ExperimentConfig::from_path(&p)?,
                None => ExperimentConfig::default(),
            };
            cfg.datasets = vec![dataset.clone()];
            cfg.methods = vec![method];
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(r) = runs {
                cfg.runs = r;
            }
            if cli.data_dir.is_some() {
                cfg.data_dir = cli.data_dir;
            }
            let report = cmd_train(&cfg, &dataset, method, &out)?;
            let s = &report.summary;
            println!("{} / {} over {} runs", report.dataset, report.method, report.runs);
            println!("{}", format_stat("accuracy", s.accuracy.avg, s.accuracy.max));
            println!("{}", format_stat("precision", s.precision.avg, s.precision.max));
            println!("{}", format_stat("recall", s.recall.avg, s.recall.max));
            Ok(true)
        }
        Command::Benchmark { config, out } => {
            let mut cfg = ExperimentConfig::from_path(&config)?;
            if cli.data_dir.is_some() {
                cfg.data_dir = cli.data_dir;
            }
            let report = cmd_benchmark(&cfg, &out)?;
            for f in &report.failures {
                eprintln!("failed: {} / {}: {}", f.dataset, f.method, f.error);
            }
            println!(
                "{} runs written to {}, {} failed cells",
                report.runs.len(),
                out.display(),
                report.failures.len()
            );
            Ok(report.succeeded())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
