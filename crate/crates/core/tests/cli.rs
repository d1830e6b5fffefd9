use std::fs;
use std::path::Path;
use std::process::Command;

use pnn_chm::cli::{cmd_benchmark, cmd_train, ExperimentConfig, Trainer};
use pnn_chm::dataset::{write_csv, Dataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const REGISTRY: &str = r#"
[[dataset]]
name = "toy_a"
expected = { rows = 60, features = 2, classes = 2 }

[[dataset]]
name = "toy_b"
expected = { rows = 45, features = 3, classes = 3 }

[[dataset]]
name = "absent"
expected = { rows = 10, features = 1, classes = 2 }
"#;

fn toy(seed: u64, n: usize, nf: usize, g: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<usize> = (0..n).map(|i| i % g).collect();
    let rows = labels
        .iter()
        .map(|&y| (0..nf).map(|_| y as f64 + rng.random::<f64>() * 1.5).collect())
        .collect();
    Dataset::new(rows, labels).unwrap()
}

fn setup(dir: &Path) -> ExperimentConfig {
    let data = dir.join("data");
    fs::create_dir_all(&data).unwrap();
    for (name, ds) in [("toy_a", toy(1, 60, 2, 2)), ("toy_b", toy(2, 45, 3, 3))] {
        let mut f = fs::File::create(data.join(format!("{name}.csv"))).unwrap();
        write_csv(&ds, &mut f).unwrap();
    }
    let registry = dir.join("registry.toml");
    fs::write(&registry, REGISTRY).unwrap();
    let text = format!(
        r#"
datasets = ["toy_a", "toy_b"]
methods = ["chm", "pso", "sa"]
runs = 3
seed = 5
svg = true
threads = 1
data_dir = "{}"
registry = "{}"

[chm]
n = 3
n_p = 4
probing_multiplier = 2
fit_multiplier = 3

[bat]
loudness = 2.0
"#,
        data.display(),
        registry.display()
    );
    fs::write(dir.join("config.toml"), &text).unwrap();
    ExperimentConfig::from_toml(&text).unwrap()
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn config_sections_and_validation() {
    let cfg = ExperimentConfig::from_toml("datasets = [\"iris\"]\n[bat]\nloudness = 3.0\n[chm]\nn = 2\n").unwrap();
    assert_eq!(cfg.bat.loudness, 3.0);
    assert_eq!(cfg.chm.n, 2);
    assert_eq!(cfg.runs, 10);
    assert_eq!(cfg.methods.len(), 6);
    assert!(ExperimentConfig::from_toml("runs = 0").is_err());
    assert!(ExperimentConfig::from_toml("datasets = [\"nope\"]").is_err());
    assert!(ExperimentConfig::from_toml("methods = [\"gradient\"]").is_err());
    assert!(ExperimentConfig::from_toml("[sa]\ntemp = 3.0").is_err());
}

#[test]
fn train_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = setup(dir.path());
    let out = dir.path().join("chm");
    let report = cmd_train(&cfg, "toy_a", Trainer::Chm, &out).unwrap();
    assert_eq!(report.runs, 3);
    let s = &report.summary;
    assert!(s.accuracy.avg <= s.accuracy.max);
    for f in ["runs.json", "summary.json", "summary.txt", "smoothing.json", "trace.jsonl"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert!(summary["summary"]["accuracy"]["avg"].is_f64());
    assert!(summary["summary"]["accuracy"]["max"].is_f64());
    let first = fs::read(out.join("runs.json")).unwrap();
    cmd_train(&cfg, "toy_a", Trainer::Chm, &out).unwrap();
    assert_eq!(first, fs::read(out.join("runs.json")).unwrap());

    let single = dir.path().join("pso");
    cmd_train(&cfg, "toy_a", Trainer::Single(pnn_chm::metaheuristics::Method::Pso), &single).unwrap();
    assert!(!single.join("trace.jsonl").exists());
    assert!(single.join("summary.json").exists());
}

#[test]
fn benchmark_outputs_are_consistent_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = setup(dir.path());
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let report = cmd_benchmark(&cfg, &a).unwrap();
    cmd_benchmark(&cfg, &b).unwrap();
    assert!(report.succeeded());
    assert_eq!(read_dir_bytes(&a), read_dir_bytes(&b));

    let table = fs::read_to_string(a.join("tables/accuracy_avg.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "dataset,chm,pso,sa");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("Rank,"));

    for ds in ["toy_a", "toy_b"] {
        let executed: usize = report
            .runs
            .iter()
            .filter(|r| r.dataset == ds)
            .filter_map(|r| r.trace.as_ref())
            .map(|t| t.iterations.len())
            .sum();
        let counted: usize = report.selection.iter().filter(|s| s.dataset == ds).map(|s| s.count).sum();
        assert_eq!(executed, counted);
        assert!(executed <= cfg.chm.n * cfg.runs);
        assert!(a.join(format!("selection_{ds}.svg")).exists());
    }
    let csv = fs::read_to_string(a.join("selection_frequency.csv")).unwrap();
    assert!(csv.starts_with("dataset,method,iteration,count\n"));
}

#[test]
fn binary_reports_failures_with_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    setup(dir.path());
    let cfg_path = dir.path().join("config.toml");
    let text = fs::read_to_string(&cfg_path).unwrap().replace(
        "datasets = [\"toy_a\", \"toy_b\"]",
        "datasets = [\"toy_a\", \"absent\"]",
    );
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, text).unwrap();
    let out = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_pnn-chm"))
        .args(["benchmark", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(!status.success());
    let failures = fs::read_to_string(out.join("failures.csv")).unwrap();
    assert_eq!(failures.lines().count(), 1 + 3);
    assert!(failures.contains("absent,chm"));

    let ok = Command::new(env!("CARGO_BIN_EXE_pnn-chm"))
        .args(["train", "--dataset", "toy_b", "--method", "sa", "--runs", "2", "--seed", "3", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(dir.path().join("train"))
        .output()
        .unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("accuracy"));

    let unknown = Command::new(env!("CARGO_BIN_EXE_pnn-chm"))
        .args(["train", "--dataset", "toy_b", "--method", "nope", "--out"])
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert!(!unknown.status.success());
}
