use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{format_stat, CellRun, TrainSummary, TraceLine};
use crate::error::Result;
use crate::metaheuristics::Method;

/// How often `method` was selected at `iteration` over all portfolio runs
/// on `dataset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionRow {
    pub dataset: String,
    pub method: Method,
    pub iteration: usize,
    pub count: usize,
}

/// Selection counts for every dataset with portfolio runs, one row per
/// (method, iteration) including zeros.
pub fn selection_frequencies(runs: &[CellRun], methods: &[Method], iterations: usize) -> Vec<SelectionRow> {
    let mut datasets: Vec<&str> = Vec::new();
    for r in runs.iter().filter(|r| r.trace.is_some()) {
        if !datasets.contains(&r.dataset.as_str()) {
            datasets.push(&r.dataset);
        }
    }
    let mut rows = Vec::new();
    for d in datasets {
        for &m in methods {
            for it in 0..iterations {
                let count = runs
                    .iter()
                    .filter(|r| r.dataset == d)
                    .filter_map(|r| r.trace.as_ref())
                    .filter(|t| t.iterations.get(it).is_some_and(|rec| rec.selected == m))
                    .count();
                rows.push(SelectionRow {
                    dataset: d.to_string(),
                    method: m,
                    iteration: it,
                    count,
                });
            }
        }
    }
    rows
}

pub(super) fn selection_csv(rows: &[SelectionRow]) -> String {
    let mut out = String::from("dataset,method,iteration,count\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.dataset, r.method, r.iteration + 1, r.count);
    }
    out
}

/// A bar chart of total selections per method on one dataset.
pub fn selection_svg(dataset: &str, rows: &[SelectionRow], methods: &[Method]) -> String {
    let totals: Vec<usize> = methods
        .iter()
        .map(|&m| {
            rows.iter()
                .filter(|r| r.dataset == dataset && r.method == m)
                .map(|r| r.count)
                .sum()
        })
        .collect();
    let peak = totals.iter().copied().max().unwrap_or(0).max(1) as f64;
    let (bar, gap, height) = (50.0, 20.0, 200.0);
    let width = gap + methods.len() as f64 * (bar + gap);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{}" font-family="sans-serif" font-size="12">"#,
        height + 60.0
    );
    let _ = writeln!(svg, r#"<text x="{gap}" y="16">{dataset}</text>"#);
    for (k, (m, &t)) in methods.iter().zip(&totals).enumerate() {
        let h = height * t as f64 / peak;
        let x = gap + k as f64 * (bar + gap);
        let y = 30.0 + height - h;
        let _ = writeln!(svg, r##"<rect x="{x}" y="{y:.2}" width="{bar}" height="{h:.2}" fill="#4477aa"/>"##);
        let _ = writeln!(svg, r#"<text x="{x}" y="{:.2}">{t}</text>"#, y - 4.0);
        let _ = writeln!(svg, r#"<text x="{x}" y="{}">{}</text>"#, height + 48.0, m.name().to_uppercase());
    }
    svg.push_str("</svg>\n");
    svg
}

pub(super) fn benchmark_traces(runs: &[CellRun]) -> Result<String> {
    #[derive(Serialize)]
    struct Line<'a> {
        dataset: &'a str,
        #[serde(flatten)]
        inner: TraceLine<'a>,
    }
    let mut out = String::new();
    for r in runs {
        for record in r.trace.iter().flat_map(|t| &t.iterations) {
            let line = Line {
                dataset: &r.dataset,
                inner: TraceLine { run: r.run, record },
            };
            out.push_str(&serde_json::to_string(&line)?);
            out.push('\n');
        }
    }
    Ok(out)
}

pub(super) fn summary_text(s: &TrainSummary) -> String {
    let mut out = format!("dataset   {}\nmethod    {}\nruns      {}\n", s.dataset, s.method, s.runs);
    out.push_str(&format_stat("accuracy", s.summary.accuracy.avg, s.summary.accuracy.max));
    out.push('\n');
    out.push_str(&format_stat("precision", s.summary.precision.avg, s.summary.precision.max));
    out.push('\n');
    out.push_str(&format_stat("recall", s.summary.recall.avg, s.summary.recall.max));
    out.push('\n');
    let _ = writeln!(out, "best run  {} (lowest training error)", s.best_run);
    out
}
