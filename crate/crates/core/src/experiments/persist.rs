//! Run persistence: a JSON document with the full run and a CSV table of the
//! measured ratios.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::scaling::ScalingRun;
use crate::error::{Error, Result};
use crate::exponents::{fraction, to_f64};

pub const CSV_HEADER: &str = "j,log2_ratio,set_size";

/// `<dir>/<name>.json` and `<dir>/<name>.csv`.
pub fn default_paths(dir: impl AsRef<Path>, name: &str) -> (PathBuf, PathBuf) {
    let dir = dir.as_ref();
    (dir.join(format!("{name}.json")), dir.join(format!("{name}.csv")))
}

pub fn run_csv(run: &ScalingRun) -> String {
    let mut out = String::from(CSV_HEADER);
    if run.sanity.is_some() {
        out.push_str(",random_log2_ratio");
    }
    out.push('\n');
    for (i, &(j, y)) in run.measured.iter().enumerate() {
        out.push_str(&format!("{j},{y:?},{}", run.set_sizes[i].1));
        if let Some(s) = &run.sanity {
            out.push_str(&format!(",{:?}", s[i].1));
        }
        out.push('\n');
    }
    out
}

/// Rows `(j, log2 ratio, set size)` of a run table.
pub fn parse_run_csv(text: &str, path: impl AsRef<Path>) -> Result<Vec<(i32, f64, usize)>> {
    let path = path.as_ref();
    let err = |line: usize, column: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.starts_with(CSV_HEADER) => {}
        _ => return Err(err(1, 1, format!("expected header {CSV_HEADER:?}"))),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut column = 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 3 {
            return Err(err(i + 2, 1, format!("expected 3 fields, found {}", fields.len())));
        }
        let mut cell = |k: usize| {
            let start = column;
            column += fields[k].len() + 1;
            (fields[k].trim(), start)
        };
        let (a, ca) = cell(0);
        let (b, cb) = cell(1);
        let (c, cc) = cell(2);
        let j = a.parse().map_err(|_| err(i + 2, ca, format!("bad integer {a:?}")))?;
        let y = b.parse().map_err(|_| err(i + 2, cb, format!("bad number {b:?}")))?;
        let n = c.parse().map_err(|_| err(i + 2, cc, format!("bad count {c:?}")))?;
        rows.push((j, y, n));
    }
    Ok(rows)
}

pub fn save_run(run: &ScalingRun, json: impl AsRef<Path>, csv: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(run).map_err(|e| Error::Config(e.to_string()))?;
    for p in [json.as_ref(), csv.as_ref()] {
        if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(json, text + "\n")?;
    std::fs::write(csv, run_csv(run))?;
    Ok(())
}

pub fn load_run(path: impl AsRef<Path>) -> Result<ScalingRun> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::parse_json(path, &e))
}

/// The runs stored as `*.json` in a directory, sorted by file name.
pub fn load_dir(dir: impl AsRef<Path>) -> Result<Vec<ScalingRun>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(load_run).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub name: String,
    pub family: String,
    pub p: String,
    pub q: String,
    pub alpha: String,
    pub j_min: i32,
    pub j_max: i32,
    pub fitted_slope: f64,
    pub residual: f64,
    pub target: String,
    pub predicted: String,
    pub verdict: String,
    pub seed: u64,
}

pub fn summary_rows(runs: &[ScalingRun]) -> Vec<SummaryRow> {
    runs.iter()
        .map(|r| SummaryRow {
            name: r.name.clone(),
            family: r.family.to_string(),
            p: fraction(r.p),
            q: fraction(r.q),
            alpha: fraction(r.alpha),
            j_min: r.j_range.0,
            j_max: r.j_range.1,
            fitted_slope: r.fitted_slope,
            residual: r.residual,
            target: fraction(r.target),
            predicted: fraction(r.predicted),
            verdict: r.verdict.to_string(),
            seed: r.seed,
        })
        .collect()
}

pub fn summary_csv(runs: &[ScalingRun]) -> String {
    let mut out = String::from(
        "name,family,p,q,alpha,j_min,j_max,fitted_slope,residual,target,predicted,verdict,seed\n",
    );
    for r in summary_rows(runs) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:.6},{:.6},{},{},{},{}\n",
            r.name, r.family, r.p, r.q, r.alpha, r.j_min, r.j_max, r.fitted_slope, r.residual,
            r.target, r.predicted, r.verdict, r.seed
        ));
    }
    out
}

pub fn summary_markdown(runs: &[ScalingRun]) -> String {
    let mut out = String::from(
        "| run | family | p | q | alpha | j | slope | target | s_c | verdict |\n|---|---|---|---|---|---|---|---|---|---|\n",
    );
    for r in runs {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {}..{} | {:.4} | {} ({:.4}) | {} | {} |\n",
            r.name,
            r.family,
            fraction(r.p),
            fraction(r.q),
            fraction(r.alpha),
            r.j_range.0,
            r.j_range.1,
            r.fitted_slope,
            fraction(r.target),
            to_f64(r.target),
            fraction(r.predicted),
            r.verdict
        ));
    }
    out
}
