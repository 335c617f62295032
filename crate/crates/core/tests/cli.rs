//! End-to-end runs of the `fractal-lab` command line.

use std::path::Path;
use std::process::Command;

use fractal_smoothing::cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use fractal_smoothing::experiments::load_run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("fractal-lab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const SMALL_RUN: &str = r#"{
  "name": "radial_small",
  "family": "radial_focusing",
  "set": { "kind": "single", "L": 16 },
  "p": 4,
  "q": 4,
  "j_range": [4, 6],
  "grid": { "n": 1024, "period": 8 },
  "seed": 9
}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn binary_reports_thresholds() {
    let output = Command::new(env!("CARGO_BIN_EXE_fractal-lab"))
        .args(["--seed", "3", "thresholds", "--d", "2", "--alpha", "5/6"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("seed: 3"));
    assert!(text.contains("p_star: 13/5"), "{text}");
    assert!(text.contains("q_star: 13/3"), "{text}");
}

#[test]
fn binary_exit_code_on_bad_input() {
    let status = Command::new(env!("CARGO_BIN_EXE_fractal-lab"))
        .args(["thresholds", "--alpha", "3/2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_USAGE));
}

#[test]
fn sets_table_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("set.json");
    let (code, text, _) = call(&[
        "sets", "--alpha", "1", "--j", "4", "--L", "4", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("cardinality: 4"));
    assert!(text.contains("delta,covering_number,A_alpha"));
    let stored: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(stored["cardinality"], 4);
    let points = stored["points"].to_string();
    let set_file = write(dir.path(), "points.json", &points);
    let (code, text, _) = call(&["sets", "--load", &set_file, "--delta", "0.0625", "0.5"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("0.0625,4"), "{text}");
    assert!(text.contains("0.5,"), "{text}");
}

#[test]
fn sets_rejects_bad_json_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.json", "[1.0,\n 1.5,\n oops]");
    let (code, _, err) = call(&["sets", "--load", &file, "--delta", "0.5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("bad.json") && err.contains(":3:"), "{err}");
}

#[test]
fn regions_and_figures() {
    let (code, text, _) = call(&["regions", "--mu", "1/2", "--alpha", "5/6", "--point", "5/13", "3/13"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("Q4:"));
    assert!(text.contains("s_c:"));
    let (code, text, _) = call(&["regions", "--alpha", "1", "--fig", "fig1"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.lines().count() > 3);
    let (code, _, _) = call(&["regions", "--alpha", "1", "--fig", "fig9"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn thresholds_with_r() {
    let (code, text, _) = call(&["thresholds", "--alpha", "1", "--r", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("q_star_r: 4 "), "{text}");
    let (code, text, _) = call(&["thresholds", "--alpha", "1/2", "--json"]);
    assert_eq!(code, EXIT_OK);
    let table: serde_json::Value = serde_json::from_str(text.split_once('\n').unwrap().1).unwrap();
    assert_eq!(table["q_alpha"], serde_json::json!([4, 1]));
}

#[test]
fn operators_small_grid() {
    let (code, text, _) = call(&["--seed", "5", "operators", "--n", "256", "--L", "8", "--j", "4"]);
    assert_eq!(code, EXIT_OK, "{text}");
    assert!(text.contains("half_wave_isometry"));
    let (code, _, err) = call(&["operators", "--n", "64", "--L", "8", "--j", "6"]);
    assert_eq!(code, EXIT_USAGE, "{err}");
}

#[test]
fn verify_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("marginal.json");
    let (code, text, _) = call(&[
        "verify", "marginal", "--alpha", "1", "--kmin", "2", "--kmax", "8", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{text}");
    assert!(text.contains("certified: true"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["certified"], true);
    let (code, text, _) = call(&["verify", "whitney", "--nu-max", "5"]);
    assert_eq!(code, EXIT_OK, "{text}");
    let (code, _, _) = call(&["verify", "whitney", "--nu-max", "20"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, text, _) = call(&["verify", "locally-constant", "--jmin", "3", "--jmax", "4"]);
    assert_eq!(code, EXIT_OK, "{text}");
}

#[test]
fn scaling_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "run.json", SMALL_RUN);
    let runs = dir.path().join("runs");
    let (code, text, err) = call(&["scaling", "--config", &config, "--out-dir", runs.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{text}{err}");
    assert!(text.starts_with("seed: 9\n"));
    assert!(text.contains("verdict: consistent"));
    let run = load_run(runs.join("radial_small.json")).unwrap();
    assert_eq!(run.measured.len(), 3);
    assert!(runs.join("radial_small.csv").exists());

    // the global seed overrides the config
    let (_, text, _) = call(&["--seed", "4", "scaling", "--config", &config]);
    assert!(text.starts_with("seed: 4\n"));

    let summary = dir.path().join("summary.csv");
    let md = dir.path().join("summary.md");
    let (code, _, _) = call(&[
        "report", "--dir", runs.to_str().unwrap(), "--out", summary.to_str().unwrap(), "--markdown", md.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let csv = std::fs::read_to_string(&summary).unwrap();
    assert!(csv.starts_with("name,family,p,q,alpha"));
    assert!(csv.contains("radial_small,radial_focusing"));
    assert!(std::fs::read_to_string(&md).unwrap().contains("radial_small"));
}

#[test]
fn scaling_verdict_failure_exits_one() {
    // over a Cantor set the radial ratio picks up part of #E^{1/q}; the slope
    // (about 0.38) sits above s1 = 1/4 by more than a 0.05 tolerance
    let dir = tempfile::tempdir().unwrap();
    let config = SMALL_RUN
        .replace(r#"{ "kind": "single", "L": 16 }"#, r#"{ "kind": "cantor", "alpha": 1, "L": 16 }"#)
        .replace(r#""seed": 9"#, r#""seed": 9, "tolerance": 0.05"#);
    let file = write(dir.path(), "cantor.json", &config);
    let (code, text, _) = call(&["scaling", "--config", &file]);
    assert_eq!(code, EXIT_FAILED, "{text}");
    assert!(text.contains("verdict: inconclusive"), "{text}");
}

#[test]
fn scaling_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", &SMALL_RUN.replace("\"q\": 4,", "\"q\": 4"));
    let (code, _, err) = call(&["scaling", "--config", &bad]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("bad.json:7:"), "{err}");
    let over = write(dir.path(), "over.json", &SMALL_RUN.replace("[4, 6]", "[4, 12]"));
    let (code, _, err) = call(&["scaling", "--config", &over]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("largest admissible j"), "{err}");
    let (code, _, _) = call(&["report", "--dir", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
}
