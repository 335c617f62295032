//! A run configuration document, stored runs and the aggregated summary.

use fractal_smoothing::experiments::persist::{default_paths, summary_csv, summary_markdown};
use fractal_smoothing::experiments::{load_dir, run_scaling, save_run, RunConfig};

const CONFIG: &str = r#"{
  "name": "radial_demo",
  "family": "radial_focusing",
  "set": { "kind": "single", "L": 16 },
  "p": 4,
  "q": 4,
  "j_range": [4, 6],
  "grid": { "n": 1024, "period": 8 },
  "seed": 1,
  "sanity": true
}"#;

fn main() -> fractal_smoothing::Result<()> {
    let dir = std::env::temp_dir().join("fractal-lab-runs");
    let config = RunConfig::from_json(CONFIG, "inline")?;
    for seed in [1, 2] {
        let mut c = config.clone();
        c.seed = seed;
        c.name = format!("{}_{seed}", config.name);
        let run = run_scaling(&c)?;
        let (json, csv) = default_paths(&dir, &run.name);
        save_run(&run, &json, &csv)?;
        println!("stored {}", json.display());
    }
    let runs = load_dir(&dir)?;
    print!("{}", summary_csv(&runs));
    print!("{}", summary_markdown(&runs));
    Ok(())
}
