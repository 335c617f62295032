//! Norm-ratio scaling runs for the three regimes. Pass a config path to
//! run a stored configuration instead; `--full` uses the 2048 grid and
//! `j = 4..7`.
//!
//! `cargo run --release --example scaling_runs -- --full`

use fractal_smoothing::exponents::{fraction, int, rat};
use fractal_smoothing::experiments::{run_scaling, RunConfig, SetRule};
use fractal_smoothing::extremizers::Family;
use fractal_smoothing::fractal_sets::DEFAULT_CANTOR_L;
use fractal_smoothing::grid::GridSpec;

fn main() -> fractal_smoothing::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let full = args.iter().any(|a| a == "--full");
    let configs = match args.iter().find(|a| !a.starts_with("--")) {
        Some(path) => vec![RunConfig::load(path)?],
        None => {
            let cantor = SetRule::Cantor { alpha: int(1), l: DEFAULT_CANTOR_L };
            let mut list = vec![
                RunConfig::new(Family::RadialFocusing, SetRule::Single { l: DEFAULT_CANTOR_L }, int(4), int(4), (4, 6)),
                RunConfig::new(Family::Knapp, cantor.clone(), rat(5, 2), int(5), (4, 6)),
                RunConfig::new(Family::Annulus, cantor, int(1), int(16), (4, 6)),
            ];
            for c in &mut list {
                if full {
                    c.j_range = (4, 7);
                } else {
                    c.grid = GridSpec::new(1024, 8.0)?;
                }
                c.sanity = true;
            }
            list
        }
    };
    for config in configs {
        let run = run_scaling(&config)?;
        println!(
            "{} p={} q={} alpha={}: target {} = {}, s_c = {}",
            run.family,
            fraction(run.p),
            fraction(run.q),
            fraction(run.alpha),
            run.target_regime,
            fraction(run.target),
            fraction(run.predicted)
        );
        for (i, (j, y)) in run.measured.iter().enumerate() {
            let random = run.sanity.as_ref().map_or(String::new(), |s| format!(", random phases {:.4}", s[i].1));
            println!("  j = {j}: log2 R = {y:.4}, #E = {}{random}", run.set_sizes[i].1);
        }
        println!("  slope {:.4} (residual {:.4}): {}", run.fitted_slope, run.residual, run.verdict);
    }
    Ok(())
}
