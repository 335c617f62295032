//! The `fractal-lab` command line.
//!
//! Exit status: 0 on success or certification, 1 when a certification or
//! scaling verdict fails, 2 on usage, parameter and configuration errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{
    decimal, fraction, parse_rational, q_points, region_membership, region_plot_data, regime,
    s_exponents, thresholds, Figure, PQPoint, RegionSpec, Q,
};
use crate::experiments::persist::{default_paths, summary_csv, summary_markdown};
use crate::experiments::{
    load_dir, run_scaling, save_run, verify_bilinear, verify_locally_constant, verify_marginal,
    verify_operators, verify_whitney, RunConfig, Verdict,
};
use crate::fractal_sets::{
    assouad_characteristic, assouad_characteristic_sup, build_cantor, covering_number, TimeSet,
    DEFAULT_CANTOR_L,
};
use crate::grid::GridSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn rational(s: &str) -> std::result::Result<Q, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "fractal-lab", version, about = "Fractal dilation sets and local smoothing exponents")]
pub struct Cli {
    /// Seed for randomized fields; echoed in every output.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cantor-type sets: cardinality, gaps, covering numbers and characteristics.
    Sets(SetsArgs),
    /// Q-vertices, s-exponents, point classification and figure data.
    Regions(RegionsArgs),
    /// Exact threshold table.
    Thresholds(ThresholdsArgs),
    /// Operator sanity checks on a grid.
    Operators(OperatorsArgs),
    /// Norm-ratio scaling run from a JSON configuration.
    Scaling(ScalingArgs),
    /// Verification suites.
    Verify(VerifyArgs),
    /// Aggregate stored runs.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SetsArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long = "L", default_value_t = DEFAULT_CANTOR_L)]
    pub l: f64,
    /// Scales for the covering table; defaults to `2^-m`, `m = 1..=j`.
    #[arg(long, num_args = 1..)]
    pub delta: Vec<f64>,
    /// Load a set stored as a JSON array instead of building one.
    #[arg(long)]
    pub load: Option<PathBuf>,
    /// Write the set and table as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegionsArgs {
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long, value_parser = rational)]
    pub mu: Option<Q>,
    #[arg(long, value_parser = rational)]
    pub alpha: Q,
    /// `1/p 1/q`.
    #[arg(long, num_args = 2, value_parser = rational)]
    pub point: Vec<Q>,
    #[arg(long)]
    pub fig: Option<Figure>,
    #[arg(long, value_parser = rational)]
    pub r: Option<Q>,
    /// Destination of the figure CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThresholdsArgs {
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long, value_parser = rational)]
    pub alpha: Q,
    #[arg(long, value_parser = rational)]
    pub r: Option<Q>,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OperatorsArgs {
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long = "L", default_value_t = 8.0)]
    pub l: f64,
    #[arg(long, default_value_t = 4)]
    pub j: i32,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for `<name>.json` and `<name>.csv` when the config has no output paths.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub suite: Suite,
    /// Write the report as JSON.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// `sum (t-1)^-alpha` against `k 2^k`.
    Marginal {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2)]
        kmin: u32,
        #[arg(long, default_value_t = 12)]
        kmax: u32,
    },
    /// Coefficient decay of the time-shift multipliers.
    LocallyConstant {
        #[arg(long, default_value_t = 3)]
        jmin: i32,
        #[arg(long, default_value_t = 8)]
        jmax: i32,
        #[arg(long, default_value_t = 8)]
        m: u32,
    },
    /// Whitney coverage, separation and sector projections.
    Whitney {
        #[arg(long, default_value_t = 8)]
        nu_max: u32,
    },
    /// Cap-pair magnitudes and implied necessary q.
    Bilinear {
        #[arg(long, value_parser = rational, default_value = "1")]
        alpha: Q,
        #[arg(long, num_args = 3.., default_values_t = [0.125, 0.0625, 0.03125])]
        deltas: Vec<f64>,
    },
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub dir: PathBuf,
    /// Destination of the aggregated CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a markdown summary.
    #[arg(long)]
    pub markdown: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn write_json<T: Serialize>(path: &PathBuf, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn status(certified: bool) -> i32 {
    if certified {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Scaling(_) => {}
        _ => writeln!(out, "seed: {seed}")?,
    }
    match &cli.command {
        Command::Sets(a) => sets(a, out),
        Command::Regions(a) => regions(a, out),
        Command::Thresholds(a) => thresholds_cmd(a, out),
        Command::Operators(a) => {
            let report = verify_operators(GridSpec::new(a.n, a.l)?, a.j, seed)?;
            for line in report.lines() {
                writeln!(out, "{line}")?;
            }
            Ok(status(report.certified))
        }
        Command::Scaling(a) => scaling(a, cli.seed, out),
        Command::Verify(a) => verify(a, seed, out),
        Command::Report(a) => report(a, out),
    }
}

#[derive(Serialize)]
struct SetsOutput {
    points: TimeSet,
    cardinality: usize,
    min_gap: f64,
    covering: Vec<(f64, usize)>,
    alpha: Option<f64>,
    characteristic: Option<f64>,
    characteristic_sup: Option<f64>,
}

fn sets(a: &SetsArgs, out: &mut dyn Write) -> Result<i32> {
    let set = match (&a.load, a.alpha, a.j) {
        (Some(path), _, _) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str::<TimeSet>(&text).map_err(|e| Error::parse_json(path, &e))?
        }
        (None, Some(alpha), Some(j)) => {
            writeln!(out, "set: cantor alpha={alpha} j={j} L={}", a.l)?;
            build_cantor(alpha, j, a.l)?
        }
        _ => return Err(Error::Usage("give --alpha and --j, or --load".into())),
    };
    let deltas: Vec<f64> = if !a.delta.is_empty() {
        a.delta.clone()
    } else if let Some(j) = a.j {
        (1..=j as i32).map(|m| 2f64.powi(-m)).collect()
    } else {
        return Err(Error::Usage("give --delta or --j for the covering table".into()));
    };
    if let Some(bad) = deltas.iter().find(|d| !(**d > 0.0 && **d <= 1.0)) {
        return Err(Error::param(format!("delta must lie in (0, 1], got {bad}")));
    }
    writeln!(out, "cardinality: {}", set.len())?;
    writeln!(out, "min_gap: {}", set.min_gap())?;
    let mut covering = Vec::new();
    match a.alpha {
        Some(_) => writeln!(out, "delta,covering_number,A_alpha")?,
        None => writeln!(out, "delta,covering_number")?,
    }
    for &d in &deltas {
        let n = covering_number(&set, 1.0, 2.0, d)?;
        covering.push((d, n));
        match a.alpha {
            Some(alpha) => writeln!(out, "{d},{n},{:.6}", assouad_characteristic(&set, d, alpha)?)?,
            None => writeln!(out, "{d},{n}")?,
        }
    }
    let finest = deltas.iter().copied().fold(1.0, f64::min);
    let (characteristic, characteristic_sup) = match a.alpha {
        Some(alpha) => {
            let c = assouad_characteristic(&set, finest, alpha)?;
            let s = assouad_characteristic_sup(&set, finest, alpha)?;
            writeln!(out, "A_alpha(delta={finest}): {c:.6}")?;
            writeln!(out, "A~_alpha(delta={finest}): {s:.6}")?;
            (Some(c), Some(s))
        }
        None => (None, None),
    };
    if let Some(path) = &a.out {
        write_json(
            path,
            &SetsOutput {
                cardinality: set.len(),
                min_gap: set.min_gap(),
                points: set,
                covering,
                alpha: a.alpha,
                characteristic,
                characteristic_sup,
            },
        )?;
    }
    Ok(EXIT_OK)
}

fn show(x: Q) -> String {
    format!("{} ({})", fraction(x), decimal(x))
}

fn regions(a: &RegionsArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = RegionSpec::new(a.d, a.mu, a.alpha)?;
    if spec.mu.is_some() {
        let qs = q_points(&spec)?;
        for (name, p) in ["Q1", "Q2", "Q3", "Q4"].iter().zip(qs.as_array()) {
            writeln!(out, "{name}: {p}")?;
        }
    }
    if !a.point.is_empty() {
        let point = PQPoint::new(a.point[0], a.point[1])?;
        let s = s_exponents(point, a.d, a.alpha)?;
        writeln!(out, "point: {point}")?;
        writeln!(out, "s1: {}", show(s.s1))?;
        writeln!(out, "s2: {}", show(s.s2))?;
        writeln!(out, "s3: {}", show(s.s3))?;
        writeln!(out, "s_c: {} [{}]", show(s.sc), regime(point, a.d, a.alpha)?)?;
        if spec.mu.is_some() {
            let m = region_membership(point, &spec)?;
            writeln!(out, "class: {}", m.class)?;
            writeln!(out, "in_R: {}", m.in_r)?;
        }
    }
    if let Some(fig) = a.fig {
        let data = region_plot_data(&spec, fig, a.r)?;
        match &a.out {
            Some(path) => {
                std::fs::write(path, data.to_csv())?;
                writeln!(out, "wrote {}", path.display())?;
            }
            None => write!(out, "{}", data.to_csv())?,
        }
    }
    Ok(EXIT_OK)
}

fn thresholds_cmd(a: &ThresholdsArgs, out: &mut dyn Write) -> Result<i32> {
    let t = thresholds(a.d, a.alpha, a.r)?;
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&t).map_err(|e| Error::Config(e.to_string()))?)?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "d: {}", t.d)?;
    writeln!(out, "alpha: {}", show(t.alpha))?;
    let rows = [
        ("q_circ", Some(t.q_circ)),
        ("q_star", Some(t.q_star)),
        ("p_star", Some(t.p_star)),
        ("q_tilde_circ", Some(t.q_tilde_circ)),
        ("q_tilde_star", Some(t.q_tilde_star)),
        ("q_alpha", Some(t.q_alpha)),
        ("p_alpha", Some(t.p_alpha)),
        ("r", t.r),
        ("q_star_r", t.q_star_r),
        ("inv_p_star_r", t.inv_p_star_r),
        ("q_necessary_angular", Some(t.q_necessary_angular)),
        ("q_necessary_squashed", Some(t.q_necessary_squashed)),
        ("q_marginal", Some(t.q_marginal)),
    ];
    for (name, value) in rows {
        if let Some(v) = value {
            writeln!(out, "{name}: {}", show(v))?;
        }
    }
    Ok(EXIT_OK)
}

fn scaling(a: &ScalingArgs, seed: Option<u64>, out: &mut dyn Write) -> Result<i32> {
    let mut config = RunConfig::load(&a.config)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    writeln!(out, "seed: {}", config.seed)?;
    let run = run_scaling(&config)?;
    writeln!(out, "run: {} family={} p={} q={} alpha={}", run.name, run.family, fraction(run.p), fraction(run.q), fraction(run.alpha))?;
    writeln!(out, "j,log2_ratio,set_size")?;
    for (i, (j, y)) in run.measured.iter().enumerate() {
        writeln!(out, "{j},{y:.6},{}", run.set_sizes[i].1)?;
    }
    writeln!(
        out,
        "fitted slope {:.4} (residual {:.4}); target {} = {} ({}); s_c = {}",
        run.fitted_slope,
        run.residual,
        run.target_regime,
        fraction(run.target),
        decimal(run.target),
        fraction(run.predicted)
    )?;
    writeln!(out, "verdict: {}", run.verdict)?;
    let paths = match (&config.output, &a.out_dir) {
        (Some(o), _) if o.json.is_some() || o.csv.is_some() => {
            let (dj, dc) = default_paths(".", &run.name);
            Some((o.json.clone().unwrap_or(dj), o.csv.clone().unwrap_or(dc)))
        }
        (_, Some(dir)) => Some(default_paths(dir, &run.name)),
        _ => None,
    };
    if let Some((json, csv)) = paths {
        save_run(&run, &json, &csv)?;
        writeln!(out, "wrote {} and {}", json.display(), csv.display())?;
    }
    Ok(status(run.verdict == Verdict::Consistent))
}

fn emit<T: Serialize>(lines: Vec<String>, report: &T, path: &Option<PathBuf>, out: &mut dyn Write) -> Result<()> {
    for line in lines {
        writeln!(out, "{line}")?;
    }
    if let Some(path) = path {
        write_json(path, report)?;
    }
    Ok(())
}

fn verify(a: &VerifyArgs, seed: u64, out: &mut dyn Write) -> Result<i32> {
    let certified = match &a.suite {
        Suite::Marginal { alpha, kmin, kmax } => {
            let r = verify_marginal(*alpha, (*kmin, *kmax))?;
            emit(r.lines(), &r, &a.out, out)?;
            r.certified
        }
        Suite::LocallyConstant { jmin, jmax, m } => {
            let r = verify_locally_constant((*jmin, *jmax), *m)?;
            emit(r.lines(), &r, &a.out, out)?;
            r.certified
        }
        Suite::Whitney { nu_max } => {
            let r = verify_whitney(*nu_max, seed)?;
            emit(r.lines(), &r, &a.out, out)?;
            r.certified
        }
        Suite::Bilinear { alpha, deltas } => {
            let r = verify_bilinear(deltas, *alpha)?;
            emit(r.lines(), &r, &a.out, out)?;
            r.certified
        }
    };
    writeln!(out, "certified: {certified}")?;
    Ok(status(certified))
}

fn report(a: &ReportArgs, out: &mut dyn Write) -> Result<i32> {
    let runs = load_dir(&a.dir)?;
    if runs.is_empty() {
        return Err(Error::Usage(format!("no stored runs in {}", a.dir.display())));
    }
    let csv = summary_csv(&runs);
    match &a.out {
        Some(path) => {
            std::fs::write(path, &csv)?;
            writeln!(out, "wrote {} ({} runs)", path.display(), runs.len())?;
        }
        None => write!(out, "{csv}")?,
    }
    if let Some(path) = &a.markdown {
        std::fs::write(path, summary_markdown(&runs))?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(EXIT_OK)
}
