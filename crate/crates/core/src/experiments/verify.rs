//! Verification suites. Every report carries a `certified` flag and renders
//! to plain text lines.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bilinear::{CapKind, CapPair, TimeFamily};
use crate::error::{Error, Result};
use crate::exponents::{fraction, thresholds, to_f64, Q};
use crate::fractal_sets::{marginal_sum, CantorSpec};
use crate::grid::whitney::angular_window;
use crate::grid::{
    asymptotic_residual_constant, bessel_j0, bessel_j0_integral, circular_average,
    circular_average_quadrature, cutoff, half_wave, littlewood_paley, multiplier_coeff_decay,
    sector_project, whitney, CutoffKind, Field, GridSpec, Space,
};
use crate::stats::least_squares;

/// Band for `sum / (k 2^k)`.
pub const MARGINAL_BAND: (f64, f64) = (0.25, 4.0);
/// Allowed spread `max C_M / min C_M`.
pub const DECAY_STABILITY: f64 = 4.0;
/// Tolerance on fitted magnitude exponents.
pub const BILINEAR_TOLERANCE: f64 = 0.2;
/// Tolerance of the sector partition and orthogonality checks.
pub const SECTOR_TOLERANCE: f64 = 1e-8;
/// Time window constant: intervals of `Gamma` meeting `[0, c delta^-2]`.
pub const TIME_C: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalRow {
    pub k: u32,
    pub sum: f64,
    pub ratio: f64,
    pub per_point: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalReport {
    pub alpha: f64,
    pub rows: Vec<MarginalRow>,
    pub in_band: bool,
    pub strictly_increasing: bool,
    pub certified: bool,
}

/// `sum_{t in E} (t - 1)^-alpha` against `k 2^k` for the `k`-stage set.
pub fn verify_marginal(alpha: f64, k_range: (u32, u32)) -> Result<MarginalReport> {
    let (lo, hi) = k_range;
    if !(2 <= lo && lo <= hi && hi <= 16) {
        return Err(Error::param(format!("k range [{lo}, {hi}] must lie in [2, 16]")));
    }
    let mut rows = Vec::new();
    for k in lo..=hi {
        let m = marginal_sum(&CantorSpec::with_stages(alpha, k)?)?;
        rows.push(MarginalRow {
            k,
            sum: m.sum,
            ratio: m.ratio,
            per_point: m.sum / 2f64.powi(k as i32),
        });
    }
    let in_band = rows
        .iter()
        .all(|r| r.ratio >= MARGINAL_BAND.0 && r.ratio <= MARGINAL_BAND.1);
    let strictly_increasing = rows.windows(2).all(|w| w[1].per_point > w[0].per_point);
    Ok(MarginalReport {
        alpha,
        rows,
        in_band,
        strictly_increasing,
        certified: in_band && strictly_increasing,
    })
}

impl MarginalReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("marginal alpha={}", self.alpha), "k,sum,ratio,sum_over_2k".into()];
        out.extend(
            self.rows
                .iter()
                .map(|r| format!("{},{:.6},{:.6},{:.6}", r.k, r.sum, r.ratio, r.per_point)),
        );
        out.push(format!(
            "band [{}, {}]: {}; sum/2^k strictly increasing: {}",
            MARGINAL_BAND.0, MARGINAL_BAND.1, self.in_band, self.strictly_increasing
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub j: i32,
    pub dt: f64,
    pub c_m: f64,
    pub tail_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocallyConstantReport {
    pub m: u32,
    pub rows: Vec<DecayRow>,
    pub c_min: f64,
    pub c_max: f64,
    pub all_decay_faster: bool,
    pub certified: bool,
}

/// Coefficient decay over `j` in the range and `dt in {0, 2^-j-1, 2^-j}`.
pub fn verify_locally_constant(j_range: (i32, i32), m: u32) -> Result<LocallyConstantReport> {
    let (lo, hi) = j_range;
    if !(0 <= lo && lo <= hi && hi <= 16) {
        return Err(Error::param(format!("j range [{lo}, {hi}] must lie in [0, 16]")));
    }
    let mut rows = Vec::new();
    for j in lo..=hi {
        for dt in [0.0, 2f64.powi(-j - 1), 2f64.powi(-j)] {
            let d = multiplier_coeff_decay(j, dt, m)?;
            rows.push(DecayRow { j, dt, c_m: d.c_m, tail_ratio: d.tail_ratio });
        }
    }
    let c_min = rows.iter().map(|r| r.c_m).fold(f64::INFINITY, f64::min);
    let c_max = rows.iter().map(|r| r.c_m).fold(0.0, f64::max);
    let all_decay_faster = rows.iter().all(|r| r.tail_ratio < 1.0);
    Ok(LocallyConstantReport {
        m,
        rows,
        c_min,
        c_max,
        all_decay_faster,
        certified: all_decay_faster && c_max <= DECAY_STABILITY * c_min,
    })
}

impl LocallyConstantReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("locally constant M={}", self.m), "j,dt,C_M,tail_ratio".into()];
        out.extend(
            self.rows
                .iter()
                .map(|r| format!("{},{:e},{:.6e},{:.4}", r.j, r.dt, r.c_m, r.tail_ratio)),
        );
        out.push(format!(
            "C_M in [{:.6e}, {:.6e}], spread {:.4} (limit {DECAY_STABILITY})",
            self.c_min,
            self.c_max,
            self.c_max / self.c_min
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhitneyReport {
    pub nu_max: u32,
    /// `(nu_max', defects)` for every `nu_max' <= nu_max`.
    pub coverage: Vec<(u32, usize)>,
    /// `(nu_max', (c, C))` for the separation band, when separated pairs exist.
    pub separation: Vec<(u32, Option<(f64, f64)>)>,
    pub partition_error: f64,
    pub orthogonality_error: f64,
    pub certified: bool,
}

fn random_annulus(grid: GridSpec, seed: u64, arc: Option<((f64, f64), f64)>) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for ky in 0..n {
        for kx in 0..n {
            let (a, b) = (grid.freq(kx), grid.freq(ky));
            let v = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let r = a.hypot(b);
            if !(8.0..=40.0).contains(&r) {
                continue;
            }
            if let Some((range, margin)) = arc {
                if angular_window(b.atan2(a), range, margin) < 1.0 {
                    continue;
                }
            }
            values[ky * n + kx] = v;
        }
    }
    Field::from_values(grid, Space::Frequency, values).expect("sized")
}

/// Exhaustive coverage and separation for every depth up to `nu_max`, plus
/// partition and orthogonality of sector projections on random annulus fields.
pub fn verify_whitney(nu_max: u32, seed: u64) -> Result<WhitneyReport> {
    if !(1..=8).contains(&nu_max) {
        return Err(Error::param(format!("nu_max must lie in [1, 8], got {nu_max}")));
    }
    let base = (0.0, PI / 4.0);
    let mut coverage = Vec::new();
    let mut separation = Vec::new();
    let mut band_ok = true;
    for nu in 1..=nu_max {
        let w = whitney(nu, base)?;
        coverage.push((nu, w.coverage_defects().len()));
        let band = w.separation_band();
        if let Some((lo, hi)) = band {
            band_ok &= lo >= 1.0 - 1e-12 && hi <= 2.0 + 1e-12;
        }
        separation.push((nu, band));
    }

    let grid = GridSpec::new(256, 8.0)?;
    let margin = 0.02;
    let level = nu_max.min(4);
    let w = whitney(level, base)?;
    let f = random_annulus(grid, seed, Some((base, margin)));
    let mut sum = Field::zeros(grid, Space::Frequency);
    for &arc in &w.arcs[level as usize] {
        sum = sum.add(&sector_project(&f, arc, margin)?)?;
    }
    let partition_error = sum.relative_l2_error(&f)?;

    let g = random_annulus(grid, seed.wrapping_add(1), None);
    let arcs = &whitney(2, base)?.arcs[2];
    let (a, c) = (sector_project(&g, arcs[0], margin)?, sector_project(&g, arcs[2], margin)?);
    let lhs = a.add(&c)?.l2_norm().powi(2);
    let rhs = a.l2_norm().powi(2) + c.l2_norm().powi(2);
    let orthogonality_error = (lhs - rhs).abs() / rhs;

    let certified = coverage.iter().all(|c| c.1 == 0)
        && band_ok
        && partition_error <= SECTOR_TOLERANCE
        && orthogonality_error <= SECTOR_TOLERANCE;
    Ok(WhitneyReport {
        nu_max,
        coverage,
        separation,
        partition_error,
        orthogonality_error,
        certified,
    })
}

impl WhitneyReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("whitney nu_max={}", self.nu_max), "nu_max,defects,sep_min,sep_max".into()];
        for ((nu, defects), (_, band)) in self.coverage.iter().zip(&self.separation) {
            let (lo, hi) = band.map_or(("-".into(), "-".into()), |(a, b)| (format!("{a:.6}"), format!("{b:.6}")));
            out.push(format!("{nu},{defects},{lo},{hi}"));
        }
        out.push(format!(
            "sector partition error {:.3e}, orthogonality error {:.3e}",
            self.partition_error, self.orthogonality_error
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilinearRow {
    pub delta: f64,
    pub j: u32,
    pub intervals: usize,
    pub min_product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilinearFit {
    pub kind: CapKind,
    pub rows: Vec<BilinearRow>,
    pub magnitude_exponent: f64,
    pub expected_exponent: f64,
    pub box_exponent: f64,
    pub count_exponent: f64,
    /// `2 (box + count) / magnitude`.
    pub q_implied: f64,
    #[serde(with = "crate::exponents::serde_rational")]
    pub q_exact: Q,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilinearReport {
    pub alpha: f64,
    pub fits: Vec<BilinearFit>,
    pub certified: bool,
}

/// Fits `log min |R*f R*g|` against `log delta` for both cap kinds, and the
/// implied necessary `q` from the box volume and interval count exponents.
pub fn verify_bilinear(deltas: &[f64], alpha: Q) -> Result<BilinearReport> {
    if deltas.len() < 3 {
        return Err(Error::param("bilinear verification needs at least three deltas"));
    }
    let table = thresholds(2, alpha, None)?;
    let a = to_f64(alpha);
    let mut fits = Vec::new();
    for kind in [CapKind::Angular, CapKind::Squashed] {
        let mut rows = Vec::new();
        for &delta in deltas {
            let family = TimeFamily::new(delta, a)?;
            let times = family.sample_times(TIME_C);
            if times.is_empty() {
                return Err(Error::Geometry(format!(
                    "no interval of Gamma meets [0, {TIME_C} delta^-2] at delta = {delta}"
                )));
            }
            let pair = CapPair::new(delta, kind)?;
            rows.push(BilinearRow {
                delta,
                j: family.j,
                intervals: family.within(TIME_C).len(),
                min_product: pair.min_product(&times),
            });
        }
        let mag: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta.ln(), r.min_product.ln())).collect();
        let cnt: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| ((1.0 / r.delta).ln(), (r.intervals as f64).ln()))
            .collect();
        let magnitude_exponent = least_squares(&mag)?.slope;
        let count_exponent = least_squares(&cnt)?.slope;
        let box_exponent = kind.box_exponent();
        let expected = kind.magnitude_exponent();
        fits.push(BilinearFit {
            kind,
            rows,
            magnitude_exponent,
            expected_exponent: expected,
            box_exponent,
            count_exponent,
            q_implied: 2.0 * (box_exponent + count_exponent) / magnitude_exponent,
            q_exact: match kind {
                CapKind::Angular => table.q_necessary_angular,
                CapKind::Squashed => table.q_necessary_squashed,
            },
            within_tolerance: (magnitude_exponent - expected).abs() <= BILINEAR_TOLERANCE,
        });
    }
    let certified = fits.iter().all(|f| f.within_tolerance);
    Ok(BilinearReport { alpha: a, fits, certified })
}

impl BilinearReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("bilinear alpha={}", self.alpha)];
        for f in &self.fits {
            out.push(format!("{} delta,j,intervals,min_product", f.kind));
            out.extend(
                f.rows
                    .iter()
                    .map(|r| format!("{},{},{},{:.6e}", r.delta, r.j, r.intervals, r.min_product)),
            );
            out.push(format!(
                "{}: magnitude exponent {:.4} (expected {}), count exponent {:.4}, implied q {:.4}, exact q {} = {:.4}",
                f.kind,
                f.magnitude_exponent,
                f.expected_exponent,
                f.count_exponent,
                f.q_implied,
                fraction(f.q_exact),
                to_f64(f.q_exact)
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, pass: value <= limit }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub grid: GridSpec,
    pub j: i32,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub certified: bool,
}

/// Limit on `r^{3/2} |J_0(r) - leading term|` over `[5, 500]`.
pub const BESSEL_RESIDUAL_LIMIT: f64 = 0.25;

fn random_field(grid: GridSpec, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len())
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    Field::from_values(grid, Space::Physical, values).expect("sized")
}

/// Unitarity and inversion of the half-wave propagator, the `J_0` multiplier
/// against direct circle quadrature, `J_0` against its integral form and
/// asymptotics, and the dyadic partition of unity.
pub fn verify_operators(grid: GridSpec, j: i32, seed: u64) -> Result<OperatorReport> {
    let f = random_field(grid, seed);
    let norm = f.l2_norm();
    let mut checks = Vec::new();
    let mut iso: f64 = 0.0;
    let mut inverse: f64 = 0.0;
    for t in [0.5, 1.0, 1.7] {
        let u = half_wave(&f, t, 1)?;
        iso = iso.max((u.l2_norm() - norm).abs() / norm);
        let back = half_wave(&u, t, -1)?.to_physical_owned();
        inverse = inverse.max(back.relative_l2_error(&f)?);
    }
    checks.push(Check::at_most("half_wave_isometry", iso, 1e-12));
    checks.push(Check::at_most("half_wave_inverse", inverse, 1e-12));

    let band = littlewood_paley(&f, j)?;
    let mut quad: f64 = 0.0;
    for t in [1.0, 1.5, 2.0] {
        let m = ((8.0 * t * 2f64.powi(j)).ceil() as usize).max(64);
        let a = circular_average(&band, t)?;
        let b = circular_average_quadrature(&band, t, m)?;
        quad = quad.max(a.relative_l2_error(&b)?);
    }
    checks.push(Check::at_most("circular_average_vs_quadrature", quad, 1e-6));

    let series = (0..=1200)
        .map(|i| {
            let x = i as f64 * 0.01;
            (bessel_j0(x) - bessel_j0_integral(x)).abs()
        })
        .fold(0.0, f64::max);
    checks.push(Check::at_most("j0_oracle_0_12", series, 1e-10));
    checks.push(Check::at_most(
        "j0_asymptotic_residual_constant",
        asymptotic_residual_constant(5.0, 500.0, 20_000),
        BESSEL_RESIDUAL_LIMIT,
    ));

    let mut partition: f64 = 0.0;
    let big_j = 12;
    for i in 0..=4000 {
        let t = 2f64.powf(big_j as f64 * i as f64 / 4000.0);
        let s: f64 = (0..=big_j).map(|k| cutoff(CutoffKind::Beta, t / 2f64.powi(k))).sum();
        partition = partition.max((s - 1.0).abs());
    }
    checks.push(Check::at_most("partition_of_unity", partition, 1e-12));

    let certified = checks.iter().all(|c| c.pass);
    Ok(OperatorReport { grid, j, seed, checks, certified })
}

impl OperatorReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!(
            "operators n={} L={} j={} seed={}",
            self.grid.n(),
            self.grid.period(),
            self.j,
            self.seed
        )];
        out.extend(self.checks.iter().map(|c| {
            format!(
                "{}: {:.3e} (limit {:.1e}) {}",
                c.name,
                c.value,
                c.limit,
                if c.pass { "ok" } else { "FAIL" }
            )
        }));
        out
    }
}
