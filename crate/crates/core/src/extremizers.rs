//! Explicit test functions that saturate the necessary conditions `s >= s_i`.
//!
//! Every constructor returns a frequency-space field on a `d = 2` grid. The
//! frequency support of each family reaches `4 * 2^j`, which must stay below
//! the Nyquist frequency.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{cutoff, half_wave, CutoffKind, Field, GridSpec, Space};

pub use crate::bilinear::{bilinear_cap_pair, CapKind, CapPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RadialFocusing,
    Knapp,
    Annulus,
    BilinearCapPair,
    SquashedPair,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::RadialFocusing => "radial_focusing",
            Family::Knapp => "knapp",
            Family::Annulus => "annulus",
            Family::BilinearCapPair => "bilinear_cap_pair",
            Family::SquashedPair => "squashed_pair",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "radial_focusing" => Ok(Family::RadialFocusing),
            "knapp" => Ok(Family::Knapp),
            "annulus" => Ok(Family::Annulus),
            "bilinear_cap_pair" => Ok(Family::BilinearCapPair),
            "squashed_pair" => Ok(Family::SquashedPair),
            other => Err(Error::Usage(format!("unknown extremizer family {other:?}"))),
        }
    }
}

/// Default width constant of the Knapp family.
pub const DEFAULT_C1: f64 = 0.125;
/// Default shell thickness constant.
pub const DEFAULT_C0: f64 = 0.25;
/// Default focusing offset: the single time is `1 + L 2^-j`.
pub const DEFAULT_L: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub c1: f64,
    pub c0: f64,
    #[serde(rename = "L")]
    pub l: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c1: DEFAULT_C1,
            c0: DEFAULT_C0,
            l: DEFAULT_L,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremizerSpec {
    pub family: Family,
    pub j: i32,
    #[serde(default)]
    pub constants: Constants,
}

impl ExtremizerSpec {
    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        check_band(grid, self.j)?;
        let c = self.constants;
        if !(c.c1 > 0.0 && c.c0 > 0.0 && c.l > 0.0) {
            return Err(Error::param("extremizer constants must be positive"));
        }
        Ok(())
    }

    /// The grid-based families; the cap pairs are built with [`CapPair`].
    pub fn build(&self, grid: GridSpec) -> Result<Field> {
        self.validate(&grid)?;
        match self.family {
            Family::RadialFocusing => radial_focusing(grid, self.j),
            Family::Knapp => knapp(grid, self.j, self.constants.c1),
            Family::Annulus => annulus(grid, self.j),
            Family::BilinearCapPair | Family::SquashedPair => Err(Error::Usage(
                "cap pairs are two fields; use bilinear_cap_pair".into(),
            )),
        }
    }
}

/// Largest `j` with `4 * 2^j` below the Nyquist frequency.
pub fn max_j(grid: &GridSpec) -> i32 {
    grid.max_band(4.0)
}

pub(crate) fn check_band(grid: &GridSpec, j: i32) -> Result<()> {
    let max = max_j(grid);
    if j < 0 || j > max {
        return Err(Error::Resolution { j, max_j: max });
    }
    Ok(())
}

/// `fhat(xi) = e^{-i|xi|} beta_1(|xi| / 2^j)`: focuses on the unit circle.
pub fn radial_focusing(grid: GridSpec, j: i32) -> Result<Field> {
    check_band(&grid, j)?;
    let s = 2f64.powi(-j);
    Ok(Field::from_frequency_fn(grid, |a, b| {
        let r = a.hypot(b);
        Complex64::from_polar(cutoff(CutoffKind::Beta1, r * s), -r)
    }))
}

/// `fhat(xi) = beta_0(xi_1 / (c1 2^{j/2})) beta_1(xi_2 / 2^j)`.
pub fn knapp(grid: GridSpec, j: i32, c1: f64) -> Result<Field> {
    check_band(&grid, j)?;
    if !(c1 > 0.0 && c1 <= 1.0) {
        return Err(Error::param(format!("c1 must lie in (0, 1], got {c1}")));
    }
    let w = c1 * 2f64.powf(j as f64 / 2.0);
    let s = 2f64.powi(-j);
    Ok(Field::from_frequency_fn(grid, |a, b| {
        Complex64::new(cutoff(CutoffKind::Beta0, a / w) * cutoff(CutoffKind::Beta1, b * s), 0.0)
    }))
}

/// `fhat(xi) = beta_1(|xi| / 2^j)`.
pub fn annulus(grid: GridSpec, j: i32) -> Result<Field> {
    check_band(&grid, j)?;
    let s = 2f64.powi(-j);
    Ok(Field::from_frequency_fn(grid, |a, b| {
        Complex64::new(cutoff(CutoffKind::Beta1, a.hypot(b) * s), 0.0)
    }))
}

/// `|f(0)| = |L^-2 sum fhat|`, the unphased amplitude of a field.
pub fn peak_amplitude(f: &Field) -> f64 {
    let hat = f.in_space(Space::Frequency);
    let p = f.grid().period();
    let sum: Complex64 = hat.values().iter().copied().sum();
    sum.norm() / (p * p)
}

/// `sup |e^{it(|xi| - xi_2)} - 1|` over the Knapp frequency support for
/// `t` in `[1, 2]`; the support is `|xi_1| < 4 c1 2^{j/2}`, `2^{j-2} < xi_2 < 2^{j+2}`.
pub fn knapp_phase_error(grid: &GridSpec, j: i32, c1: f64) -> f64 {
    let w = 4.0 * c1 * 2f64.powf(j as f64 / 2.0);
    let (lo, hi) = (2f64.powi(j - 2), 2f64.powi(j + 2));
    let n = grid.n();
    let mut worst = 0.0f64;
    for ky in 0..n {
        let b = grid.freq(ky);
        if b <= lo || b >= hi {
            continue;
        }
        for kx in 0..n {
            let a = grid.freq(kx);
            if a.abs() >= w {
                continue;
            }
            let phase = a.hypot(b) - b;
            for t in [1.0, 1.5, 2.0] {
                worst = worst.max((Complex64::from_polar(1.0, t * phase) - 1.0).norm());
            }
        }
    }
    worst
}

/// The analytic majorant `64 c1^2` of [`knapp_phase_error`]: `t <= 2`,
/// `|xi|-xi_2 <= xi_1^2 / (2 xi_2)`, `|xi_1| <= 4 c1 2^{j/2}`, `xi_2 >= 2^{j-2}`.
pub fn knapp_phase_bound(c1: f64) -> f64 {
    64.0 * c1 * c1
}

/// `min |e^{it sqrt(-Lap)} f|` over grid points of the Knapp box
/// `|x_1| <= c 2^{-j/2}`, `|x_2 + t| <= c 2^{-j}` (at least the nearest point).
pub fn knapp_box_minimum(f: &Field, j: i32, c: f64, t: f64) -> Result<f64> {
    let u = half_wave(f, t, 1)?.to_physical_owned();
    let grid = f.grid();
    let (hx, hy) = (c * 2f64.powf(-j as f64 / 2.0), c * 2f64.powi(-j));
    Ok(box_minimum(&u, &grid, |x, y| x.abs() <= hx && (y + t).abs() <= hy, (0.0, -t)))
}

/// `min |e^{it sqrt(-Lap)} f|` over grid points with `t - c0 2^-j <= |x| <= t`.
pub fn shell_minimum(f: &Field, j: i32, c0: f64, t: f64) -> Result<f64> {
    let u = half_wave(f, t, 1)?.to_physical_owned();
    let grid = f.grid();
    let inner = t - c0 * 2f64.powi(-j);
    Ok(box_minimum(&u, &grid, |x, y| {
        let r = x.hypot(y);
        r >= inner && r <= t
    }, (t, 0.0)))
}

fn box_minimum<F: Fn(f64, f64) -> bool>(u: &Field, grid: &GridSpec, inside: F, centre: (f64, f64)) -> f64 {
    let n = grid.n();
    let mut min = f64::INFINITY;
    for iy in 0..n {
        let y = grid.coord(iy);
        for ix in 0..n {
            let x = grid.coord(ix);
            if inside(x, y) {
                min = min.min(u.at(ix, iy).norm());
            }
        }
    }
    if min.is_infinite() {
        u.sample(centre.0, centre.1).norm()
    } else {
        min
    }
}

impl Field {
    pub(crate) fn to_physical_owned(&self) -> Field {
        self.in_space(Space::Physical).into_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::lp_norm;

    fn grid() -> GridSpec {
        GridSpec::new(512, 8.0).unwrap()
    }

    #[test]
    fn guard() {
        let g = grid();
        let max = max_j(&g);
        assert!(4.0 * 2f64.powi(max) < g.nyquist());
        assert!(matches!(radial_focusing(g, max + 1), Err(Error::Resolution { .. })));
        assert!(knapp(g, 4, 0.0).is_err());
    }

    #[test]
    fn radial_plateau_modulus() {
        let g = grid();
        let j = 4;
        let f = radial_focusing(g, j).unwrap();
        // lattice point (16, 0) in units of 2 pi / L sits at |xi| = 4 pi, inside the plateau
        let k = 16usize;
        let v = f.at(k, 0);
        assert!(((v.norm()) - 1.0).abs() < 1e-12);
        assert!((v.arg() + g.freq(k)).sin().abs() < 1e-9);
    }

    #[test]
    fn annulus_is_real() {
        let g = grid();
        let f = annulus(g, 4).unwrap().to_physical().unwrap();
        let worst = f.values().iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        assert!(worst < 1e-12 * f.max_abs());
    }

    #[test]
    fn knapp_support_is_exact() {
        let g = grid();
        let j = 5;
        let c1 = 0.25;
        let f = knapp(g, j, c1).unwrap();
        let w = 4.0 * c1 * 2f64.powf(j as f64 / 2.0);
        for ky in 0..g.n() {
            for kx in 0..g.n() {
                let (a, b) = (g.freq(kx), g.freq(ky));
                if a.abs() >= w || b <= 2f64.powi(j - 2) || b >= 2f64.powi(j + 2) {
                    assert_eq!(f.at(kx, ky).norm(), 0.0);
                }
            }
        }
        assert!(knapp_phase_error(&g, j, c1) <= knapp_phase_bound(c1) + 1e-12);
    }

    #[test]
    fn knapp_centre_is_large() {
        let g = grid();
        for j in [4, 5] {
            let f = knapp(g, j, DEFAULT_C1).unwrap();
            let peak = peak_amplitude(&f);
            let u = half_wave(&f, 1.5, 1).unwrap().to_physical().unwrap();
            assert!(u.sample(0.0, -1.5).norm() >= 0.5 * peak);
            assert!(lp_norm(&f, 2.0).unwrap() > 0.0);
        }
    }

    #[test]
    fn family_names_round_trip() {
        for fam in [Family::RadialFocusing, Family::Knapp, Family::Annulus, Family::BilinearCapPair, Family::SquashedPair] {
            assert_eq!(fam.to_string().parse::<Family>().unwrap(), fam);
        }
        let spec = ExtremizerSpec { family: Family::Knapp, j: 4, constants: Constants::default() };
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"knapp\"") && text.contains("\"L\""));
        let back: ExtremizerSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
