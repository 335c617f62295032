//! Bilinear cap pairs and their adjoint-restriction products.
//!
//! The extension `R* h(x, t) = (2 pi)^-2 \int hhat(xi) e^{i(x.xi + t|xi|)} dxi`
//! of a cap indicator is evaluated with tensor Gauss-Legendre quadrature over
//! the cap, so arbitrarily small caps can be sampled on boxes of size
//! `delta^-2` without a periodic grid.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractal_sets::{build_interval_family, CantorSpec, DEFAULT_CANTOR_L};
use crate::grid::{Field, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapKind {
    /// `f = g`, supported on `{1/2 <= |xi| <= 2, |arg xi| <= phi_0}` with
    /// `phi_0 = 2 asin(delta / 2)`.
    Angular,
    /// `fhat` on `[1 - delta^2, 1 + delta^2] x [-delta, delta]`, `ghat` its mirror
    /// image under `xi_1 -> -xi_1`.
    Squashed,
}

impl CapKind {
    /// Exponent `b` of the spatial box volume `~ delta^-b`.
    pub fn box_exponent(self) -> f64 {
        match self {
            CapKind::Angular => 1.0,
            CapKind::Squashed => 3.0,
        }
    }

    /// Exponent `e` of the predicted lower bound `|R*f R*g| >~ delta^e`.
    pub fn magnitude_exponent(self) -> f64 {
        match self {
            CapKind::Angular => 1.0,
            CapKind::Squashed => 3.0,
        }
    }
}

impl fmt::Display for CapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CapKind::Angular => "angular",
            CapKind::Squashed => "squashed",
        })
    }
}

impl FromStr for CapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "angular" | "bilinear_cap_pair" => Ok(CapKind::Angular),
            "squashed" | "squashed_pair" => Ok(CapKind::Squashed),
            other => Err(Error::Usage(format!("unknown cap kind {other:?}"))),
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

#[derive(Debug, Clone, Copy)]
struct Node {
    xi1: f64,
    xi2: f64,
    weight: f64,
}

#[derive(Debug, Clone)]
pub struct CapPair {
    pub delta: f64,
    pub kind: CapKind,
    /// Cap area; the indicator is scaled by `area^-1/2` so that `||fhat||_2 = 1`.
    pub area: f64,
    f_nodes: Vec<Node>,
    g_nodes: Vec<Node>,
}

const RADIAL_NODES: usize = 32;
const ANGULAR_NODES: usize = 24;
const CARTESIAN_NODES: usize = 20;

/// Spatial box constant `c`.
pub const BOX_C: f64 = 0.25;

impl CapPair {
    pub fn new(delta: f64, kind: CapKind) -> Result<Self> {
        if !(delta > 0.0 && delta <= 0.25) {
            return Err(Error::param(format!("delta must lie in (0, 1/4], got {delta}")));
        }
        let (area, f_nodes) = match kind {
            CapKind::Angular => {
                let phi0 = 2.0 * (delta / 2.0).asin();
                let mut nodes = Vec::with_capacity(RADIAL_NODES * ANGULAR_NODES);
                for &(u, wu) in &gauss_legendre(RADIAL_NODES) {
                    let rho = 1.25 + 0.75 * u;
                    for &(v, wv) in &gauss_legendre(ANGULAR_NODES) {
                        let phi = phi0 * v;
                        nodes.push(Node {
                            xi1: rho * phi.cos(),
                            xi2: rho * phi.sin(),
                            weight: 0.75 * wu * phi0 * wv * rho,
                        });
                    }
                }
                (15.0 / 8.0 * 2.0 * phi0, nodes)
            }
            CapKind::Squashed => {
                let d2 = delta * delta;
                let mut nodes = Vec::with_capacity(CARTESIAN_NODES * CARTESIAN_NODES);
                let gl = gauss_legendre(CARTESIAN_NODES);
                for &(u, wu) in &gl {
                    for &(v, wv) in &gl {
                        nodes.push(Node {
                            xi1: 1.0 + d2 * u,
                            xi2: delta * v,
                            weight: d2 * wu * delta * wv,
                        });
                    }
                }
                (4.0 * d2 * delta, nodes)
            }
        };
        let g_nodes = match kind {
            CapKind::Angular => f_nodes.clone(),
            CapKind::Squashed => f_nodes
                .iter()
                .map(|n| Node { xi1: -n.xi1, ..*n })
                .collect(),
        };
        Ok(Self {
            delta,
            kind,
            area,
            f_nodes,
            g_nodes,
        })
    }

    /// `\int |fhat|^2` by the same quadrature; equals one up to rounding.
    pub fn norm_sq(&self) -> f64 {
        self.f_nodes.iter().map(|n| n.weight).sum::<f64>() / self.area
    }

    fn extend(&self, nodes: &[Node], x1: f64, x2: f64, t: f64) -> Complex64 {
        let amp = self.area.powf(-0.5) / (4.0 * PI * PI);
        let sum: Complex64 = nodes
            .iter()
            .map(|n| {
                let phase = x1 * n.xi1 + x2 * n.xi2 + t * n.xi1.hypot(n.xi2);
                Complex64::from_polar(n.weight, phase)
            })
            .sum();
        sum * amp
    }

    pub fn extension_f(&self, x1: f64, x2: f64, t: f64) -> Complex64 {
        self.extend(&self.f_nodes, x1, x2, t)
    }

    pub fn extension_g(&self, x1: f64, x2: f64, t: f64) -> Complex64 {
        match self.kind {
            CapKind::Angular => self.extension_f(x1, x2, t),
            CapKind::Squashed => self.extend(&self.g_nodes, x1, x2, t),
        }
    }

    /// `|R*f(x, t) R*g(x, t)|`.
    pub fn product(&self, x1: f64, x2: f64, t: f64) -> f64 {
        match self.kind {
            CapKind::Angular => self.extension_f(x1, x2, t).norm_sqr(),
            CapKind::Squashed => (self.extension_f(x1, x2, t) * self.extension_g(x1, x2, t)).norm(),
        }
    }

    /// Sample points of the box at time `t`, a `5 x 5` tensor grid:
    /// angular `|x_1 + t| <= c`, `|x_2| <= c / delta`; squashed
    /// `|x_1| <= c / delta^2`, `|x_2| <= c / delta`.
    pub fn box_points(&self, t: f64) -> Vec<(f64, f64)> {
        let c = BOX_C;
        let (cx, x0, cy) = match self.kind {
            CapKind::Angular => (c, -t, c / self.delta),
            CapKind::Squashed => (c / (self.delta * self.delta), 0.0, c / self.delta),
        };
        let steps = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let mut pts = Vec::with_capacity(25);
        for &u in &steps {
            for &v in &steps {
                pts.push((x0 + cx * u, cy * v));
            }
        }
        pts
    }

    /// Minimum of the product over the box at every time in `times`.
    pub fn min_product(&self, times: &[f64]) -> f64 {
        times
            .par_iter()
            .map(|&t| {
                self.box_points(t)
                    .into_iter()
                    .map(|(x1, x2)| self.product(x1, x2, t))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| f64::INFINITY, f64::min)
    }
}

/// The time family `Gamma` for scale `delta`: the 1-separated unit intervals
/// starting at `2^j (t - 1)`, `t` in the Cantor-type set at scale `2^-j`, with
/// `2^{j-1} <= delta^-2 < 2^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeFamily {
    pub delta: f64,
    pub j: u32,
    pub starts: Vec<f64>,
}

impl TimeFamily {
    pub fn new(delta: f64, alpha: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 0.25) {
            return Err(Error::param(format!("delta must lie in (0, 1/4], got {delta}")));
        }
        let inv = delta.powi(-2);
        let j = (inv.log2() + 1e-9).floor() as u32 + 1;
        let spec = CantorSpec::from_scale(alpha, j, DEFAULT_CANTOR_L)?;
        let family = build_interval_family(&spec, 1.0)?;
        Ok(Self {
            delta,
            j,
            starts: family.starts,
        })
    }

    /// Intervals meeting `[0, c delta^-2]`.
    pub fn within(&self, c: f64) -> Vec<f64> {
        let limit = c * self.delta.powi(-2);
        self.starts.iter().copied().filter(|&s| s <= limit + 1e-9).collect()
    }

    /// Sample times: the midpoint and both quarter points of each interval.
    pub fn sample_times(&self, c: f64) -> Vec<f64> {
        self.within(c)
            .into_iter()
            .flat_map(|s| [s + 0.25, s + 0.5, s + 0.75])
            .collect()
    }
}

/// Lattice version of a cap pair on a periodic grid: the indicator of the cap
/// at the lattice frequencies, normalized to unit `L^2` norm.
pub fn bilinear_cap_pair(grid: GridSpec, delta: f64, kind: CapKind) -> Result<(Field, Field)> {
    if !(delta > 0.0 && delta <= 0.25) {
        return Err(Error::param(format!("delta must lie in (0, 1/4], got {delta}")));
    }
    let phi0 = 2.0 * (delta / 2.0).asin();
    let d2 = delta * delta;
    let in_f = |a: f64, b: f64| match kind {
        CapKind::Angular => {
            let r = a.hypot(b);
            (0.5..=2.0).contains(&r) && b.atan2(a).abs() <= phi0
        }
        CapKind::Squashed => (a - 1.0).abs() <= d2 && b.abs() <= delta,
    };
    if 2.0 * grid.nyquist() < 4.0 {
        return Err(Error::Geometry("grid cannot resolve |xi| = 2".into()));
    }
    let indicator = |sign: f64| {
        Field::from_frequency_fn(grid, |a, b| {
            Complex64::new(if in_f(sign * a, b) { 1.0 } else { 0.0 }, 0.0)
        })
    };
    let f = indicator(1.0);
    let g = match kind {
        CapKind::Angular => f.clone(),
        CapKind::Squashed => indicator(-1.0),
    };
    let norm = f.l2_norm();
    if norm == 0.0 {
        return Err(Error::Geometry(format!(
            "no lattice frequency lies in the {kind} cap for delta = {delta}; increase L"
        )));
    }
    Ok((f.scale(1.0 / norm), g.scale(1.0 / norm)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exactness() {
        for n in [4, 12, 20, 32] {
            let nodes = gauss_legendre(n);
            let w: f64 = nodes.iter().map(|p| p.1).sum();
            assert!((w - 2.0).abs() < 1e-13);
            // exact for degree 2n - 1
            let deg = 2 * n - 2;
            let integral: f64 = nodes.iter().map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((integral - 2.0 / (deg + 1) as f64).abs() < 1e-13, "n = {n}");
        }
        let smooth: f64 = gauss_legendre(16).iter().map(|(x, w)| w * x.cos()).sum();
        assert!((smooth - 2.0 * 1f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn caps_are_normalized() {
        for kind in [CapKind::Angular, CapKind::Squashed] {
            let pair = CapPair::new(0.1, kind).unwrap();
            assert!((pair.norm_sq() - 1.0).abs() < 1e-9, "{kind}");
        }
    }

    #[test]
    fn extension_at_time_zero_origin() {
        // R*f(0, 0) = (2 pi)^-2 area^{1/2}
        let pair = CapPair::new(0.125, CapKind::Squashed).unwrap();
        let v = pair.extension_f(0.0, 0.0, 0.0);
        let expect = pair.area.sqrt() / (4.0 * PI * PI);
        assert!((v.norm() - expect).abs() < 1e-12 * expect.max(1.0));
        assert!((pair.extension_g(0.0, 0.0, 0.0) - v).norm() < 1e-15);
    }

    #[test]
    fn time_family_matches_scale() {
        let fam = TimeFamily::new(0.125, 1.0).unwrap();
        assert_eq!(fam.j, 7);
        assert!(fam.starts.windows(2).all(|w| w[1] - w[0] >= 1.0 - 1e-9));
        assert!(fam.starts.iter().all(|&s| s <= 128.0 + 1e-9));
        assert_eq!(fam.within(2.0).len(), fam.starts.len());
    }

    #[test]
    fn lattice_pair() {
        let g = GridSpec::new(256, 200.0).unwrap();
        let (f, h) = bilinear_cap_pair(g, 0.25, CapKind::Squashed).unwrap();
        assert!((f.l2_norm() - 1.0).abs() < 1e-12);
        assert!((h.l2_norm() - 1.0).abs() < 1e-12);
        let coarse = GridSpec::new(64, 8.0).unwrap();
        assert!(matches!(
            bilinear_cap_pair(coarse, 0.05, CapKind::Squashed),
            Err(Error::Geometry(_))
        ));
        let (a, b) = bilinear_cap_pair(g, 0.25, CapKind::Angular).unwrap();
        assert_eq!(a, b);
    }
}
