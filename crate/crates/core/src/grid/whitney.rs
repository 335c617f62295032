//! Dyadic Whitney decomposition of `Theta_0 x Theta_0` and smooth angular
//! sector projections.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::smooth_step;
use super::Field;
use crate::error::{Error, Result};

/// Dyadic bisection of a base arc with the Whitney pair structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcDecomposition {
    pub nu_max: u32,
    pub base: (f64, f64),
    /// `arcs[nu][k]`: the `k`-th of the `2^nu` equal sub-arcs at level `nu`.
    pub arcs: Vec<Vec<(f64, f64)>>,
    /// `pairs[nu]`: ordered index pairs `(k, k')` related at level `nu`.
    pub pairs: Vec<Vec<(usize, usize)>>,
}

/// Level-`nu` pairs are children of adjacent-or-equal parents that are not
/// adjacent themselves; the last level keeps every pair with
/// adjacent-or-equal parents, so its arcs are at most two widths apart.
pub fn whitney(nu_max: u32, base_arc: (f64, f64)) -> Result<ArcDecomposition> {
    if !(1..=12).contains(&nu_max) {
        return Err(Error::param(format!("nu_max must lie in [1, 12], got {nu_max}")));
    }
    let (a, b) = base_arc;
    let width = b - a;
    if !(width > 0.0 && width <= PI / 4.0 + 1e-12) {
        return Err(Error::param(format!(
            "base arc length must lie in (0, pi/4], got {width}"
        )));
    }
    let mut arcs = Vec::with_capacity(nu_max as usize + 1);
    let mut pairs = Vec::with_capacity(nu_max as usize + 1);
    for nu in 0..=nu_max {
        let count = 1usize << nu;
        let w = width / count as f64;
        arcs.push((0..count).map(|k| (a + k as f64 * w, a + (k + 1) as f64 * w)).collect());
        let mut level = Vec::new();
        if nu > 0 {
            for k in 0..count {
                for kp in 0..count {
                    let parents_close = (k / 2).abs_diff(kp / 2) <= 1;
                    if parents_close && (nu == nu_max || k.abs_diff(kp) >= 2) {
                        level.push((k, kp));
                    }
                }
            }
        }
        pairs.push(level);
    }
    Ok(ArcDecomposition {
        nu_max,
        base: base_arc,
        arcs,
        pairs,
    })
}

impl ArcDecomposition {
    pub fn base_width(&self) -> f64 {
        self.base.1 - self.base.0
    }

    /// The unique `(nu, k, k')` whose product arc contains the finest-level
    /// cell `(a, b)`.
    pub fn locate(&self, a: usize, b: usize) -> Option<(u32, usize, usize)> {
        for nu in 0..=self.nu_max {
            let shift = self.nu_max - nu;
            let (k, kp) = (a >> shift, b >> shift);
            if self.pairs[nu as usize].contains(&(k, kp)) {
                return Some((nu, k, kp));
            }
        }
        None
    }

    /// Number of decomposition pairs containing each finest cell, checked
    /// exhaustively. Returns the cells that are not covered exactly once.
    pub fn coverage_defects(&self) -> Vec<(usize, usize, usize)> {
        let n = 1usize << self.nu_max;
        let mut count = vec![0usize; n * n];
        for nu in 0..=self.nu_max {
            let shift = self.nu_max - nu;
            let size = 1usize << shift;
            for &(k, kp) in &self.pairs[nu as usize] {
                for a in (k * size)..((k + 1) * size) {
                    for b in (kp * size)..((kp + 1) * size) {
                        count[a * n + b] += 1;
                    }
                }
            }
        }
        count
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 1)
            .map(|(i, &c)| (i / n, i % n, c))
            .collect()
    }

    /// Gap between the arcs of a pair at level `nu` (zero when they touch).
    pub fn distance(&self, nu: u32, k: usize, kp: usize) -> f64 {
        let (a0, a1) = self.arcs[nu as usize][k];
        let (b0, b1) = self.arcs[nu as usize][kp];
        (b0 - a1).max(a0 - b1).max(0.0)
    }

    /// `min` and `max` of `dist * 2^nu / |Theta_0|` over pairs with `nu < nu_max`.
    pub fn separation_band(&self) -> Option<(f64, f64)> {
        let mut band: Option<(f64, f64)> = None;
        for nu in 0..self.nu_max {
            for &(k, kp) in &self.pairs[nu as usize] {
                let r = self.distance(nu, k, kp) * 2f64.powi(nu as i32) / self.base_width();
                band = Some(match band {
                    None => (r, r),
                    Some((lo, hi)) => (lo.min(r), hi.max(r)),
                });
            }
        }
        band
    }
}

fn wrap(angle: f64) -> f64 {
    let mut a = angle % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Smooth angular window: `H(theta; a) - H(theta; b)` with `H(.; e)` rising
/// from 0 at `e - margin/2` to 1 at `e + margin/2`. It equals one on the arc
/// shrunk by `margin/2` at each end and vanishes outside the arc grown by
/// `margin/2`; windows of adjacent arcs add up exactly.
pub fn angular_window(theta: f64, arc: (f64, f64), margin: f64) -> f64 {
    let (a, b) = arc;
    if b - a >= 2.0 * PI - 1e-12 {
        return 1.0;
    }
    let centre = 0.5 * (a + b);
    let theta = centre + wrap(theta - centre);
    let rise = |e: f64| smooth_step((theta - e) / margin + 0.5);
    rise(a) - rise(b)
}

/// Multiplies `fhat(xi)` by the angular window of `arc` evaluated at
/// `xi / |xi|`. The zero frequency is assigned the angle 0.
pub fn sector_project(f: &Field, arc: (f64, f64), smooth_margin: f64) -> Result<Field> {
    let (a, b) = arc;
    let full = (b - a - 2.0 * PI).abs() < 1e-12;
    if !(b > a) || (!full && (a < -PI - 1e-12 || b > PI + 1e-12)) {
        return Err(Error::param(format!("arc [{a}, {b}] must lie within [-pi, pi]")));
    }
    if !(smooth_margin > 0.0) {
        return Err(Error::param("smooth margin must be positive"));
    }
    if !full && b - a + smooth_margin >= 2.0 * PI {
        return Err(Error::param("arc plus margin must be shorter than the full circle"));
    }
    Ok(f.apply_multiplier(|x, y| {
        let theta = if x == 0.0 && y == 0.0 { 0.0 } else { y.atan2(x) };
        Complex64::new(angular_window(theta, arc, smooth_margin), 0.0)
    }))
}
