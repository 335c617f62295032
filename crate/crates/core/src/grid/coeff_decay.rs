//! Fourier-series coefficients of `beta(|xi|) e^{i 2^j dt |xi|}` on `[-pi, pi]^2`.
//!
//! Rapid coefficient decay, uniform in `dt` with `|dt| <= 2^-j`, is what lets a
//! `2^j`-band-limited wave be treated as constant over time windows of length
//! `2^-j`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::{cutoff, CutoffKind};
use super::fft::{fft2, Direction};
use crate::error::{Error, Result};

/// Samples per axis on `[-pi, pi)`.
pub const SAMPLES: usize = 1024;

/// Largest `|k|` reported; well inside the alias-free range of [`SAMPLES`].
pub const MAX_SHELL: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffDecay {
    pub j: i32,
    pub dt: f64,
    pub m: u32,
    /// `(s, max |d_k|)` over coefficients with `round(|k|) = s`.
    pub shells: Vec<(usize, f64)>,
    /// `sup (1 + |k|)^M |d_k|` over `|k| <= MAX_SHELL`.
    pub c_m: f64,
    /// `sum |d_k|` over `|k| <= MAX_SHELL`.
    pub sum_abs: f64,
    /// `sup (1 + |k|)^M |d_k|` over the outer quarter `3K/4 <= |k| <= K`,
    /// relative to `c_m`. Below one means the weighted coefficients are
    /// decreasing at the end of the range, i.e. decay faster than `|k|^-M`.
    pub tail_ratio: f64,
}

impl CoeffDecay {
    pub fn decays_faster(&self) -> bool {
        self.tail_ratio < 1.0
    }
}

/// Coefficient table for phase `2^j dt`.
pub fn multiplier_coeff_decay(j: i32, dt: f64, m: u32) -> Result<CoeffDecay> {
    if m > 12 {
        return Err(Error::param(format!("M must be at most 12, got {m}")));
    }
    if !(dt.abs() <= 2f64.powi(-j) * (1.0 + 1e-12)) {
        return Err(Error::Precondition(format!(
            "|dt| = {} exceeds 2^-j = {}",
            dt.abs(),
            2f64.powi(-j)
        )));
    }
    let n = SAMPLES;
    let phase = 2f64.powi(j) * dt;
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let signed = |i: usize| if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
    let mut data: Vec<Complex64> = (0..n * n)
        .map(|idx| {
            let (ix, iy) = (idx % n, idx / n);
            let r = (signed(ix) * h).hypot(signed(iy) * h);
            Complex64::from_polar(cutoff(CutoffKind::Beta, r), phase * r)
        })
        .collect();
    fft2(&mut data, n, Direction::Forward);
    let norm = 1.0 / (n * n) as f64;

    let k_max = MAX_SHELL;
    let tail_start = 3 * k_max / 4;
    let mut shells = vec![0.0f64; k_max + 1];
    let (mut c_m, mut tail, mut sum_abs) = (0.0f64, 0.0f64, 0.0f64);
    let span = k_max as i64;
    for ky in -span..=span {
        for kx in -span..=span {
            let r = ((kx * kx + ky * ky) as f64).sqrt();
            if r > k_max as f64 {
                continue;
            }
            let ix = kx.rem_euclid(n as i64) as usize;
            let iy = ky.rem_euclid(n as i64) as usize;
            let d = data[iy * n + ix].norm() * norm;
            sum_abs += d;
            let s = r.round() as usize;
            shells[s] = shells[s].max(d);
            let weighted = (1.0 + r).powi(m as i32) * d;
            c_m = c_m.max(weighted);
            if r >= tail_start as f64 {
                tail = tail.max(weighted);
            }
        }
    }
    Ok(CoeffDecay {
        j,
        dt,
        m,
        shells: shells.into_iter().enumerate().collect(),
        c_m,
        sum_abs,
        tail_ratio: tail / c_m,
    })
}
