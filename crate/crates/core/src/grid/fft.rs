//! Unnormalised 2D FFT over square row-major arrays.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Direction {
    Forward,
    Backward,
}

type Plan = Arc<dyn Fft<f64>>;

fn plan(n: usize, dir: Direction) -> Plan {
    static PLANS: OnceLock<Mutex<HashMap<(usize, Direction), Plan>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry((n, dir))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            match dir {
                Direction::Forward => planner.plan_fft_forward(n),
                Direction::Backward => planner.plan_fft_inverse(n),
            }
        })
        .clone()
}

fn rows(data: &mut [Complex64], n: usize, fft: &Plan) {
    data.par_chunks_mut(n * 8).for_each(|block| {
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for row in block.chunks_mut(n) {
            fft.process_with_scratch(row, &mut scratch);
        }
    });
}

fn transpose(data: &[Complex64], out: &mut [Complex64], n: usize) {
    const B: usize = 32;
    out.par_chunks_mut(n * B).enumerate().for_each(|(bi, chunk)| {
        let i0 = bi * B;
        let rows_here = chunk.len() / n;
        for j0 in (0..n).step_by(B) {
            for di in 0..rows_here {
                let i = i0 + di;
                for j in j0..(j0 + B).min(n) {
                    chunk[di * n + j] = data[j * n + i];
                }
            }
        }
    });
}

/// In-place unnormalised transform: forward uses `e^{-i}`, backward `e^{+i}`.
pub(crate) fn fft2(data: &mut [Complex64], n: usize, dir: Direction) {
    assert_eq!(data.len(), n * n);
    let fft = plan(n, dir);
    let mut tmp = vec![Complex64::new(0.0, 0.0); n * n];
    rows(data, n, &fft);
    transpose(data, &mut tmp, n);
    rows(&mut tmp, n, &fft);
    transpose(&tmp, data, n);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_dft() {
        let n = 8;
        let data: Vec<Complex64> = (0..n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut fast = data.clone();
        fft2(&mut fast, n, Direction::Forward);
        for ky in 0..n {
            for kx in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for y in 0..n {
                    for x in 0..n {
                        let phase = -2.0 * std::f64::consts::PI * ((kx * x + ky * y) as f64) / n as f64;
                        acc += data[y * n + x] * Complex64::from_polar(1.0, phase);
                    }
                }
                assert!((acc - fast[ky * n + kx]).norm() < 1e-10);
            }
        }
    }
}
