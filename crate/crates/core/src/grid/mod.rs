//! Two-dimensional periodic grids and complex fields on them.
//!
//! A [`GridSpec`] discretises the torus `[-L/2, L/2)^2` with `n` points per
//! axis. Values are stored row-major, `values[iy * n + ix]`; the physical
//! index `m` sits at `x = m * cell` for `m < n/2` and at `(m - n) * cell`
//! otherwise, so the origin is index 0. The frequency index `k` is the lattice
//! point `xi = 2 pi k' / L` with the same signed convention.
//!
//! Transform convention:
//!
//! * forward: `fhat(xi) = cell^2 * sum_x f(x) e^{-i x.xi}`
//! * backward: `f(x) = L^-2 * sum_xi fhat(xi) e^{i x.xi}`
//!
//! which approximates the continuous pair with the `(2 pi)^-2` factor on the
//! synthesis side. Plancherel reads `cell^2 sum |f|^2 = L^-2 sum |fhat|^2`.

pub mod bessel;
pub mod coeff_decay;
pub mod cutoff;
mod fft;
pub mod io;
pub mod ops;
pub mod whitney;

use std::borrow::Cow;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bessel::{asymptotic_residual_constant, bessel_j0, bessel_j0_integral};
pub use coeff_decay::{multiplier_coeff_decay, CoeffDecay};
pub use cutoff::{cutoff, psi, smooth_step, CutoffKind, CutoffProfile};
pub use ops::{
    circular_average, circular_average_quadrature, half_wave, littlewood_paley, low_pass,
    lp_norm, maximal_function, mixed_norm, mixed_norm_of,
};
pub use whitney::{sector_project, whitney, ArcDecomposition};

/// Parallel sum with a fixed reduction order, so repeated runs agree bit for bit.
pub(crate) fn ordered_sum<F>(values: &[Complex64], f: F) -> f64
where
    F: Fn(&Complex64) -> f64 + Sync,
{
    let partial: Vec<f64> = values
        .par_chunks(4096)
        .map(|c| c.iter().map(&f).sum::<f64>())
        .collect();
    partial.iter().sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct GridSpec {
    n: usize,
    period: f64,
}

#[derive(Deserialize)]
struct RawGrid {
    n: usize,
    #[serde(alias = "L")]
    period: f64,
}

impl TryFrom<RawGrid> for GridSpec {
    type Error = Error;

    fn try_from(raw: RawGrid) -> Result<Self> {
        GridSpec::new(raw.n, raw.period)
    }
}

impl Default for GridSpec {
    /// `n = 1024`, `L = 8`.
    fn default() -> Self {
        Self { n: 1024, period: 8.0 }
    }
}

impl GridSpec {
    pub fn new(n: usize, period: f64) -> Result<Self> {
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::param(format!("n must be a power of two >= 64, got {n}")));
        }
        if !(period > 4.0) || !period.is_finite() {
            return Err(Error::param(format!("period must exceed 4, got {period}")));
        }
        Ok(Self { n, period })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn cell(&self) -> f64 {
        self.period / self.n as f64
    }

    /// Largest resolvable frequency component, `pi n / L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / self.period
    }

    /// Lattice spacing in frequency, `2 pi / L`.
    pub fn frequency_step(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn signed(&self, m: usize) -> i64 {
        if m < self.n / 2 {
            m as i64
        } else {
            m as i64 - self.n as i64
        }
    }

    /// Physical coordinate of index `m` along an axis.
    pub fn coord(&self, m: usize) -> f64 {
        self.signed(m) as f64 * self.cell()
    }

    /// Frequency of index `k` along an axis.
    pub fn freq(&self, k: usize) -> f64 {
        self.signed(k) as f64 * self.frequency_step()
    }

    /// Index whose physical coordinate is closest to `x` (taken mod `L`).
    pub fn index_of(&self, x: f64) -> usize {
        let m = (x / self.cell()).round() as i64;
        m.rem_euclid(self.n as i64) as usize
    }

    /// Largest `j` for which a band reaching `factor * 2^j` stays strictly
    /// below the Nyquist frequency.
    pub fn max_band(&self, factor: f64) -> i32 {
        let mut j = 0;
        while factor * 2f64.powi(j + 1) < self.nyquist() {
            j += 1;
        }
        if factor * 2f64.powi(j) < self.nyquist() {
            j
        } else {
            j - 1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Physical,
    Frequency,
}

/// Complex samples on a grid, tagged with their representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    values: Vec<Complex64>,
    space: Space,
}

impl Field {
    pub fn zeros(grid: GridSpec, space: Space) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            space,
        }
    }

    pub fn from_values(grid: GridSpec, space: Space, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::param(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values, space })
    }

    /// Physical field `f(x, y)`.
    pub fn from_physical_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        Self::build(grid, Space::Physical, |ix, iy| f(grid.coord(ix), grid.coord(iy)))
    }

    /// Frequency field `fhat(xi_1, xi_2)`.
    pub fn from_frequency_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        Self::build(grid, Space::Frequency, |kx, ky| f(grid.freq(kx), grid.freq(ky)))
    }

    fn build<F>(grid: GridSpec, space: Space, f: F) -> Self
    where
        F: Fn(usize, usize) -> Complex64 + Sync,
    {
        let n = grid.n;
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        values.par_chunks_mut(n).enumerate().for_each(|(iy, row)| {
            for (ix, v) in row.iter_mut().enumerate() {
                *v = f(ix, iy);
            }
        });
        Self { grid, values, space }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[iy * self.grid.n + ix]
    }

    /// Value at the grid point nearest to `(x, y)`.
    pub fn sample(&self, x: f64, y: f64) -> Complex64 {
        self.at(self.grid.index_of(x), self.grid.index_of(y))
    }

    pub fn to_frequency(&self) -> Result<Field> {
        if self.space != Space::Physical {
            return Err(Error::Usage("field is already in frequency space".into()));
        }
        let mut values = self.values.clone();
        fft::fft2(&mut values, self.grid.n, fft::Direction::Forward);
        let scale = self.grid.cell() * self.grid.cell();
        values.par_iter_mut().for_each(|v| *v *= scale);
        Ok(Field {
            grid: self.grid,
            values,
            space: Space::Frequency,
        })
    }

    pub fn to_physical(&self) -> Result<Field> {
        if self.space != Space::Frequency {
            return Err(Error::Usage("field is already in physical space".into()));
        }
        let mut values = self.values.clone();
        fft::fft2(&mut values, self.grid.n, fft::Direction::Backward);
        let scale = 1.0 / (self.grid.period * self.grid.period);
        values.par_iter_mut().for_each(|v| *v *= scale);
        Ok(Field {
            grid: self.grid,
            values,
            space: Space::Physical,
        })
    }

    /// This field in the requested representation, converting if needed.
    pub fn in_space(&self, space: Space) -> Cow<'_, Field> {
        if self.space == space {
            Cow::Borrowed(self)
        } else if space == Space::Frequency {
            Cow::Owned(self.to_frequency().expect("space checked"))
        } else {
            Cow::Owned(self.to_physical().expect("space checked"))
        }
    }

    /// Multiplies the frequency coefficients by `m(xi_1, xi_2)`; the result
    /// is returned in the representation of `self`.
    pub fn apply_multiplier<M>(&self, m: M) -> Field
    where
        M: Fn(f64, f64) -> Complex64 + Sync,
    {
        let mut spec = self.in_space(Space::Frequency).into_owned();
        let grid = self.grid;
        let n = grid.n;
        spec.values.par_chunks_mut(n).enumerate().for_each(|(ky, row)| {
            let xi2 = grid.freq(ky);
            for (kx, v) in row.iter_mut().enumerate() {
                *v *= m(grid.freq(kx), xi2);
            }
        });
        if self.space == Space::Physical {
            spec.to_physical().expect("frequency field")
        } else {
            spec
        }
    }

    pub fn map<F>(&self, f: F) -> Field
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        Field {
            grid: self.grid,
            values: self.values.par_iter().map(|v| f(*v)).collect(),
            space: self.space,
        }
    }

    pub fn scale(&self, s: f64) -> Field {
        self.map(|v| v * s)
    }

    /// Pointwise combination of two fields in the same representation.
    pub fn zip_with<F>(&self, other: &Field, f: F) -> Result<Field>
    where
        F: Fn(Complex64, Complex64) -> Complex64 + Sync,
    {
        if self.grid != other.grid {
            return Err(Error::Usage("fields live on different grids".into()));
        }
        let other = other.in_space(self.space);
        Ok(Field {
            grid: self.grid,
            values: self
                .values
                .par_iter()
                .zip(other.values.par_iter())
                .map(|(a, b)| f(*a, *b))
                .collect(),
            space: self.space,
        })
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.par_iter().map(|v| v.norm()).reduce(|| 0.0, f64::max)
    }

    /// `L^2` norm computed in the field's own representation; both agree by
    /// Plancherel.
    pub fn l2_norm(&self) -> f64 {
        let sum = ordered_sum(&self.values, |v| v.norm_sqr());
        match self.space {
            Space::Physical => (sum * self.grid.cell() * self.grid.cell()).sqrt(),
            Space::Frequency => (sum).sqrt() / self.grid.period,
        }
    }

    /// `L^2` distance relative to the norm of `reference`.
    pub fn relative_l2_error(&self, reference: &Field) -> Result<f64> {
        let diff = self.sub(reference)?;
        Ok(diff.l2_norm() / reference.l2_norm())
    }

    /// Mean value `L^-2 * integral f`, read off the zero frequency.
    pub fn mean(&self) -> Complex64 {
        match self.space {
            Space::Frequency => self.values[0] / (self.grid.period * self.grid.period),
            Space::Physical => {
                let re = ordered_sum(&self.values, |v| v.re);
                let im = ordered_sum(&self.values, |v| v.im);
                Complex64::new(re, im) / self.grid.len() as f64
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn small() -> GridSpec {
        GridSpec::new(64, 8.0).unwrap()
    }

    fn random_field(grid: GridSpec, seed: u64) -> Field {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        Field::from_values(grid, Space::Physical, values).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new(100, 8.0).is_err());
        assert!(GridSpec::new(32, 8.0).is_err());
        assert!(GridSpec::new(64, 4.0).is_err());
        let g = GridSpec::default();
        assert_eq!(g.n(), 1024);
        assert!((g.nyquist() - 402.1238596594935).abs() < 1e-9);
        assert_eq!(g.max_band(2.0), 7);
        assert_eq!(GridSpec::new(2048, 8.0).unwrap().max_band(4.0), 7);
    }

    #[test]
    fn coordinates() {
        let g = small();
        assert_eq!(g.coord(0), 0.0);
        assert_eq!(g.coord(31), 31.0 * 0.125);
        assert_eq!(g.coord(32), -4.0);
        assert_eq!(g.index_of(-0.125), 63);
        assert!((g.freq(1) - 2.0 * PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn impulse_is_flat() {
        let g = small();
        let mut f = Field::zeros(g, Space::Physical);
        f.values[0] = Complex64::new(1.0, 0.0);
        let hat = f.to_frequency().unwrap();
        let c2 = g.cell() * g.cell();
        for v in hat.values() {
            assert!((v - Complex64::new(c2, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn plane_wave_single_coefficient() {
        let g = small();
        let (kx, ky) = (3usize, 61usize);
        let (a, b) = (g.freq(kx), g.freq(ky));
        let f = Field::from_physical_fn(g, |x, y| Complex64::from_polar(1.0, a * x + b * y));
        let hat = f.to_frequency().unwrap();
        for iy in 0..g.n() {
            for ix in 0..g.n() {
                let v = hat.at(ix, iy).norm();
                if (ix, iy) == (kx, ky) {
                    assert!((v - g.period() * g.period()).abs() < 1e-10);
                } else {
                    assert!(v < 1e-10, "({ix}, {iy}): {v}");
                }
            }
        }
    }

    #[test]
    fn round_trip_and_plancherel() {
        let g = GridSpec::new(128, 6.0).unwrap();
        let f = random_field(g, 3);
        let hat = f.to_frequency().unwrap();
        let back = hat.to_physical().unwrap();
        assert!(back.relative_l2_error(&f).unwrap() < 1e-12);
        assert!((hat.l2_norm() / f.l2_norm() - 1.0).abs() < 1e-12);
        assert!(hat.to_frequency().is_err());
        assert!(f.to_physical().is_err());
    }

    #[test]
    fn mean_from_zero_frequency() {
        let g = small();
        let f = random_field(g, 9);
        let hat = f.to_frequency().unwrap();
        assert!((hat.mean() - f.mean()).norm() < 1e-14);
    }
}
