//! Fourier multipliers and norms on grid fields.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::bessel::bessel_j0;
use super::cutoff::{cutoff, psi, CutoffKind};
use super::{Field, Space};
use crate::error::{Error, Result};
use crate::fractal_sets::{discretize, TimeSet};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Largest `j` accepted by [`littlewood_paley`] on this field's grid.
pub fn max_lp_band(f: &Field) -> i32 {
    f.grid().max_band(2.0)
}

/// `P_j f`, the multiplier `beta(|xi| / 2^j)`.
pub fn littlewood_paley(f: &Field, j: i32) -> Result<Field> {
    let max_j = max_lp_band(f);
    if j < 0 || j > max_j {
        return Err(Error::Resolution { j, max_j });
    }
    let scale = 2f64.powi(-j);
    Ok(f.apply_multiplier(|a, b| real(cutoff(CutoffKind::Beta, a.hypot(b) * scale))))
}

/// `P_0 f`, the multiplier `psi(|xi|)`, so that `P_0 + sum_{j=1}^J P_j`
/// is the identity on frequencies below `2^J`.
pub fn low_pass(f: &Field) -> Field {
    f.apply_multiplier(|a, b| real(psi(a.hypot(b))))
}

/// `e^{i sign t sqrt(-Laplacian)} f`.
pub fn half_wave(f: &Field, t: f64, sign: i8) -> Result<Field> {
    if sign != 1 && sign != -1 {
        return Err(Error::param(format!("sign must be +1 or -1, got {sign}")));
    }
    let s = sign as f64 * t;
    Ok(f.apply_multiplier(|a, b| Complex64::from_polar(1.0, s * a.hypot(b))))
}

fn check_radius(f: &Field, t: f64) -> Result<()> {
    let limit = f.grid().period() / 4.0;
    if !(t > 0.0 && t <= limit) {
        return Err(Error::Geometry(format!(
            "radius {t} must lie in (0, L/4] = (0, {limit}] to avoid wraparound"
        )));
    }
    Ok(())
}

/// Average over the circle of radius `t`: the multiplier `J_0(t |xi|)`.
pub fn circular_average(f: &Field, t: f64) -> Result<Field> {
    check_radius(f, t)?;
    Ok(f.apply_multiplier(|a, b| real(bessel_j0(t * a.hypot(b)))))
}

/// Independent oracle for [`circular_average`]: the `m`-point trapezoid rule
/// `(1/m) sum_i f(x - t (cos theta_i, sin theta_i))`.
///
/// Each sample is an exact spectral translate (multiplier
/// `e^{-i t xi.(cos theta_i, sin theta_i)}`), so no interpolation error enters
/// for band-limited fields and no Bessel function is evaluated.
pub fn circular_average_quadrature(f: &Field, t: f64, m: usize) -> Result<Field> {
    if m < 64 {
        return Err(Error::param(format!("quadrature needs m >= 64 nodes, got {m}")));
    }
    check_radius(f, t)?;
    let dirs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / m as f64;
            (t * th.cos(), t * th.sin())
        })
        .collect();
    let inv_m = 1.0 / m as f64;
    Ok(f.apply_multiplier(|a, b| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, s) in &dirs {
            acc += Complex64::from_polar(1.0, -(a * c + b * s));
        }
        acc * inv_m
    }))
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::param(format!("exponent must lie in [1, inf], got {p}")));
    }
    Ok(())
}

/// `(sum |f|^p cell^2)^{1/p}`, or `max |f|` for `p = inf`.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let phys = f.in_space(Space::Physical);
    let max = phys.max_abs();
    if p.is_infinite() || max == 0.0 {
        return Ok(max);
    }
    // rescaling by the maximum keeps large p from overflowing
    let sum = super::ordered_sum(phys.values(), |v| (v.norm() / max).powf(p));
    let cell = f.grid().cell();
    Ok(max * (sum * cell * cell).powf(1.0 / p))
}

/// `(sum_t ||F(., t)||_q^q)^{1/q}` over a finite family, `max_t` for `q = inf`.
pub fn mixed_norm(fields: &[(f64, Field)], q: f64) -> Result<f64> {
    check_exponent(q)?;
    if fields.is_empty() {
        return Err(Error::Usage("mixed norm over an empty time set".into()));
    }
    let norms = fields
        .iter()
        .map(|(_, f)| lp_norm(f, q))
        .collect::<Result<Vec<_>>>()?;
    mixed_norm_of(&norms, q)
}

/// Combines per-time `L^q` norms into the mixed norm.
pub fn mixed_norm_of(norms: &[f64], q: f64) -> Result<f64> {
    check_exponent(q)?;
    if norms.is_empty() {
        return Err(Error::Usage("mixed norm over an empty time set".into()));
    }
    let max = norms.iter().copied().fold(0.0, f64::max);
    if q.is_infinite() || max == 0.0 {
        return Ok(max);
    }
    let sum: f64 = norms.iter().map(|n| (n / max).powf(q)).sum();
    Ok(max * sum.powf(1.0 / q))
}

/// `sup_{t in E} |A_t f|` pointwise. With `j` given, `f` is replaced by
/// `P_j f` and `E` by its greedy `2^-j` discretisation.
pub fn maximal_function(f: &Field, set: &TimeSet, j: Option<i32>) -> Result<Field> {
    if set.is_empty() {
        return Err(Error::param("maximal function over an empty set"));
    }
    let (g, times) = match j {
        Some(j) => (littlewood_paley(f, j)?, discretize(set, 2f64.powi(-j))),
        None => (f.clone(), set.clone()),
    };
    check_radius(f, set.max().expect("nonempty"))?;
    let hat = g.in_space(Space::Frequency).into_owned();
    let mut out = vec![0.0f64; f.grid().len()];
    for &t in times.points() {
        let avg = circular_average(&hat, t)?.to_physical()?;
        out.par_iter_mut()
            .zip(avg.values().par_iter())
            .for_each(|(o, v)| *o = o.max(v.norm()));
    }
    Field::from_values(
        f.grid(),
        Space::Physical,
        out.into_iter().map(real).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::super::GridSpec;
    use super::*;
    use rand::{Rng, SeedableRng};

    fn grid() -> GridSpec {
        GridSpec::new(256, 8.0).unwrap()
    }

    fn random_field(g: GridSpec, seed: u64) -> Field {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let v = (0..g.len())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        Field::from_values(g, Space::Physical, v).unwrap()
    }

    fn gaussian(g: GridSpec, width: f64) -> Field {
        Field::from_physical_fn(g, |x, y| real((-(x * x + y * y) / (2.0 * width * width)).exp()))
    }

    #[test]
    fn lp_constant_and_guard() {
        let g = grid();
        let c = Field::from_physical_fn(g, |_, _| real(1.0));
        assert!(littlewood_paley(&c, 3).unwrap().max_abs() < 1e-12);
        let max_j = max_lp_band(&c);
        assert!(2f64.powi(max_j + 1) < g.nyquist());
        assert!(2f64.powi(max_j + 2) >= g.nyquist());
        match littlewood_paley(&c, max_j + 1) {
            Err(Error::Resolution { max_j: m, .. }) => assert_eq!(m, max_j),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lp_plateau_and_idempotence() {
        let g = grid();
        let j = 4;
        let f = Field::from_frequency_fn(g, |a, b| {
            let r = a.hypot(b) / 2f64.powi(j);
            real(if (0.8..=1.2).contains(&r) { 1.0 } else { 0.0 })
        });
        let pf = littlewood_paley(&f, j).unwrap();
        // beta = psi(t) - psi(2t) equals 1 only at t = 1; compare with the exact multiplier
        let expected = f.apply_multiplier(|a, b| real(cutoff(CutoffKind::Beta, a.hypot(b) / 16.0)));
        assert!(pf.relative_l2_error(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn lp_telescoping() {
        let g = grid();
        let big_j = 5;
        // band-limited below 2^J
        let f = gaussian(g, 0.6).apply_multiplier(|a, b| real(psi(a.hypot(b) / 16.0)));
        let mut sum = low_pass(&f);
        for j in 1..=big_j {
            sum = sum.add(&littlewood_paley(&f, j).unwrap()).unwrap();
        }
        assert!(sum.relative_l2_error(&f).unwrap() < 1e-10);
    }

    #[test]
    fn half_wave_unitary() {
        let g = grid();
        let f = random_field(g, 1);
        for &t in &[0.0, 0.7, 1.5, 2.0] {
            let u = half_wave(&f, t, 1).unwrap();
            assert!((u.l2_norm() / f.l2_norm() - 1.0).abs() < 1e-12);
            let back = half_wave(&u, t, -1).unwrap();
            assert!(back.relative_l2_error(&f).unwrap() < 1e-12);
        }
        assert!(half_wave(&f, 0.0, 1).unwrap().relative_l2_error(&f).unwrap() < 1e-14);
        assert!(half_wave(&f, 1.0, 0).is_err());
    }

    #[test]
    fn averages_of_constants() {
        let g = grid();
        let c = Field::from_physical_fn(g, |_, _| real(2.5));
        for t in [1.0, 1.5, 2.0] {
            let a = circular_average(&c, t).unwrap();
            assert!(a.values().iter().all(|v| (v - real(2.5)).norm() < 1e-12));
            let b = circular_average_quadrature(&c, t, 64).unwrap();
            assert!(b.values().iter().all(|v| (v - real(2.5)).norm() < 1e-12));
        }
        assert!(circular_average(&c, 2.5).is_err());
        assert!(circular_average_quadrature(&c, 1.0, 32).is_err());
    }

    #[test]
    fn average_matches_quadrature() {
        let g = grid();
        let j = 4;
        let f = littlewood_paley(&gaussian(g, 0.3), j).unwrap();
        for t in [1.0, 1.37, 2.0] {
            let m = (8.0 * t * 2f64.powi(j)).ceil() as usize;
            let a = circular_average(&f, t).unwrap();
            let b = circular_average_quadrature(&f, t, m.max(64)).unwrap();
            let err = a.relative_l2_error(&b).unwrap();
            assert!(err < 1e-6, "t = {t}: {err}");
        }
    }

    #[test]
    fn wide_bump_is_locally_constant() {
        let g = grid();
        // radius-0.5 circle inside a Gaussian of width 1.2: the centre value
        // drops only by the second-order term t^2 / (2 w^2)
        let wide = gaussian(g, 1.2);
        let a = circular_average(&wide, 0.5).unwrap();
        let exact = (-0.25f64 / (2.0 * 1.44)).exp();
        assert!((a.at(0, 0).re - exact).abs() < 1e-3 * exact * 5.0);
        assert!((a.at(0, 0).re - 1.0).abs() < 0.1);
    }

    #[test]
    fn norms() {
        let g = GridSpec::new(64, 8.0).unwrap();
        let cell = g.cell();
        let mut v = vec![real(0.0); g.len()];
        for x in v.iter_mut().take(10) {
            *x = real(1.0);
        }
        let f = Field::from_values(g, Space::Physical, v).unwrap();
        for p in [1.0, 2.0, 3.5] {
            let expected = (10.0 * cell * cell).powf(1.0 / p);
            assert!((lp_norm(&f, p).unwrap() - expected).abs() < 1e-12);
        }
        assert_eq!(lp_norm(&f.scale(3.0), f64::INFINITY).unwrap(), 3.0);
        assert!(lp_norm(&f, 0.5).is_err());

        let r = random_field(g, 5);
        let (l1, l2, li) = (
            lp_norm(&r, 1.0).unwrap(),
            lp_norm(&r, 2.0).unwrap(),
            lp_norm(&r, f64::INFINITY).unwrap(),
        );
        assert!(l2 <= (l1 * li).sqrt() * (1.0 + 1e-12));
        assert!((l2 - r.l2_norm()).abs() < 1e-12);
    }

    #[test]
    fn mixed_norms() {
        let g = GridSpec::new(64, 8.0).unwrap();
        let f = random_field(g, 2);
        let single = lp_norm(&f, 3.0).unwrap();
        assert!((mixed_norm(&[(1.0, f.clone())], 3.0).unwrap() - single).abs() < 1e-12);
        let many: Vec<(f64, Field)> = (0..5).map(|i| (1.0 + i as f64 * 0.1, f.clone())).collect();
        let m = mixed_norm(&many, 3.0).unwrap();
        assert!((m - 5f64.powf(1.0 / 3.0) * single).abs() < 1e-12);
        let scaled: Vec<(f64, Field)> = (1..4).map(|i| (1.0, f.scale(i as f64))).collect();
        let inf = mixed_norm(&scaled, f64::INFINITY).unwrap();
        assert!((inf - 3.0 * lp_norm(&f, f64::INFINITY).unwrap()).abs() < 1e-12);
        assert!(mixed_norm(&[], 2.0).is_err());
    }

    #[test]
    fn maximal_function_properties() {
        let g = grid();
        let f = gaussian(g, 0.2);
        let one = TimeSet::singleton(1.0).unwrap();
        let m1 = maximal_function(&f, &one, None).unwrap();
        let a1 = circular_average(&f, 1.0).unwrap();
        for (x, y) in m1.values().iter().zip(a1.values()) {
            assert!((x.re - y.norm()).abs() < 1e-12);
        }
        let small = TimeSet::new(vec![1.0, 1.5]).unwrap();
        let big = TimeSet::new(vec![1.0, 1.25, 1.5, 2.0]).unwrap();
        let ms = maximal_function(&f, &small, None).unwrap();
        let mb = maximal_function(&f, &big, None).unwrap();
        assert!(ms.values().iter().zip(mb.values()).all(|(a, b)| a.re <= b.re + 1e-15));
        assert!(mb.values().iter().all(|v| v.re >= 0.0));
        for &t in big.points() {
            let a = circular_average(&f, t).unwrap();
            assert!((a.mean() - f.mean()).norm() < 1e-12);
        }
        let mj = maximal_function(&f, &big, Some(3)).unwrap();
        assert_eq!(mj.space(), Space::Physical);
        assert!(maximal_function(&f, &TimeSet::empty(), None).is_err());
    }
}
