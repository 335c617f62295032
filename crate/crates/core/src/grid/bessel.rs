//! The Bessel function `J_0` on `[0, infinity)`.

use std::f64::consts::PI;

const SPLIT: f64 = 12.0;

/// `J_0(x)`: power series up to `x = 12`, Hankel asymptotic expansion beyond.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SPLIT {
        series(x)
    } else {
        asymptotic(x)
    }
}

fn series(x: f64) -> f64 {
    let z = -(x * x) / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= z / (k * k);
        sum += term;
        if term.abs() < 1e-17 || k > 200.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

// J_0(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4, with the
// standard asymptotic series for P and Q. Terms are added until they stop
// shrinking or drop below 1e-17.
fn asymptotic(x: f64) -> f64 {
    let mut p = 0.0;
    let mut q = 0.0;
    let eight_x = 8.0 * x;
    let mut term = 1.0f64;
    let mut prev = f64::INFINITY;
    let mut k = 0u32;
    loop {
        // term = a_k / x^k with a_k = prod_{m=1}^{k} (2m-1)^2 / (k! 8^k)
        let abs = term.abs();
        if abs > prev || k > 120 {
            break;
        }
        match k % 4 {
            // a_k(0) carries the sign (-1)^k
            0 => p += term,
            1 => q -= term,
            2 => p -= term,
            _ => q += term,
        }
        if abs < 1e-17 {
            break;
        }
        prev = abs;
        k += 1;
        let odd = (2 * k - 1) as f64;
        term *= odd * odd / (k as f64 * eight_x);
    }
    let chi = x - PI / 4.0;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Reference value from `(1/pi) int_0^pi cos(x sin theta) d theta` by the
/// trapezoid rule, which is spectrally accurate for this periodic integrand.
pub fn bessel_j0_integral(x: f64) -> f64 {
    let m = (2.0 * x.abs()) as usize + 96;
    let h = PI / m as f64;
    let mut s = 0.5 * (1.0 + (x * PI.sin()).cos());
    for i in 1..m {
        s += (x * (i as f64 * h).sin()).cos();
    }
    s * h / PI
}

/// `max r^{3/2} |J_0(r) - sqrt(2 / (pi r)) cos(r - pi/4)|` over `samples`
/// equispaced points of `[lo, hi]`.
pub fn asymptotic_residual_constant(lo: f64, hi: f64, samples: usize) -> f64 {
    (0..samples)
        .map(|i| {
            let r = lo + (hi - lo) * i as f64 / (samples - 1).max(1) as f64;
            let lead = (2.0 / (PI * r)).sqrt() * (r - PI / 4.0).cos();
            r.powf(1.5) * (bessel_j0(r) - lead).abs()
        })
        .fold(0.0, f64::max)
}
