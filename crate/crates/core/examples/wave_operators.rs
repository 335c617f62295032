//! Spectral operators on the periodic grid: Littlewood-Paley pieces, the
//! half-wave propagator, circular averages and the Bessel multiplier.

use num_complex::Complex64;

use fractal_smoothing::grid::{
    bessel_j0, circular_average, circular_average_quadrature, half_wave, littlewood_paley, lp_norm,
    Field, GridSpec,
};

fn main() -> fractal_smoothing::Result<()> {
    let grid = GridSpec::new(512, 8.0)?;
    let f = Field::from_physical_fn(grid, |x, y| Complex64::new((-(x * x + 2.0 * y * y) * 4.0).exp(), 0.0));
    println!("max admissible band 2^j (factor 4): j <= {}", grid.max_band(4.0));

    let mut total = Field::zeros(grid, f.space());
    for j in 0..=grid.max_band(2.0) {
        let piece = littlewood_paley(&f, j)?;
        println!("j = {j}: ||P_j f||_2 = {:.6e}", piece.l2_norm());
        total = total.add(&piece)?;
    }

    let piece = littlewood_paley(&f, 4)?;
    for t in [0.5, 1.0, 2.0] {
        let u = half_wave(&piece, t, 1)?;
        println!(
            "t = {t}: ||u||_2 / ||P_4 f||_2 = {:.15}, ||u||_4 = {:.6e}",
            u.l2_norm() / piece.l2_norm(),
            lp_norm(&u, 4.0)?
        );
    }

    let a = circular_average(&piece, 1.5)?;
    let b = circular_average_quadrature(&piece, 1.5, 256)?;
    println!("circular average: multiplier vs quadrature relative error {:.2e}", a.relative_l2_error(&b)?);
    for r in [0.0, 2.404825557695773, 10.0, 100.0] {
        println!("J0({r}) = {:.15}", bessel_j0(r));
    }
    Ok(())
}
