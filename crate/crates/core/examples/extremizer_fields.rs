//! The three extremizer families: norms across scales and the features
//! each one is built to show.

use fractal_smoothing::extremizers::{
    annulus, knapp, knapp_box_minimum, knapp_phase_bound, knapp_phase_error, peak_amplitude,
    radial_focusing, shell_minimum, ExtremizerSpec, Family, DEFAULT_C0, DEFAULT_C1,
};
use fractal_smoothing::grid::{half_wave, lp_norm, GridSpec};

fn main() -> fractal_smoothing::Result<()> {
    let grid = GridSpec::new(1024, 8.0)?;
    println!("j,p,radial,knapp,annulus (log2 of L^p norms)");
    for j in 4..=6 {
        let fields = [radial_focusing(grid, j)?, knapp(grid, j, DEFAULT_C1)?, annulus(grid, j)?];
        for p in [1.0, 2.0, 4.0] {
            let norms: Vec<String> = fields
                .iter()
                .map(|f| lp_norm(f, p).map(|v| format!("{:.4}", v.log2())))
                .collect::<fractal_smoothing::Result<_>>()?;
            println!("{j},{p},{}", norms.join(","));
        }
    }

    let j = 6;
    let radial = radial_focusing(grid, j)?;
    let before = radial.to_physical()?.max_abs();
    let after = half_wave(&radial, 1.0, 1)?.to_physical()?.max_abs();
    println!("radial focusing at j = {j}: sup|f| = {before:.4e}, sup|u(1)| = {after:.4e}");

    let k = knapp(grid, j, DEFAULT_C1)?;
    println!(
        "knapp: peak {:.4e}, slab minimum at t = 1.5 {:.4e}, phase error {:.4} <= {:.4}",
        peak_amplitude(&k),
        knapp_box_minimum(&k, j, 0.25, 1.5)?,
        knapp_phase_error(&grid, j, DEFAULT_C1),
        knapp_phase_bound(DEFAULT_C1)
    );

    let a = annulus(grid, j)?;
    println!("annulus: shell minimum at t = 1 {:.4e}", shell_minimum(&a, j, DEFAULT_C0, 1.0)?);

    let spec: ExtremizerSpec = serde_json::from_str(r#"{ "family": "knapp", "j": 5, "constants": { "c1": 0.0625, "c0": 0.25, "L": 16 } }"#)
        .expect("spec");
    assert_eq!(spec.family, Family::Knapp);
    println!("built from spec: ||f||_2 = {:.4e}", spec.build(grid)?.l2_norm());
    Ok(())
}
