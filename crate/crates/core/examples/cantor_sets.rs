//! Cantor-type dilation sets: size, separation, covering numbers and the
//! Assouad characteristic across scales.
//!
//! `cargo run --example cantor_sets -- 0.5 10`

use fractal_smoothing::fractal_sets::{
    assouad_characteristic, assouad_characteristic_sup, build_cantor, covering_number,
    decompose_cantor_levels, minkowski_estimate, CantorSpec, DEFAULT_CANTOR_L,
};

fn main() -> fractal_smoothing::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map_or(0.5, |a| a.parse().expect("alpha"));
    let j: u32 = args.next().map_or(10, |a| a.parse().expect("j"));

    let spec = CantorSpec::from_scale(alpha, j, DEFAULT_CANTOR_L)?;
    let set = build_cantor(alpha, j, DEFAULT_CANTOR_L)?;
    println!("alpha = {alpha}, j = {j}: {} stages, #E = {}, min gap {:.3e}", spec.k, set.len(), set.min_gap());

    println!("delta,N(E,delta),A_alpha");
    let deltas: Vec<f64> = (1..=j as i32).map(|m| 2f64.powi(-m)).collect();
    for &d in &deltas {
        println!("{d},{},{:.4}", covering_number(&set, 1.0, 2.0, d)?, assouad_characteristic(&set, d, alpha)?);
    }
    let finest = 2f64.powi(-(j as i32));
    println!("sup over scales: {:.4}", assouad_characteristic_sup(&set, finest, alpha)?);
    println!("box-counting slope: {:.3}", minkowski_estimate(&set, &deltas)?);

    for (level, part) in decompose_cantor_levels(&spec)?.iter().enumerate() {
        if !part.is_empty() {
            println!("level {level}: {} points starting at {:.6}", part.len(), part.points()[0]);
        }
    }
    Ok(())
}
