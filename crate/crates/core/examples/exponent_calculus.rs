//! Exact exponent calculus: the threshold table, the three affine
//! exponents at a point, region classification and figure data.
//!
//! `cargo run --example exponent_calculus -- 5/6`

use fractal_smoothing::exponents::{
    fraction, int, parse_rational, q_points, rat, region_membership, region_plot_data, regime,
    s_exponents, thresholds, Figure, PQPoint, RegionSpec,
};

fn main() -> fractal_smoothing::Result<()> {
    let alpha = parse_rational(&std::env::args().nth(1).unwrap_or_else(|| "5/6".into()))?;
    let t = thresholds(2, alpha, Some(int(4)))?;
    println!("alpha = {}", fraction(alpha));
    println!("q_circ = {}, q_star = {}, p_star = {}", fraction(t.q_circ), fraction(t.q_star), fraction(t.p_star));
    println!("q_alpha = {}, q_star(r = 4) = {}", fraction(t.q_alpha), fraction(t.q_star_r.expect("r given")));
    println!(
        "necessary q: angular {}, squashed {}",
        fraction(t.q_necessary_angular),
        fraction(t.q_necessary_squashed)
    );

    let point = PQPoint::new(int(1) / t.p_star, int(1) / t.q_star)?;
    let s = s_exponents(point, 2, alpha)?;
    println!(
        "at {point}: s1 = {}, s2 = {}, s3 = {}, s_c = {} [{}]",
        fraction(s.s1),
        fraction(s.s2),
        fraction(s.s3),
        fraction(s.sc),
        regime(point, 2, alpha)?
    );

    let spec = RegionSpec::new(2, Some(rat(1, 2) * alpha), alpha)?;
    let qs = q_points(&spec)?;
    for (name, v) in ["Q1", "Q2", "Q3", "Q4"].iter().zip(qs.as_array()) {
        let m = region_membership(v, &spec)?;
        println!("{name} = {v}: {} (in R: {})", m.class, m.in_r);
    }
    let mid = qs.q1.midpoint(qs.q2);
    println!("midpoint Q1 Q2 = {mid}: {}", region_membership(mid, &spec)?.class);

    print!("{}", region_plot_data(&spec, Figure::Fig2, None)?.to_csv());
    Ok(())
}
