//! Cap-pair products: magnitude scaling in delta, the time family of
//! intervals and the implied necessary exponents.

use fractal_smoothing::bilinear::{bilinear_cap_pair, CapKind, CapPair, TimeFamily};
use fractal_smoothing::exponents::{fraction, int};
use fractal_smoothing::experiments::verify_bilinear;
use fractal_smoothing::grid::GridSpec;

fn main() -> fractal_smoothing::Result<()> {
    for kind in [CapKind::Angular, CapKind::Squashed] {
        for delta in [0.125, 0.0625] {
            let pair = CapPair::new(delta, kind)?;
            let family = TimeFamily::new(delta, 1.0)?;
            let times = family.sample_times(0.5);
            println!(
                "{kind} delta = {delta}: area {:.3e}, {} intervals, min |Rf Rg| {:.4e}",
                pair.area,
                family.within(0.5).len(),
                pair.min_product(&times)
            );
        }
    }
    let report = verify_bilinear(&[0.125, 0.0625, 0.03125], int(1))?;
    for line in report.lines() {
        println!("{line}");
    }
    for fit in &report.fits {
        println!("{}: implied q {:.3}, exact {}", fit.kind, fit.q_implied, fraction(fit.q_exact));
    }

    let (f, g) = bilinear_cap_pair(GridSpec::new(256, 64.0)?, 0.25, CapKind::Angular)?;
    println!("lattice pair norms {:.6} {:.6}", f.l2_norm(), g.l2_norm());
    Ok(())
}
