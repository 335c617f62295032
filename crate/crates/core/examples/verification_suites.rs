//! The certification suites: marginal divergence, coefficient decay of the
//! time-shift multipliers, Whitney pairs and operator oracles.

use fractal_smoothing::experiments::{
    verify_locally_constant, verify_marginal, verify_operators, verify_whitney,
};
use fractal_smoothing::grid::GridSpec;

fn main() -> fractal_smoothing::Result<()> {
    let mut lines = Vec::new();
    lines.extend(verify_marginal(1.0, (2, 14))?.lines());
    lines.extend(verify_locally_constant((3, 6), 8)?.lines());
    lines.extend(verify_whitney(6, 1)?.lines());
    lines.extend(verify_operators(GridSpec::new(256, 8.0)?, 4, 1)?.lines());
    for line in lines {
        println!("{line}");
    }
    Ok(())
}
