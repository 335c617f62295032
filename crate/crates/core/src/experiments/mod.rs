//! Scaling studies and verification suites built on the other modules.

pub mod config;
pub mod persist;
pub mod scaling;
pub mod verify;

pub use config::{RunConfig, SetRule, DEFAULT_TOLERANCE, RESIDUAL_LIMIT};
pub use persist::{load_dir, load_run, save_run};
pub use scaling::{fit_exponent, run_scaling, ScalingRun, Verdict};
pub use verify::{
    verify_bilinear, verify_locally_constant, verify_marginal, verify_operators, verify_whitney,
};
