//! Fractal dilation sets, exact exponent calculus for local smoothing of the
//! half-wave propagator, and a periodic-grid laboratory for testing the sharp
//! regularity exponents against explicit extremizers.

pub mod bilinear;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod exponents;
pub mod extremizers;
pub mod fractal_sets;
pub mod grid;
pub mod stats;

pub use error::{Error, Result};
