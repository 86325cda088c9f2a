//! Arbitrary-precision ball arithmetic.
//!
//! Real numbers are enclosed by [`RealBall`] (dyadic midpoint, short
//! upward-rounded radius) and complex numbers by [`ComplexBall`]
//! rectangles. All operations are inclusion-monotone.

mod complex;
mod config;
mod dyadic;
mod elementary;
mod interval;
mod mag;
mod real;

pub use complex::{complex_log, ComplexBall};
pub use config::{max_precision, set_max_precision, DEFAULT_MAX_PREC, MAX_PREC_ENV};
pub use dyadic::{parse_decimal, Dyadic, Round};
pub use elementary::{const_pi, const_pi_alt, eval_elementary, ln_int, Elementary};
pub use interval::RationalInterval;
pub use mag::Mag;
pub use real::RealBall;

use crate::error::{Error, Result};

/// Fails with `PrecisionExhausted` once `prec` exceeds the configured maximum.
pub fn check_precision(prec: u32, what: &str) -> Result<()> {
    if prec > max_precision() {
        Err(Error::PrecisionExhausted(format!(
            "{what}: needs more than {} bits",
            max_precision()
        )))
    } else {
        Ok(())
    }
}
