//! Arithmetic substrate: precision-tagged reals, exact log-linear values,
//! rational functions in X = N^(-s), special functions and quadrature.

pub mod loglinear;
pub mod quad;
pub mod ratfunc;
pub mod real;
pub mod special;

pub use loglinear::LogLinearValue;
pub use quad::{integrate_semiinfinite, Decay, Integrand};
pub use ratfunc::{rf_log_derivative, Poly, RationalFunctionX};
pub use real::{BigComplex, BigReal};
pub use rug::Rational;
pub use special::log_gamma;

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 64;
