//! Verification library for the averaged Colmez identity of imaginary
//! quadratic fields, the explicit local Whittaker and intersection
//! multiplicity formulas behind it, pseudo-theta approximations and the
//! archimedean Green kernel.

pub mod error;
pub mod numerics;

pub use error::{Error, Result};
pub mod quadfield;
pub mod lfun;
pub mod cmheight;
pub mod localkernel;
pub mod archkernel;
pub mod pseudotheta;
