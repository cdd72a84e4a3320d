//! Zeroes of high-degree polynomials under repeated differentiation.
//!
//! The crate simulates root clouds of `P^{(k)}` for random `P` of degree in the
//! thousands and computes the limiting radial (complex case) or real-line
//! (real-rooted case) zero distributions they should follow.

pub mod cli;
pub mod closedforms;
pub mod ensembles;
pub mod error;
pub mod numeric;
pub mod polynomial;
pub mod profileflow;
pub mod realline;
pub mod rootfinder;
pub mod verify;

pub use error::Error;
pub use num_complex::Complex64;
