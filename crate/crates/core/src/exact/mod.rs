//! Exact scalar and polynomial arithmetic.
//!
//! All coefficient-level algebra in this crate is carried out over the
//! complex rationals so that Newton-polygon data and type constants come out
//! exact; floating point enters only downstream in growth estimation and
//! series evaluation.

mod poly;
mod scalar;
mod stirling;

pub use poly::{falling_factorial_poly, FallingPoly, Poly};
pub use scalar::{
    crat, cration, ln_bigint, ln_rational, log2_bigint, nth_root_exact, rat, rational_pow,
    ComplexRational, Rational,
};
pub use stirling::{stirling1_signed, stirling2};
