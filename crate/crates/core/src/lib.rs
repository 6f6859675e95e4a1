//! Growth analysis of entire solutions of linear difference equations
//! `P_m(z) Δ^m f(z) + … + P_1(z) Δ f(z) + P_0(z) f(z) = 0` with polynomial
//! coefficients.
//!
//! The crate computes, in exact rational arithmetic, the admissible sub-unit
//! orders and types of transcendental entire solutions (the Newton-polygon
//! menu), generates the binomial-series coefficient sequences from the exact
//! recurrence satisfied by them, estimates order/type numerically from the
//! coefficients and from maximum-modulus sampling, and constructs difference
//! equations with any prescribed rational order `λ ∈ (0,1)` and type
//! `σ ∈ (0,∞)`.
//!
//! Modules:
//! - [`exact`]: exact rational/complex-rational scalars and polynomial
//!   calculus in the monomial and falling-factorial bases, including `Δ`.
//! - [`bigfloat`]: arbitrary-exponent binary floats used to carry series
//!   coefficients that decay far below machine range.
//! - [`sequence`]: coefficient sequences of binomial series.
//! - [`newton`]: the index sequence `s_1 > … > s_p`, exact order/type pairs
//!   `(ρ_j, L_j)`, and the convex-hull cross-check.
//! - [`recurrence`]: the exact coefficient recurrence, characteristic roots
//!   per polygon segment, and solution-basis generation.
//! - [`growth`]: order (`χ`) and type estimation from coefficient sequences.
//! - [`series`]: numeric evaluation of binomial series, maximum modulus on
//!   circles, and empirical growth fits.
//! - [`construct`]: building an equation with prescribed order and type.

pub mod bigfloat;
pub mod construct;
pub mod exact;
pub mod growth;
pub mod newton;
pub mod recurrence;
pub mod sequence;
pub mod series;

pub use exact::{ComplexRational, Rational};
