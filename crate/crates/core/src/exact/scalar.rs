//! Rational and complex-rational scalars plus a few numeric helpers.

use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_traits::{Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number; always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Complex number with exact rational real and imaginary parts.
pub type ComplexRational = Complex<Rational>;

/// Shorthand rational constructor from machine integers.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Real complex-rational from machine integers.
pub fn crat(numer: i64, denom: i64) -> ComplexRational {
    ComplexRational::new(rat(numer, denom), rat(0, 1))
}

/// Complex-rational with explicit real and imaginary parts.
pub fn cration(re: Rational, im: Rational) -> ComplexRational {
    ComplexRational::new(re, im)
}

/// Base-2 logarithm of a positive big integer, computed from its bit length
/// and leading bits so that magnitudes far outside `f64` range stay finite.
pub fn log2_bigint(x: &BigInt) -> f64 {
    debug_assert!(x.sign() != Sign::Minus);
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("small BigInt fits f64").log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53-bit value fits f64");
    top.log2() + shift as f64
}

/// Natural logarithm of a positive big integer (see [`log2_bigint`]).
pub fn ln_bigint(x: &BigInt) -> f64 {
    log2_bigint(x) * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational.
pub fn ln_rational(x: &Rational) -> f64 {
    debug_assert!(x.is_positive());
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// Exact `n`-th root of a non-negative rational, if the root is rational.
///
/// Returns `Some(r)` with `r^n == x` exactly, or `None` when the numerator or
/// denominator is not a perfect `n`-th power.
pub fn nth_root_exact(x: &Rational, n: u32) -> Option<Rational> {
    assert!(n >= 1);
    if x.is_negative() {
        return None;
    }
    let num_root = exact_int_root(x.numer(), n)?;
    let den_root = exact_int_root(x.denom(), n)?;
    Some(Rational::new(num_root, den_root))
}

fn exact_int_root(x: &BigInt, n: u32) -> Option<BigInt> {
    if x.is_zero() {
        return Some(BigInt::zero());
    }
    let root = x.nth_root(n);
    if num_traits::pow::pow(root.clone(), n as usize) == *x {
        Some(root)
    } else {
        None
    }
}

/// Raise a rational to an integer power (negative exponents allowed for
/// nonzero bases).
pub fn rational_pow(x: &Rational, e: i64) -> Rational {
    use num_traits::One;
    if e == 0 {
        return Rational::one();
    }
    let p = num_traits::pow::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_of_huge_integer() {
        // 2^1000 exactly
        let x = BigInt::from(1) << 1000;
        assert!((log2_bigint(&x) - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn nth_root_detects_perfect_powers() {
        assert_eq!(nth_root_exact(&rat(6561, 65536), 8), Some(rat(3, 4)));
        assert_eq!(nth_root_exact(&rat(1, 16), 4), Some(rat(1, 2)));
        assert_eq!(nth_root_exact(&rat(1, 36), 6), None);
        assert_eq!(nth_root_exact(&rat(0, 1), 3), Some(rat(0, 1)));
    }

    #[test]
    fn rational_pow_negative_exponent() {
        assert_eq!(rational_pow(&rat(2, 3), -2), rat(9, 4));
    }
}
