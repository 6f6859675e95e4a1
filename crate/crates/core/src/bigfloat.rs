//! Binary floating point with a fixed-width mantissa and an unbounded
//! exponent.
//!
//! Series coefficients here decay like `n^{−n/ρ}`, thousands of binary
//! orders below `f64` range, while only a few hundred mantissa bits are ever
//! needed. Values never underflow to zero: the exponent is an
//! arbitrary-precision integer. Logarithms are read off the (exponent,
//! mantissa) pair directly rather than by converting to machine floats.
//!
//! Operations take an explicit precision in bits and round the result's
//! mantissa to at most that many bits. Stored mantissas have their trailing
//! zero bits stripped, so equal dyadic values compare equal regardless of the
//! precision they were produced at.

use num_bigint::BigInt;
use num_traits::{Float, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use crate::exact::{log2_bigint, ComplexRational, Rational};

/// Sign-magnitude dyadic float: `mantissa * 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    mantissa: BigInt,
    exp: BigInt,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exp: BigInt::zero(),
        }
    }

    pub fn one() -> Self {
        BigFloat {
            mantissa: BigInt::from(1),
            exp: BigInt::zero(),
        }
    }

    fn normalized(mut mantissa: BigInt, mut exp: BigInt, prec: u32) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let bits = mantissa.bits();
        if bits > prec as u64 {
            let shift = bits - prec as u64;
            let sign = mantissa.sign();
            let mag = mantissa.magnitude().clone();
            let mut q = &mag >> shift;
            if mag.bit(shift - 1) {
                q += 1u32;
            }
            if q.bits() > prec as u64 {
                q >>= 1;
                exp += 1;
            }
            exp += BigInt::from(shift);
            mantissa = BigInt::from_biguint(sign, q);
        }
        if let Some(tz) = mantissa.trailing_zeros() {
            if tz > 0 {
                mantissa >>= tz;
                exp += BigInt::from(tz);
            }
        }
        BigFloat { mantissa, exp }
    }

    pub fn from_bigint(x: &BigInt, prec: u32) -> Self {
        Self::normalized(x.clone(), BigInt::zero(), prec)
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(x), prec)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let num = r.numer();
        let den = r.denom();
        let scale = (prec as u64 + 2 + den.bits()).saturating_sub(num.bits());
        let q = (num << scale) / den;
        Self::normalized(q, -BigInt::from(scale), prec)
    }

    /// Exact decomposition of a finite `f64`.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "BigFloat::from_f64 requires a finite value");
        if x == 0.0 {
            return Self::zero();
        }
        let (mant, exp, sign) = Float::integer_decode(x);
        let m = BigInt::from(mant) * BigInt::from(sign as i64);
        Self::normalized(m, BigInt::from(exp as i64), prec)
    }

    /// `2^x` for a finite `f64` exponent; used to materialize synthetic
    /// coefficient families given in closed log form.
    pub fn from_log2(x: f64, prec: u32) -> Self {
        assert!(x.is_finite());
        let ix = x.floor();
        assert!(ix.abs() < 9.0e15, "log2 magnitude out of supported range");
        let frac = x - ix;
        let base = Self::from_f64(frac.exp2(), prec);
        base.mul_pow2(&BigInt::from(ix as i64))
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -self.mantissa.clone(),
            exp: self.exp.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exp: self.exp.clone(),
        }
    }

    pub fn mul_pow2(&self, k: &BigInt) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            mantissa: self.mantissa.clone(),
            exp: &self.exp + k,
        }
    }

    /// Position of the leading bit: `exp + bits(mantissa)`.
    fn top(&self) -> BigInt {
        &self.exp + BigInt::from(self.mantissa.bits())
    }

    pub fn add(&self, rhs: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return Self::normalized(rhs.mantissa.clone(), rhs.exp.clone(), prec);
        }
        if rhs.is_zero() {
            return Self::normalized(self.mantissa.clone(), self.exp.clone(), prec);
        }
        let ta = self.top();
        let tb = rhs.top();
        let guard = BigInt::from(prec + 2);
        if &ta - &tb > guard {
            return Self::normalized(self.mantissa.clone(), self.exp.clone(), prec);
        }
        if &tb - &ta > guard {
            return Self::normalized(rhs.mantissa.clone(), rhs.exp.clone(), prec);
        }
        let e_min = self.exp.clone().min(rhs.exp.clone());
        let sa = (&self.exp - &e_min).to_u64().expect("bounded add shift");
        let sb = (&rhs.exp - &e_min).to_u64().expect("bounded add shift");
        let m = (&self.mantissa << sa) + (&rhs.mantissa << sb);
        Self::normalized(m, e_min, prec)
    }

    pub fn sub(&self, rhs: &Self, prec: u32) -> Self {
        self.add(&rhs.neg(), prec)
    }

    pub fn mul(&self, rhs: &Self, prec: u32) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::normalized(
            &self.mantissa * &rhs.mantissa,
            &self.exp + &rhs.exp,
            prec,
        )
    }

    pub fn div(&self, rhs: &Self, prec: u32) -> Self {
        assert!(!rhs.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let scale = (prec as u64 + 2 + rhs.mantissa.bits()).saturating_sub(self.mantissa.bits());
        let q = (&self.mantissa << scale) / &rhs.mantissa;
        Self::normalized(q, &self.exp - &rhs.exp - BigInt::from(scale), prec)
    }

    /// Compare absolute values exactly.
    pub fn cmp_abs(&self, rhs: &Self) -> Ordering {
        match (self.is_zero(), rhs.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let ta = self.top();
        let tb = rhs.top();
        match ta.cmp(&tb) {
            Ordering::Equal => {}
            other => return other,
        }
        // Same leading-bit position: align and compare magnitudes.
        let e_min = self.exp.clone().min(rhs.exp.clone());
        let sa = (&self.exp - &e_min).to_u64().expect("bounded cmp shift");
        let sb = (&rhs.exp - &e_min).to_u64().expect("bounded cmp shift");
        (self.mantissa.magnitude() << sa).cmp(&(rhs.mantissa.magnitude() << sb))
    }

    /// Base-2 log of the absolute value, read from exponent and mantissa.
    /// `None` for zero.
    pub fn log2_abs(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        let e = self.exp.to_f64().unwrap_or(if self.exp.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
        Some(e + log2_bigint(&self.mantissa.abs()))
    }

    /// Natural log of the absolute value; `None` for zero.
    pub fn ln_abs(&self) -> Option<f64> {
        self.log2_abs().map(|l| l * std::f64::consts::LN_2)
    }

    /// Exact rational value of the dyadic float. `None` when the exponent is
    /// too large in magnitude to materialize.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        let e = self.exp.to_i64()?;
        if e.unsigned_abs() > 1 << 22 {
            return None;
        }
        if e >= 0 {
            Some(Rational::from_integer(&self.mantissa << e as u64))
        } else {
            Some(Rational::new(
                self.mantissa.clone(),
                BigInt::from(1) << (-e) as u64,
            ))
        }
    }

    /// Lossy conversion; saturates far outside `f64` range.
    pub fn to_f64(&self) -> f64 {
        match self.log2_abs() {
            None => 0.0,
            Some(l) => {
                let mag = l.exp2();
                if self.is_negative() {
                    -mag
                } else {
                    mag
                }
            }
        }
    }
}

/// Complex number over [`BigFloat`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn zero() -> Self {
        BigComplex {
            re: BigFloat::zero(),
            im: BigFloat::zero(),
        }
    }

    pub fn one() -> Self {
        BigComplex {
            re: BigFloat::one(),
            im: BigFloat::zero(),
        }
    }

    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn from_rational(c: &ComplexRational, prec: u32) -> Self {
        BigComplex {
            re: BigFloat::from_rational(&c.re, prec),
            im: BigFloat::from_rational(&c.im, prec),
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        BigComplex {
            re: BigFloat::from_f64(re, prec),
            im: BigFloat::from_f64(im, prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn neg(&self) -> Self {
        BigComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, rhs: &Self, prec: u32) -> Self {
        BigComplex {
            re: self.re.add(&rhs.re, prec),
            im: self.im.add(&rhs.im, prec),
        }
    }

    pub fn sub(&self, rhs: &Self, prec: u32) -> Self {
        BigComplex {
            re: self.re.sub(&rhs.re, prec),
            im: self.im.sub(&rhs.im, prec),
        }
    }

    pub fn mul(&self, rhs: &Self, prec: u32) -> Self {
        let g = prec + 4;
        let re = self
            .re
            .mul(&rhs.re, g)
            .sub(&self.im.mul(&rhs.im, g), prec);
        let im = self
            .re
            .mul(&rhs.im, g)
            .add(&self.im.mul(&rhs.re, g), prec);
        BigComplex { re, im }
    }

    pub fn scale(&self, s: &BigFloat, prec: u32) -> Self {
        BigComplex {
            re: self.re.mul(s, prec),
            im: self.im.mul(s, prec),
        }
    }

    pub fn div(&self, rhs: &Self, prec: u32) -> Self {
        let g = prec + 8;
        let den = rhs.modulus_sq(g);
        assert!(!den.is_zero(), "BigComplex division by zero");
        let num = self.mul(&rhs.conj(), g);
        BigComplex {
            re: num.re.div(&den, prec),
            im: num.im.div(&den, prec),
        }
    }

    /// `re^2 + im^2`, always a real [`BigFloat`].
    pub fn modulus_sq(&self, prec: u32) -> BigFloat {
        let g = prec + 4;
        self.re.mul(&self.re, g).add(&self.im.mul(&self.im, g), prec)
    }

    /// Exact rational value when the exponents are materializable.
    pub fn to_rational(&self) -> Option<ComplexRational> {
        Some(ComplexRational::new(
            self.re.to_rational()?,
            self.im.to_rational()?,
        ))
    }

    /// Base-2 log of the modulus; `None` for zero.
    pub fn log2_abs(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        Some(0.5 * self.modulus_sq(80).log2_abs().expect("nonzero modulus"))
    }

    /// Natural log of the modulus; `None` for zero.
    pub fn ln_abs(&self) -> Option<f64> {
        self.log2_abs().map(|l| l * std::f64::consts::LN_2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn rational_round_trip_log2() {
        let x = BigFloat::from_rational(&rat(1, 3), 128);
        let l = x.log2_abs().unwrap();
        assert!((l - (1.0f64 / 3.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn tiny_values_never_flush_to_zero() {
        // 2^(-100000) stays representable and logarithm-accessible.
        let x = BigFloat::from_log2(-100000.0, 64);
        assert!(!x.is_zero());
        assert!((x.log2_abs().unwrap() + 100000.0).abs() < 1e-6);
        let y = x.mul(&x, 64);
        assert!((y.log2_abs().unwrap() + 200000.0).abs() < 1e-6);
    }

    #[test]
    fn add_ignores_negligible_operand() {
        let big = BigFloat::from_i64(1, 64);
        let small = BigFloat::from_log2(-1000.0, 64);
        assert_eq!(big.add(&small, 64), big);
    }

    #[test]
    fn arithmetic_identities() {
        let prec = 96;
        let a = BigFloat::from_rational(&rat(7, 5), prec);
        let b = BigFloat::from_rational(&rat(-3, 11), prec);
        let prod = a.mul(&b, prec);
        let back = prod.div(&b, prec);
        let diff = back.sub(&a, prec).abs();
        // relative error within 2^-90
        assert!(diff.is_zero() || diff.log2_abs().unwrap() < a.log2_abs().unwrap() - 90.0);
    }

    #[test]
    fn cmp_abs_orders_values() {
        let prec = 64;
        let a = BigFloat::from_rational(&rat(1, 4), prec);
        let b = BigFloat::from_rational(&rat(-1, 3), prec);
        assert_eq!(a.cmp_abs(&b), Ordering::Less);
        assert_eq!(b.cmp_abs(&a), Ordering::Greater);
        assert_eq!(a.cmp_abs(&a.neg()), Ordering::Equal);
    }

    #[test]
    fn complex_division() {
        let prec = 128;
        let a = BigComplex::from_rational(&crate::exact::cration(rat(3, 1), rat(4, 1)), prec);
        let b = BigComplex::from_rational(&crate::exact::cration(rat(0, 1), rat(2, 1)), prec);
        let q = a.div(&b, prec);
        // (3+4i)/(2i) = 2 - 3i/2
        assert!((q.re.to_f64() - 2.0).abs() < 1e-12);
        assert!((q.im.to_f64() + 1.5).abs() < 1e-12);
    }
}
