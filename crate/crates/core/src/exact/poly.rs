//! Polynomials over the complex rationals in the monomial and
//! falling-factorial bases.
//!
//! The zero polynomial is the empty coefficient list and has no degree;
//! consumers must branch on `degree() == None` explicitly (the coefficient
//! degrees `d_j` of a difference equation are undefined for vanishing `P_j`).

use num_traits::{One, Zero};

use super::scalar::{ComplexRational, Rational};
use super::stirling::{stirling1_signed, stirling2};

/// Polynomial in the monomial basis, coefficients indexed by power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<ComplexRational>,
}

/// Polynomial in the falling-factorial basis `z^(0), z^(1), z^(2), …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FallingPoly {
    coeffs: Vec<ComplexRational>,
}

fn trim(coeffs: &mut Vec<ComplexRational>) {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<ComplexRational>) -> Self {
        trim(&mut coeffs);
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: ComplexRational) -> Self {
        Poly::new(vec![c])
    }

    /// `None` exactly for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[ComplexRational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> ComplexRational {
        self.coeffs.get(power).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn leading(&self) -> Option<&ComplexRational> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut out = vec![ComplexRational::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c.clone();
        }
        Poly::new(out)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, s: &ComplexRational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out =
            vec![ComplexRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    /// Multiply by the linear factor `z + c`.
    pub fn mul_linear(&self, c: &ComplexRational) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ComplexRational::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i + 1] = out[i + 1].clone() + a.clone();
            out[i] = out[i].clone() + a.clone() * c.clone();
        }
        Poly::new(out)
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, z: &ComplexRational) -> ComplexRational {
        let mut acc = ComplexRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    /// Evaluate at a machine integer.
    pub fn eval_int(&self, n: i64) -> ComplexRational {
        self.eval(&ComplexRational::new(
            Rational::from_integer(n.into()),
            Rational::zero(),
        ))
    }

    /// Argument translation: `shift(p, c)(z) = p(z + c)`. Degree and leading
    /// coefficient are preserved.
    pub fn shift(&self, c: &Rational) -> Poly {
        let shift = ComplexRational::new(c.clone(), Rational::zero());
        let mut out = Poly::zero();
        for coeff in self.coeffs.iter().rev() {
            out = out.mul_linear(&shift);
            out = out.add(&Poly::constant(coeff.clone()));
        }
        out
    }

    /// Forward difference `Δ^k p` where `Δp(z) = p(z+1) − p(z)`. The degree
    /// drops by exactly `k`; the result is zero when `k > deg p`.
    pub fn delta(&self, k: usize) -> Poly {
        let one = Rational::one();
        let mut out = self.clone();
        for _ in 0..k {
            if out.is_zero() {
                return out;
            }
            out = out.shift(&one).sub(&out);
        }
        out
    }

    /// Rewrite in the falling-factorial basis (Stirling numbers of the
    /// second kind). Degree and leading coefficient are preserved.
    pub fn to_falling(&self) -> FallingPoly {
        let n = self.coeffs.len();
        let mut out = vec![ComplexRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, slot) in out.iter_mut().enumerate().take(i + 1) {
                let s = stirling2(i, k);
                if s.is_zero() {
                    continue;
                }
                let s = ComplexRational::new(Rational::from_integer(s), Rational::zero());
                *slot = slot.clone() + a.clone() * s;
            }
        }
        FallingPoly::new(out)
    }
}

impl FallingPoly {
    pub fn new(mut coeffs: Vec<ComplexRational>) -> Self {
        trim(&mut coeffs);
        FallingPoly { coeffs }
    }

    pub fn zero() -> Self {
        FallingPoly { coeffs: Vec::new() }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[ComplexRational] {
        &self.coeffs
    }

    pub fn coeff(&self, order: usize) -> ComplexRational {
        self.coeffs.get(order).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn leading(&self) -> Option<&ComplexRational> {
        self.coeffs.last()
    }

    /// Rewrite in the monomial basis (signed Stirling numbers of the first
    /// kind). Inverse of [`Poly::to_falling`].
    pub fn to_monomial(&self) -> Poly {
        let n = self.coeffs.len();
        let mut out = vec![ComplexRational::zero(); n];
        for (k, h) in self.coeffs.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate().take(k + 1) {
                let s = stirling1_signed(k, i);
                if s.is_zero() {
                    continue;
                }
                let s = ComplexRational::new(Rational::from_integer(s), Rational::zero());
                *slot = slot.clone() + h.clone() * s;
            }
        }
        Poly::new(out)
    }
}

/// The falling factorial `(z + offset)^(order)` expanded in the monomial
/// basis: `Π_{t=0}^{order−1} (z + offset − t)`.
pub fn falling_factorial_poly(offset: &Rational, order: usize) -> Poly {
    let mut out = Poly::constant(ComplexRational::new(Rational::one(), Rational::zero()));
    for t in 0..order {
        let c = ComplexRational::new(
            offset - Rational::from_integer(t.into()),
            Rational::zero(),
        );
        out = out.mul_linear(&c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{crat, rat};

    fn poly(coeffs: &[(i64, i64)]) -> Poly {
        Poly::new(coeffs.iter().map(|&(n, d)| crat(n, d)).collect())
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(poly(&[(0, 1), (0, 1)]).degree(), None);
        assert_eq!(poly(&[(5, 1)]).degree(), Some(0));
    }

    #[test]
    fn monomial_to_falling_examples() {
        // z^2 = z^(2) + z^(1)
        let f = poly(&[(0, 1), (0, 1), (1, 1)]).to_falling();
        assert_eq!(f.coeffs(), &[crat(0, 1), crat(1, 1), crat(1, 1)]);
        // 4z + 6 stays 4z^(1) + 6
        let f = poly(&[(6, 1), (4, 1)]).to_falling();
        assert_eq!(f.coeffs(), &[crat(6, 1), crat(4, 1)]);
    }

    #[test]
    fn monomial_to_falling_degree_three_brute_force() {
        // Oracle: expand z(z−1)(z−2), z(z−1), z by direct multiplication and
        // solve for the falling coefficients of z^3 by elimination.
        let z3 = poly(&[(0, 1), (0, 1), (0, 1), (1, 1)]);
        let f2 = falling_factorial_poly(&rat(0, 1), 2);
        let f3 = falling_factorial_poly(&rat(0, 1), 3);
        // z^3 = z^(3) + a z^(2) + b z^(1): match coefficients brute force.
        // z^3 − f3 = 3z^2 − 2z; subtract 3·f2 = 3z^2 − 3z leaves z.
        let rem = z3.sub(&f3);
        let rem2 = rem.sub(&f2.scale(&crat(3, 1)));
        assert_eq!(rem2, poly(&[(0, 1), (1, 1)]));
        // Hence z^3 = z^(3) + 3 z^(2) + 1 z^(1); compare with the conversion.
        let conv = z3.to_falling();
        assert_eq!(
            conv.coeffs(),
            &[crat(0, 1), crat(1, 1), crat(3, 1), crat(1, 1)]
        );
    }

    #[test]
    fn falling_to_monomial_examples() {
        // z^(2) = z^2 − z
        let p = FallingPoly::new(vec![crat(0, 1), crat(0, 1), crat(1, 1)]).to_monomial();
        assert_eq!(p, poly(&[(0, 1), (-1, 1), (1, 1)]));
        // constants map to themselves
        let c = FallingPoly::new(vec![crat(7, 2)]).to_monomial();
        assert_eq!(c, poly(&[(7, 2)]));
        // z^(3) = z^3 − 3z^2 + 2z, brute-force oracle via direct expansion
        let f3 = FallingPoly::new(vec![crat(0, 1), crat(0, 1), crat(0, 1), crat(1, 1)]);
        assert_eq!(f3.to_monomial(), falling_factorial_poly(&rat(0, 1), 3));
        assert_eq!(
            f3.to_monomial(),
            poly(&[(0, 1), (2, 1), (-3, 1), (1, 1)])
        );
    }

    #[test]
    fn delta_examples() {
        assert_eq!(poly(&[(6, 1), (4, 1)]).delta(1), poly(&[(4, 1)]));
        // Δ z^(n) = n z^(n−1) for n = 2, 3
        for n in [2usize, 3] {
            let zn = falling_factorial_poly(&rat(0, 1), n);
            let expect = falling_factorial_poly(&rat(0, 1), n - 1).scale(&crat(n as i64, 1));
            assert_eq!(zn.delta(1), expect);
        }
        // k beyond the degree kills the polynomial
        assert_eq!(poly(&[(0, 1), (0, 1), (1, 1)]).delta(3), Poly::zero());
    }

    #[test]
    fn shift_examples() {
        // (z+1)^2 = z^2 + 2z + 1
        assert_eq!(
            poly(&[(0, 1), (0, 1), (1, 1)]).shift(&rat(1, 1)),
            poly(&[(1, 1), (2, 1), (1, 1)])
        );
        let p = poly(&[(15, 1), (19, 1), (6, 1)]);
        assert_eq!(p.shift(&rat(0, 1)), p);
        assert_eq!(p.shift(&rat(3, 1)).shift(&rat(-3, 1)), p);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly(&[(6, 1), (4, 1)]).eval(&crat(1, 1)), crat(10, 1));
        // z^(2) vanishes at z = 1
        let z2 = falling_factorial_poly(&rat(0, 1), 2);
        assert_eq!(z2.eval(&crat(1, 1)), crat(0, 1));
        // rational root of 6z^2 + 19z + 15 found by rational root search
        let p = poly(&[(15, 1), (19, 1), (6, 1)]);
        assert_eq!(p.eval(&crat(-3, 2)), crat(0, 1));
    }
}
