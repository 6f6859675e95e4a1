//! Construct a difference equation with an entire solution of prescribed
//! rational order `λ = q/p ∈ (0,1)` and type `σ ∈ (0,∞)`.
//!
//! The shifted form
//! `A_p z^(p) Δ^p f(z−p) + … + A_1 z Δ f(z−1) − A_0 z^(q) f(z−q) = 0`
//! forces the coefficient relation `f(n) a_n = a_{n−q}` with
//! `f(n) = (Σ_j A_j n^(j))/A_0`; choosing the `A_j` so that
//! `f(n) = ((n/λ)^(p))/σ^p` makes `a_{qt} = σ^{pt}/(pt)!` a solution, a
//! binomial series of order `λ` and type `σ`. Substituting `z → z + p` and
//! expanding every shifted difference through the operator identity
//! `Δ^m f(z+k) = Σ_j C(m,j)(−1)^j Σ_i C(k+m−j, i) Δ^i f(z)` then yields an
//! equation in unshifted form. The substitution uses `z + p` rather than
//! `z + q` so every expansion index `k = p − j` and `k = p − q` stays
//! nonnegative; the reference solution is residual-checked against the
//! normalized equation in the tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{falling_factorial_poly, ComplexRational, Poly, Rational};
use crate::newton::DifferenceEquation;
use crate::sequence::{CoefficientSequence, Provenance};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("lambda must be a rational strictly between 0 and 1: {0}")]
    InvalidLambda(String),
    #[error("sigma must be a positive rational: {0}")]
    InvalidSigma(String),
}

/// The shifted-argument equation of the construction, with
/// `terms[j−1] = A_j` multiplying `z^(j) Δ^j f(z−j)` and the `q`-term
/// `−A_0 z^(q) f(z−q)`.
#[derive(Clone, Debug)]
pub struct ShiftedEquation {
    pub lambda: Rational,
    pub sigma: Rational,
    pub p: usize,
    pub q: usize,
    pub a0: Rational,
    /// `A_1..A_p`.
    pub coeffs: Vec<Rational>,
}

/// Solve for `A_0..A_p` from `λ` and `σ`.
///
/// `A_1..A_p` are the falling-factorial coefficients of
/// `((n/λ)^(p))/σ^p`, scaled by the least positive rational `A_0` that makes
/// every `A_j` an integer.
pub fn build_shifted(lambda: &Rational, sigma: &Rational) -> Result<ShiftedEquation, ConstructError> {
    validate_lambda(lambda)?;
    if !sigma.is_positive() {
        return Err(ConstructError::InvalidSigma(sigma.to_string()));
    }
    let p = lambda.denom().to_usize().expect("validated p");
    let q = lambda.numer().to_usize().expect("validated q");

    // g(n) = Π_{k=0}^{p−1} (n/λ − k), expanded then rewritten falling
    let inv_lambda = lambda.recip();
    let mut g = Poly::constant(ComplexRational::new(Rational::one(), Rational::zero()));
    for k in 0..p {
        let factor = Poly::new(vec![
            ComplexRational::new(-Rational::from_integer(BigInt::from(k)), Rational::zero()),
            ComplexRational::new(inv_lambda.clone(), Rational::zero()),
        ]);
        g = g.mul(&factor);
    }
    let h = g.to_falling();
    debug_assert!(h.coeff(0).is_zero(), "no constant term: g(0) = 0");

    let sigma_p = num_traits::pow::pow(sigma.clone(), p);
    let ratios: Vec<Rational> = (1..=p).map(|j| h.coeff(j).re.clone() / &sigma_p).collect();

    // least positive rational clearing all denominators
    let mut den_lcm = BigInt::one();
    for r in &ratios {
        den_lcm = den_lcm.lcm(r.denom());
    }
    let mut num_gcd = BigInt::zero();
    for r in &ratios {
        let scaled = (r * Rational::from_integer(den_lcm.clone())).to_integer();
        num_gcd = num_gcd.gcd(&scaled);
    }
    if num_gcd.is_zero() {
        num_gcd = BigInt::one();
    }
    let a0 = Rational::new(den_lcm, num_gcd);
    let coeffs = ratios.iter().map(|r| r * &a0).collect();
    Ok(ShiftedEquation {
        lambda: lambda.clone(),
        sigma: sigma.clone(),
        p,
        q,
        a0,
        coeffs,
    })
}

fn validate_lambda(lambda: &Rational) -> Result<(), ConstructError> {
    if !(lambda.is_positive() && *lambda < Rational::one()) {
        return Err(ConstructError::InvalidLambda(lambda.to_string()));
    }
    if lambda.denom().to_usize().is_none() {
        return Err(ConstructError::InvalidLambda(format!(
            "{lambda}: denominator too large"
        )));
    }
    Ok(())
}

/// The closed-form solution: `a_{qt} = σ^{pt}/(pt)!` with `a_0 = 1`, all
/// other entries zero.
pub fn reference_solution(
    lambda: &Rational,
    sigma: &Rational,
    n: usize,
    precision_bits: u32,
) -> Result<CoefficientSequence, ConstructError> {
    validate_lambda(lambda)?;
    if !sigma.is_positive() {
        return Err(ConstructError::InvalidSigma(sigma.to_string()));
    }
    let p = lambda.denom().to_usize().expect("validated p");
    let q = lambda.numer().to_usize().expect("validated q");
    let sigma_p = num_traits::pow::pow(sigma.clone(), p);
    let mut values = vec![ComplexRational::zero(); n + 1];
    let mut acc = Rational::one();
    let mut t = 0usize;
    loop {
        let idx = q * t;
        if idx > n {
            break;
        }
        values[idx] = ComplexRational::new(acc.clone(), Rational::zero());
        // a_{q(t+1)} = a_{qt} · σ^p / ((pt+1)…(pt+p))
        let mut block = BigInt::one();
        for s in 1..=p {
            block *= BigInt::from(p * t + s);
        }
        acc = acc * &sigma_p / Rational::from_integer(block);
        t += 1;
    }
    Ok(CoefficientSequence::from_rationals(
        &values,
        precision_bits,
        Provenance::ClosedForm,
    ))
}

/// Coefficients of the operator identity
/// `Δ^m f(z+k) = Σ_i c_i Δ^i f(z)`, computed by the displayed double sum
/// `c_i = Σ_j C(m,j)(−1)^j C(k+m−j, i)` (entries below `i = m` cancel to
/// zero). Index `i` runs `0..=m+k`.
pub fn shift_expansion_coeffs(m: usize, k: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); m + k + 1];
    for j in 0..=m {
        let outer = binom(m, j);
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let upper = k + m - j;
        for (i, slot) in out.iter_mut().enumerate().take(upper + 1) {
            let inner = binom(upper, i);
            *slot += Rational::from_integer(&outer * inner * BigInt::from(sign));
        }
    }
    out
}

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Substitute `z → z + p` and expand all shifted differences, producing an
/// equation of the standard form whose solution set contains the reference
/// series.
pub fn normalize_shifts(se: &ShiftedEquation) -> DifferenceEquation {
    let p = se.p;
    let q = se.q;
    let mut polys = vec![Poly::zero(); p + 1];
    let p_rat = Rational::from_integer(BigInt::from(p));
    for j in 1..=p {
        let a_j = ComplexRational::new(se.coeffs[j - 1].clone(), Rational::zero());
        if a_j.is_zero() {
            continue;
        }
        // (z+p)^(j) as a polynomial in z
        let s_j = falling_factorial_poly(&p_rat, j);
        let weights = shift_expansion_coeffs(j, p - j);
        for (i, w) in weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let scale = a_j.clone() * ComplexRational::new(w.clone(), Rational::zero());
            polys[i] = polys[i].add(&s_j.scale(&scale));
        }
    }
    // −A_0 (z+p)^(q) f(z+p−q)
    let s_0 = falling_factorial_poly(&p_rat, q);
    let weights = shift_expansion_coeffs(0, p - q);
    for (i, w) in weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let scale =
            ComplexRational::new(-se.a0.clone() * w, Rational::zero());
        polys[i] = polys[i].add(&s_0.scale(&scale));
    }
    DifferenceEquation::new(polys).expect("construction yields a valid equation")
}

/// Build the equation and its reference solution for `(λ, σ)`.
pub fn construct(
    lambda: &Rational,
    sigma: &Rational,
    terms: usize,
    precision_bits: u32,
) -> Result<(DifferenceEquation, CoefficientSequence), ConstructError> {
    let shifted = build_shifted(lambda, sigma)?;
    let eq = normalize_shifts(&shifted);
    let solution = reference_solution(lambda, sigma, terms, precision_bits)?;
    Ok((eq, solution))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn ratio_examples() {
        // λ = 1/2, σ = 1: A_0/A_2 = (λσ)^2 = 1/4, A_0/A_1 = 1/2
        let se = build_shifted(&rat(1, 2), &rat(1, 1)).unwrap();
        assert_eq!(&se.a0 / &se.coeffs[1], rat(1, 4));
        assert_eq!(&se.a0 / &se.coeffs[0], rat(1, 2));
        // λ = 1/3, σ = 1: A_0/A_3 = 1/27, A_0/A_1 = 1/6
        let se = build_shifted(&rat(1, 3), &rat(1, 1)).unwrap();
        assert_eq!(&se.a0 / &se.coeffs[2], rat(1, 27));
        assert_eq!(&se.a0 / &se.coeffs[0], rat(1, 6));
        // λσ = 1 forces A_0/A_p = 1
        let se = build_shifted(&rat(1, 2), &rat(2, 1)).unwrap();
        assert_eq!(&se.a0 / &se.coeffs[1], rat(1, 1));
    }

    #[test]
    fn lambda_validation() {
        assert!(build_shifted(&rat(3, 2), &rat(1, 1)).is_err());
        assert!(build_shifted(&rat(0, 1), &rat(1, 1)).is_err());
        assert!(build_shifted(&rat(-1, 2), &rat(1, 1)).is_err());
        assert!(build_shifted(&rat(1, 2), &rat(0, 1)).is_err());
        assert!(build_shifted(&rat(1, 2), &rat(-3, 1)).is_err());
    }

    #[test]
    fn reference_solution_values() {
        // λ = 1/2, σ = 1: a_t = 1/(2t)!
        let seq = reference_solution(&rat(1, 2), &rat(1, 1), 6, 128).unwrap();
        let expected = [1.0, 0.5, 1.0 / 24.0, 1.0 / 720.0];
        for (t, e) in expected.iter().enumerate() {
            assert!((seq.get(t).re.to_f64() - e).abs() < 1e-12, "t={t}");
        }
        // λ = 3/4, σ = 1: a_{3k} = 1/(4k)!, zero off the lattice
        let seq = reference_solution(&rat(3, 4), &rat(1, 1), 9, 128).unwrap();
        assert!((seq.get(0).re.to_f64() - 1.0).abs() < 1e-12);
        assert!((seq.get(3).re.to_f64() - 1.0 / 24.0).abs() < 1e-15);
        assert!((seq.get(6).re.to_f64() - 1.0 / 40320.0).abs() < 1e-18);
        for n in [1, 2, 4, 5, 7, 8] {
            assert!(seq.get(n).is_zero(), "n={n}");
        }
    }

    #[test]
    fn shift_expansion_small_case() {
        // Δf(z+1) = Δf(z) + Δ²f(z)
        let c = shift_expansion_coeffs(1, 1);
        assert_eq!(c, vec![rat(0, 1), rat(1, 1), rat(1, 1)]);
        // f(z+1) = f + Δf
        let c = shift_expansion_coeffs(0, 1);
        assert_eq!(c, vec![rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn shift_expansion_matches_binomial_closed_form() {
        for m in 0..=3usize {
            for k in 0..=3usize {
                let c = shift_expansion_coeffs(m, k);
                for (i, got) in c.iter().enumerate() {
                    let want = if i >= m {
                        Rational::from_integer(binom(k, i - m))
                    } else {
                        Rational::zero()
                    };
                    assert_eq!(*got, want, "m={m} k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn normalized_equation_shape_for_half() {
        // λ = 1/2, σ = 1 after normalization:
        // P_2 = (z+2)(4z+6), P_1 = z+2, P_0 = −(z+2), up to the A_0 = 1/2
        // normalizer scale.
        let se = build_shifted(&rat(1, 2), &rat(1, 1)).unwrap();
        let eq = normalize_shifts(&se);
        assert_eq!(eq.m(), 2);
        assert_eq!(eq.degrees(), vec![Some(1), Some(1), Some(2)]);
        let p2 = eq.poly(2);
        let p0 = eq.poly(0);
        // leading coefficients in ratio A_p : −A_0 = 2 : −1/2
        let lead2 = p2.leading().unwrap().re.clone();
        let lead0 = p0.leading().unwrap().re.clone();
        assert_eq!(lead2 / lead0, rat(-4, 1));
    }
}
