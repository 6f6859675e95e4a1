//! Shared fixtures for the integration tests.

use deltagrowth::exact::{crat, ComplexRational, Poly};
use deltagrowth::newton::DifferenceEquation;
use rand::rngs::StdRng;
use rand::Rng;

pub fn poly(coeffs: &[i64]) -> Poly {
    Poly::new(coeffs.iter().map(|&c| crat(c, 1)).collect())
}

/// `(4z+6)Δ²y + 3Δy + y = 0`: order 1/2, type 1.
pub fn example_6_1() -> DifferenceEquation {
    DifferenceEquation::new(vec![poly(&[1]), poly(&[3]), poly(&[6, 4])]).unwrap()
}

/// `(6z²+19z+15)Δ³f + (z+3)Δ²f − Δf − f = 0`: order 1/3, type 3/6^(1/3).
pub fn example_6_2() -> DifferenceEquation {
    DifferenceEquation::new(vec![
        poly(&[-1]),
        poly(&[-1]),
        poly(&[3, 1]),
        poly(&[15, 19, 6]),
    ])
    .unwrap()
}

/// Fourth-order equation with a solution of order 3/4 and type 1.
pub fn example_6_3() -> DifferenceEquation {
    DifferenceEquation::new(vec![
        poly(&[-486, -405, -81]),
        poly(&[-446, -405, -81]),
        poly(&[-120, -80]),
        poly(&[1944, 1760, 384]),
        poly(&[3640, 4656, 1920, 256]),
    ])
    .unwrap()
}

/// Random equation with nonzero rational coefficients, degrees ≤ 5, m ≤ 6.
/// Some coefficient polynomials may vanish identically; `P_m` never does.
pub fn random_equation(rng: &mut StdRng) -> DifferenceEquation {
    let m = rng.gen_range(1..=6usize);
    let polys: Vec<Poly> = (0..=m)
        .map(|j| {
            if j < m && rng.gen_ratio(1, 6) {
                return Poly::zero();
            }
            let deg = rng.gen_range(0..=5usize);
            let coeffs: Vec<ComplexRational> = (0..=deg)
                .map(|i| {
                    if i < deg && rng.gen_ratio(1, 3) {
                        crat(0, 1)
                    } else {
                        let mut num = 0;
                        while num == 0 {
                            num = rng.gen_range(-9i64..=9);
                        }
                        let den = rng.gen_range(1i64..=9);
                        crat(num, den)
                    }
                })
                .collect();
            Poly::new(coeffs)
        })
        .collect();
    DifferenceEquation::new(polys).unwrap()
}
