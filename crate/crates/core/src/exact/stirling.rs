//! Stirling number tables, grown on demand by the triangular recurrences and
//! cached for the lifetime of the process.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

static SECOND_KIND: OnceLock<Mutex<Vec<Vec<BigInt>>>> = OnceLock::new();
static FIRST_KIND_SIGNED: OnceLock<Mutex<Vec<Vec<BigInt>>>> = OnceLock::new();

fn grow<F>(table: &OnceLock<Mutex<Vec<Vec<BigInt>>>>, n: usize, step: F) -> Vec<BigInt>
where
    F: Fn(&[BigInt], usize, usize) -> BigInt,
{
    let mutex = table.get_or_init(|| Mutex::new(vec![vec![BigInt::one()]]));
    let mut rows = mutex.lock().expect("stirling cache poisoned");
    while rows.len() <= n {
        let prev = rows.last().expect("cache seeded with row 0");
        let row_idx = rows.len();
        let mut row = vec![BigInt::zero(); row_idx + 1];
        for (k, slot) in row.iter_mut().enumerate().take(row_idx + 1).skip(1) {
            *slot = step(prev, row_idx, k);
        }
        rows.push(row);
    }
    rows[n].clone()
}

/// Stirling number of the second kind `S(n, k)`: `z^n = Σ_k S(n,k) z^(k)`.
pub fn stirling2(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let row = grow(&SECOND_KIND, n, |prev, _row, k| {
        let from_prev_k = if k < prev.len() {
            BigInt::from(k) * &prev[k]
        } else {
            BigInt::zero()
        };
        &prev[k - 1] + from_prev_k
    });
    row[k].clone()
}

/// Signed Stirling number of the first kind `s(n, k)`: `z^(n) = Σ_k s(n,k) z^k`.
pub fn stirling1_signed(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let row = grow(&FIRST_KIND_SIGNED, n, |prev, row, k| {
        let from_prev_k = if k < prev.len() {
            BigInt::from(row - 1) * &prev[k]
        } else {
            BigInt::zero()
        };
        &prev[k - 1] - from_prev_k
    });
    row[k].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_kind_small_values() {
        assert_eq!(stirling2(0, 0), BigInt::one());
        assert_eq!(stirling2(3, 2), BigInt::from(3));
        assert_eq!(stirling2(5, 3), BigInt::from(25));
        assert_eq!(stirling2(6, 2), BigInt::from(31));
        assert_eq!(stirling2(4, 5), BigInt::zero());
    }

    #[test]
    fn first_kind_small_values() {
        assert_eq!(stirling1_signed(3, 1), BigInt::from(2));
        assert_eq!(stirling1_signed(3, 2), BigInt::from(-3));
        assert_eq!(stirling1_signed(5, 2), BigInt::from(-50));
        assert_eq!(stirling1_signed(5, 1), BigInt::from(24));
    }

    #[test]
    fn kinds_are_mutually_inverse_for_small_degrees() {
        // Σ_k S(n,k) s(k,m) = δ_{nm}
        for n in 0..8usize {
            for m in 0..8usize {
                let mut acc = BigInt::zero();
                for k in 0..=n {
                    acc += stirling2(n, k) * stirling1_signed(k, m);
                }
                let expected = if n == m { BigInt::one() } else { BigInt::zero() };
                assert_eq!(acc, expected, "n={n} m={m}");
            }
        }
    }
}
