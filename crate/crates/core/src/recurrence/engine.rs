//! Division-free exact forward solver for the coefficient recurrence.
//!
//! Values are carried as Gaussian-integer numerators over the running
//! denominator `D0 · Π ql(n')`, where `ql(n)` is the (integer-scaled)
//! leading recurrence coefficient at row `n` and `D0` clears the prefix
//! denominators. Each step multiplies big numerators only by small row
//! values, so cost per step stays linear in the numerator size and no
//! rational gcd reduction is ever needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bigfloat::{BigComplex, BigFloat};
use crate::exact::{ComplexRational, Rational};
use crate::sequence::{CoefficientSequence, Provenance};

use super::RecurrenceSystem;

/// Gaussian integer as a plain pair.
pub(crate) type Gauss = (BigInt, BigInt);

pub(crate) fn g_zero() -> Gauss {
    (BigInt::zero(), BigInt::zero())
}

pub(crate) fn g_one() -> Gauss {
    (BigInt::one(), BigInt::zero())
}

pub(crate) fn g_is_zero(a: &Gauss) -> bool {
    a.0.is_zero() && a.1.is_zero()
}

pub(crate) fn g_mul(a: &Gauss, b: &Gauss) -> Gauss {
    // common real-only fast paths
    if a.1.is_zero() && b.1.is_zero() {
        return (&a.0 * &b.0, BigInt::zero());
    }
    if a.1.is_zero() {
        return (&a.0 * &b.0, &a.0 * &b.1);
    }
    if b.1.is_zero() {
        return (&a.0 * &b.0, &a.1 * &b.0);
    }
    (
        &a.0 * &b.0 - &a.1 * &b.1,
        &a.0 * &b.1 + &a.1 * &b.0,
    )
}

pub(crate) fn g_add_assign(a: &mut Gauss, b: Gauss) {
    a.0 += b.0;
    a.1 += b.1;
}

pub(crate) fn g_neg(a: Gauss) -> Gauss {
    (-a.0, -a.1)
}

fn g_to_bigcomplex(a: &Gauss, prec: u32) -> BigComplex {
    BigComplex::new(BigFloat::from_bigint(&a.0, prec), BigFloat::from_bigint(&a.1, prec))
}

/// Integer-scaled recurrence rows for a fixed system and start row.
pub(crate) struct Engine {
    m: usize,
    /// trailing offset `e = d_{s_p} − s_p`
    trail: i64,
    /// first forward row; all rows `n ≥ start` have `ql(n) ≠ 0`
    start: usize,
    /// coefficients of `S·Q(n, i)` as Gaussian integers, indexed by `i + m`
    qint: Vec<Vec<Gauss>>,
}

/// Full forward run with per-index denominators, for output conversion.
pub(crate) struct FullRun {
    pub g: Vec<Gauss>,
    /// cumulative `P_ν = Π_{n'=start}^{ν−m} ql(n')`, `1` below `start + m`
    pub pden: Vec<Gauss>,
    pub d0: BigInt,
}

/// Windowed run keeping only the trailing block of numerators.
pub(crate) struct TailRun {
    /// `g[n_last − keep + 1 ..= n_last]`, oldest first.
    pub g: Vec<Gauss>,
    pub d0: BigInt,
}

impl Engine {
    pub fn new(rs: &RecurrenceSystem, start: usize) -> Self {
        let m = rs.m;
        // one global integer scale clearing every Q coefficient denominator
        let mut scale = BigInt::one();
        for q in &rs.qpolys {
            for c in q.coeffs() {
                scale = scale.lcm(c.re.denom());
                scale = scale.lcm(c.im.denom());
            }
        }
        let scale_rat = Rational::from_integer(scale);
        let qint = rs
            .qpolys
            .iter()
            .map(|q| {
                q.coeffs()
                    .iter()
                    .map(|c| {
                        let re = &c.re * &scale_rat;
                        let im = &c.im * &scale_rat;
                        debug_assert!(re.is_integer() && im.is_integer());
                        (re.to_integer(), im.to_integer())
                    })
                    .collect()
            })
            .collect();
        Engine {
            m,
            trail: rs.trail_offset(),
            start,
            qint,
        }
    }

    /// Evaluate `S·Q(n, i)` at integer `n` (Horner over Gaussian integers).
    fn q_eval(&self, i: i64, n: usize) -> Gauss {
        let coeffs = &self.qint[(i + self.m as i64) as usize];
        let mut acc = g_zero();
        let nb = BigInt::from(n);
        for c in coeffs.iter().rev() {
            acc = (&acc.0 * &nb + &c.0, &acc.1 * &nb + &c.1);
        }
        acc
    }

    fn prefix_numerators(&self, prefix: &[ComplexRational]) -> (Vec<Gauss>, BigInt) {
        let mut d0 = BigInt::one();
        for v in prefix {
            d0 = d0.lcm(v.re.denom());
            d0 = d0.lcm(v.im.denom());
        }
        let d0_rat = Rational::from_integer(d0.clone());
        let g = prefix
            .iter()
            .map(|v| {
                let re = &v.re * &d0_rat;
                let im = &v.im * &d0_rat;
                (re.to_integer(), im.to_integer())
            })
            .collect();
        (g, d0)
    }

    /// One forward step: produce `g[n + m]` from the row at `n`.
    fn step(&self, g: &[Gauss], ql: &[Gauss], ql_base: usize, n: usize) -> Gauss {
        let mut acc = g_zero();
        let lo_i = -(self.m as i64) + 1;
        for i in lo_i..=self.trail {
            let idx = (n as i64 - i) as usize;
            if g_is_zero(&g[idx]) {
                continue;
            }
            let qv = self.q_eval(i, n);
            if g_is_zero(&qv) {
                continue;
            }
            let mut term = g_mul(&g[idx], &qv);
            let block_lo = ((n as i64 - i - self.m as i64 + 1).max(self.start as i64)) as usize;
            for n_prime in block_lo..n {
                term = g_mul(&term, &ql[n_prime - ql_base]);
            }
            g_add_assign(&mut acc, term);
        }
        g_neg(acc)
    }

    /// Forward-solve to `n_last`, keeping all numerators and denominators.
    pub fn run_full(&self, prefix: &[ComplexRational], n_last: usize) -> FullRun {
        let (mut g, d0) = self.prefix_numerators(prefix);
        assert_eq!(g.len(), self.start + self.m, "prefix must cover the start row");
        g.truncate(n_last + 1);
        let mut pden = vec![g_one(); (self.start + self.m).min(n_last + 1)];
        let mut ql = Vec::new();
        if n_last + 1 > self.start + self.m {
            ql.reserve(n_last + 1 - self.start - self.m);
        }
        for n in self.start..=n_last.saturating_sub(self.m) {
            let qlv = self.q_eval(-(self.m as i64), n);
            assert!(!g_is_zero(&qlv), "leading coefficient vanished at row {n}");
            ql.push(qlv);
            let next = self.step(&g, &ql, self.start, n);
            g.push(next);
            pden.push(g_mul(pden.last().expect("seeded"), ql.last().expect("just pushed")));
        }
        FullRun { g, pden, d0 }
    }

    /// Forward-solve to `n_last`, keeping only `g[n_last − keep + 1 ..= n_last]`.
    /// Old numerators are dropped as soon as no future row can reference them.
    pub fn run_tail(&self, prefix: &[ComplexRational], n_last: usize, keep: usize) -> TailRun {
        let (mut g, d0) = self.prefix_numerators(prefix);
        assert_eq!(g.len(), self.start + self.m);
        assert!(n_last + 1 >= g.len() + keep.max(1));
        let mut ql: Vec<Gauss> = Vec::new();
        let window = (self.m as i64 + self.trail.max(0)) as usize + 1;
        for n in self.start..=(n_last - self.m) {
            let qlv = self.q_eval(-(self.m as i64), n);
            assert!(!g_is_zero(&qlv), "leading coefficient vanished at row {n}");
            ql.push(qlv);
            let next = self.step(&g, &ql, self.start, n);
            g.push(next);
            // prune numerators no longer reachable and not in the kept tail
            let reach = (n + 1) as i64 - self.trail;
            if reach > 0 {
                let cut = (reach as usize).min(n_last + 1 - keep);
                for idx in cut.saturating_sub(window)..cut {
                    g[idx] = g_zero();
                }
            }
            // ql history older than the block span is dead too
            let ql_cut = (n as i64 - (self.m as i64 + self.trail) - 1).max(0) as usize;
            if ql_cut > self.start {
                for slot in ql
                    .iter_mut()
                    .take(ql_cut - self.start)
                    .filter(|s| !g_is_zero(s))
                {
                    *slot = g_zero();
                }
            }
        }
        let first_index = n_last + 1 - keep;
        TailRun {
            g: g.split_off(first_index),
            d0,
        }
    }
}

impl FullRun {
    /// Convert to floating coefficients at the requested precision.
    pub fn to_sequence(&self, precision_bits: u32, provenance: Provenance) -> CoefficientSequence {
        let guard = precision_bits + 32;
        let d0f = BigFloat::from_bigint(&self.d0, guard);
        let values = self
            .g
            .iter()
            .zip(self.pden.iter())
            .map(|(g, p)| {
                if g_is_zero(g) {
                    return BigComplex::zero();
                }
                let num = g_to_bigcomplex(g, guard);
                let den = g_to_bigcomplex(p, guard).scale(&d0f, guard);
                num.div(&den, precision_bits)
            })
            .collect();
        CoefficientSequence::new(values, precision_bits, provenance)
    }
}
