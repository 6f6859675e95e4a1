//! The exact coefficient recurrence behind binomial-series solutions.
//!
//! Substituting `f(z) = Σ a_n z^(n)` into the difference equation and
//! collecting the falling-factorial basis yields, for `n ≥ d`,
//!
//! `a_{n+m} Q(n,−m) + a_{n+m−1} Q(n,−m+1) + … + a_{n−d} Q(n,d) = 0`
//!
//! with `Q(n,i) = Σ_j ((n−i)^(j)/(i+j)!) Δ^{i+j}(P_j(n−j−i))` and, for
//! `n < d`, a block of low-index linear relations. `Q(n,k)` vanishes
//! identically beyond the trailing vertex offset, the degree of `Q` at each
//! vertex offset `d_{s_j} − s_j` is exactly `s_j` with leading coefficient
//! `A_{s_j, d_{s_j}}`, and the upward-convex hull of `(m+i, deg Q(n,i))`
//! reproduces the index sequence (checked by
//! [`crate::newton::hull_crosscheck`]).
//!
//! Coefficient generation is exact: prefix constraints (including the
//! finitely many resonance rows where `Q(n,−m)` vanishes at an integer) are
//! solved by rational elimination, the forward solve runs division-free over
//! Gaussian integers, and floating point appears only when converting the
//! result to the requested working precision.

mod engine;
mod linalg;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::bigfloat::BigComplex;
use crate::exact::{
    falling_factorial_poly, ComplexRational, Poly, Rational,
};
use crate::growth;
use crate::newton::{s_sequence, DifferenceEquation, GrowthProfile, NewtonError, SSequence};
use crate::sequence::{CoefficientSequence, Provenance};

use engine::{g_is_zero, Engine};

#[derive(Debug, Error)]
pub enum RecurrenceError {
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error("expected {expected} seed value(s), got {got}")]
    SeedCountMismatch { expected: usize, got: usize },
    #[error("seed exponent out of representable range")]
    SeedNotRepresentable,
    #[error("prefix values violate the low-index constraints: no entire solution")]
    InconsistentConstraints,
    #[error(
        "precision too low: max relative recurrence residual 2^{max_residual_log2:.1} at {precision_bits} bits"
    )]
    PrecisionTooLow {
        max_residual_log2: f64,
        precision_bits: u32,
    },
    #[error("segment index {segment} out of range 1..={max}")]
    SegmentOutOfRange { segment: usize, max: usize },
    #[error("requested {got} terms but the basis needs at least {required}")]
    RequestTooSmall { required: usize, got: usize },
}

/// The exact recurrence system of a difference equation.
#[derive(Clone, Debug)]
pub struct RecurrenceSystem {
    pub m: usize,
    /// `d = max_j deg P_j`
    pub max_degree: usize,
    /// `Q(n, i)` for `i = −m..=d`, indexed by `i + m`; identically zero for
    /// `i` beyond the trailing vertex offset.
    pub qpolys: Vec<Poly>,
    /// Low-index relations for `n < d`, each row over `a_0..a_{m+d−1}`.
    pub low_constraints: Vec<Vec<ComplexRational>>,
    pub s_seq: SSequence,
}

impl RecurrenceSystem {
    pub fn q(&self, i: i64) -> &Poly {
        &self.qpolys[(i + self.m as i64) as usize]
    }

    /// `e = d_{s_p} − s_p`, the trailing vertex offset.
    pub fn trail_offset(&self) -> i64 {
        self.s_seq.offset(self.s_seq.p())
    }

    /// Order `m + e` of the effective recurrence.
    pub fn order(&self) -> i64 {
        self.m as i64 + self.trail_offset()
    }

    /// Nonnegative integer rows `n ≥ d` where `Q(n, −m)` vanishes.
    pub fn resonances(&self) -> Vec<i64> {
        integer_roots_ge(self.q(-(self.m as i64)), self.max_degree as i64)
    }
}

/// Build the `Q` table and the low-index constraint rows.
pub fn build_system(eq: &DifferenceEquation) -> Result<RecurrenceSystem, RecurrenceError> {
    let s = s_sequence(eq)?;
    let m = eq.m();
    let d = eq.max_degree();

    // Δ^k P_j for all j, up to vanishing
    let deltas: Vec<Vec<Poly>> = eq
        .polys()
        .iter()
        .map(|p| {
            let mut v = vec![p.clone()];
            while !v.last().expect("nonempty").is_zero() {
                let next = v.last().expect("nonempty").delta(1);
                v.push(next);
            }
            v
        })
        .collect();
    let delta_of = |j: usize, k: usize| -> Option<&Poly> {
        let v = &deltas[j];
        let p = v.get(k.min(v.len() - 1))?;
        if p.is_zero() {
            None
        } else {
            v.get(k)
        }
    };

    let mut qpolys = Vec::with_capacity(m + d + 1);
    for i in -(m as i64)..=(d as i64) {
        let mut q = Poly::zero();
        for j in 0..=m {
            let k = i + j as i64;
            if k < 0 {
                continue;
            }
            let k = k as usize;
            let Some(dp) = delta_of(j, k) else { continue };
            // (Δ^{i+j} P_j)(n − j − i)
            let shifted = dp.shift(&Rational::from_integer(BigInt::from(-(j as i64) - i)));
            // (n − i)^(j)
            let fall = falling_factorial_poly(&Rational::from_integer(BigInt::from(-i)), j);
            let inv_fact = ComplexRational::new(
                Rational::new(BigInt::one(), factorial(k)),
                Rational::zero(),
            );
            q = q.add(&fall.mul(&shifted).scale(&inv_fact));
        }
        qpolys.push(q);
    }

    // low-index relations (n < d): Σ_{i≤n} Σ_j a_{n−i+j} (n−i+j)^(j) Δ^i(P_j)(n−i)/i!
    let mut low_constraints = Vec::with_capacity(d);
    for n in 0..d {
        let mut row = vec![ComplexRational::zero(); m + d];
        for i in 0..=n {
            for j in 0..=m {
                let Some(dp) = delta_of(j, i) else { continue };
                let val = dp.eval_int((n - i) as i64);
                if val.is_zero() {
                    continue;
                }
                let idx = n - i + j;
                let ff = falling_number((n - i + j) as i64, j);
                let coeff = val
                    * ComplexRational::new(
                        ff / Rational::from_integer(factorial(i)),
                        Rational::zero(),
                    );
                row[idx] = row[idx].clone() + coeff;
            }
        }
        low_constraints.push(row);
    }

    let rs = RecurrenceSystem {
        m,
        max_degree: d,
        qpolys,
        low_constraints,
        s_seq: s,
    };
    debug_assert!(degree_table_holds(&rs, eq));
    Ok(rs)
}

/// Exact falling factorial number `x^(j)` for integer `x`.
fn falling_number(x: i64, j: usize) -> Rational {
    let mut acc = BigInt::one();
    for t in 0..j as i64 {
        acc *= BigInt::from(x - t);
    }
    Rational::from_integer(acc)
}

fn factorial(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for t in 2..=k {
        acc *= BigInt::from(t);
    }
    acc
}

/// Verify every row of the degree table against the index sequence.
pub fn degree_table_holds(rs: &RecurrenceSystem, eq: &DifferenceEquation) -> bool {
    let s = &rs.s_seq;
    let p = s.p();
    let d_s1 = s.degrees[0] as i64;
    for i in -(rs.m as i64)..=(rs.max_degree as i64) {
        let q = rs.q(i);
        let deg = q.degree().map(|x| x as i64);
        if i < s.offset(1) {
            if deg.is_some_and(|dq| dq > d_s1 - i) {
                return false;
            }
            continue;
        }
        if i > s.offset(p) {
            if !q.is_zero() {
                return false;
            }
            continue;
        }
        // inside the vertex range: vertex rows exact, interior rows bounded
        if let Some(j) = (1..=p).find(|&j| s.offset(j) == i) {
            let want_deg = s.indices[j - 1] as i64;
            if deg != Some(want_deg) {
                return false;
            }
            let lead = q.leading().expect("vertex row nonzero");
            let expected = eq
                .poly(s.indices[j - 1])
                .leading()
                .expect("vertex coefficient nonzero");
            if lead != expected {
                return false;
            }
        } else {
            let j = (1..p).find(|&j| s.offset(j) < i && i < s.offset(j + 1));
            let bound = match j {
                Some(j) => s.degrees[j] as i64 - i,
                None => return false,
            };
            if deg.is_some_and(|dq| dq > bound) {
                return false;
            }
        }
    }
    true
}

/// Nonzero simple roots of the characteristic equation of polygon segment
/// `j`: all `γ` with `γ^Δ = −B_{j+1}/B_j`, where `B_j` is the coefficient of
/// `n^{s_j}` in `Q(n, d_{s_j} − s_j)`.
#[derive(Clone, Debug)]
pub struct SegmentRoots {
    pub segment: usize,
    /// `Δ = (d_{s_{j+1}} − s_{j+1}) − (d_{s_j} − s_j)`; also the root count.
    pub count: usize,
    /// `γ^Δ` exactly.
    pub ratio: ComplexRational,
    /// `|γ^Δ|^2`, so `|γ| = modulus_squared^{1/(2Δ)}`, shared by all roots.
    pub modulus_squared: Rational,
    /// Principal argument of one root.
    pub base_argument: f64,
    /// The `Δ` roots, approximate, multiplicity one each.
    pub roots: Vec<(f64, f64)>,
}

pub fn characteristic_roots(
    rs: &RecurrenceSystem,
    j: usize,
) -> Result<SegmentRoots, RecurrenceError> {
    let p = rs.s_seq.p();
    if j == 0 || j + 1 > p {
        return Err(RecurrenceError::SegmentOutOfRange {
            segment: j,
            max: p.saturating_sub(1),
        });
    }
    let b_j = rs.q(rs.s_seq.offset(j)).coeff(rs.s_seq.indices[j - 1]);
    let b_j1 = rs.q(rs.s_seq.offset(j + 1)).coeff(rs.s_seq.indices[j]);
    let ratio = -(b_j1 / b_j);
    let count = (rs.s_seq.offset(j + 1) - rs.s_seq.offset(j)) as usize;
    let modulus_squared = ratio.norm_sqr();
    let ln_mod = 0.5 * crate::exact::ln_rational(&modulus_squared);
    let modulus = (ln_mod / count as f64).exp();
    let arg = ratio
        .im
        .to_f64()
        .unwrap_or(0.0)
        .atan2(ratio.re.to_f64().unwrap_or(0.0));
    let base_argument = arg / count as f64;
    let roots = (0..count)
        .map(|t| {
            let theta = base_argument + 2.0 * std::f64::consts::PI * t as f64 / count as f64;
            (modulus * theta.cos(), modulus * theta.sin())
        })
        .collect();
    Ok(SegmentRoots {
        segment: j,
        count,
        ratio,
        modulus_squared,
        base_argument,
        roots,
    })
}

/// Integer roots `n ≥ lower` of a complex-rational polynomial, by exact
/// evaluation up to the Cauchy bound of its components.
fn integer_roots_ge(poly: &Poly, lower: i64) -> Vec<i64> {
    assert!(!poly.is_zero());
    let parts: Vec<Vec<Rational>> = [
        poly.coeffs().iter().map(|c| c.re.clone()).collect::<Vec<_>>(),
        poly.coeffs().iter().map(|c| c.im.clone()).collect::<Vec<_>>(),
    ]
    .into_iter()
    .filter(|v: &Vec<Rational>| v.iter().any(|c| !c.is_zero()))
    .collect();
    let mut bound = f64::INFINITY;
    for part in &parts {
        let deg = part.iter().rposition(|c| !c.is_zero()).expect("nonzero part");
        if deg == 0 {
            return Vec::new(); // a nonzero constant part: no roots at all
        }
        let ln_lead = crate::exact::ln_rational(&part[deg].abs());
        let mut part_bound: f64 = 1.0;
        for c in part.iter().take(deg) {
            if c.is_zero() {
                continue;
            }
            let ratio = (crate::exact::ln_rational(&c.abs()) - ln_lead).exp();
            part_bound = part_bound.max(1.0 + ratio);
        }
        bound = bound.min(part_bound);
    }
    assert!(
        bound <= 4.0e6,
        "integer root scan bound {bound} too large; coefficients are degenerate"
    );
    let hi = bound.ceil() as i64 + 2;
    (lower..=hi)
        .filter(|&n| poly.eval_int(n).is_zero())
        .collect()
}

/// Exact parametrization of the solution prefix after the low-index and
/// resonance constraints.
#[derive(Clone, Debug)]
pub struct SolutionParametrization {
    /// The prefix covers `a_0..a_{prefix_len−1}`.
    pub prefix_len: usize,
    /// First forward row; all rows from here on divide cleanly.
    pub start: usize,
    /// Seed slots: indices of the free coefficients, ascending.
    pub free_indices: Vec<usize>,
    /// Per free coefficient, the full prefix with that seed set to one.
    pub basis: Vec<Vec<ComplexRational>>,
}

impl SolutionParametrization {
    pub fn free_count(&self) -> usize {
        self.free_indices.len()
    }

    /// Prefix values for the given seed vector.
    pub fn prefix_for(&self, seeds: &[ComplexRational]) -> Vec<ComplexRational> {
        assert_eq!(seeds.len(), self.free_count());
        let mut out = vec![ComplexRational::zero(); self.prefix_len];
        for (seed, basis) in seeds.iter().zip(self.basis.iter()) {
            if seed.is_zero() {
                continue;
            }
            for (slot, b) in out.iter_mut().zip(basis.iter()) {
                if !b.is_zero() {
                    *slot = slot.clone() + seed.clone() * b.clone();
                }
            }
        }
        out
    }
}

/// Solve the prefix constraints exactly.
pub fn parametrize(rs: &RecurrenceSystem) -> SolutionParametrization {
    let m = rs.m;
    let d = rs.max_degree;
    let resonances = rs.resonances();
    let start = resonances
        .iter()
        .max()
        .map(|&n0| (n0 + 1) as usize)
        .unwrap_or(d)
        .max(d);
    let prefix_len = start + m;

    let mut rows: Vec<Vec<ComplexRational>> = Vec::new();
    for low in &rs.low_constraints {
        let mut row = vec![ComplexRational::zero(); prefix_len];
        row[..low.len()].clone_from_slice(low);
        rows.push(row);
    }
    for n in d..start {
        let mut row = vec![ComplexRational::zero(); prefix_len];
        for i in -(m as i64)..=rs.trail_offset() {
            let q = rs.q(i);
            if q.is_zero() {
                continue;
            }
            let v = q.eval_int(n as i64);
            if v.is_zero() {
                continue;
            }
            let idx = (n as i64 - i) as usize;
            row[idx] = row[idx].clone() + v;
        }
        rows.push(row);
    }

    let (reduced, pivots) = linalg::rref_high_pivot(rows, prefix_len);
    let (free_indices, basis) = linalg::kernel_basis(&reduced, &pivots, prefix_len);
    SolutionParametrization {
        prefix_len,
        start,
        free_indices,
        basis,
    }
}

/// Generate `a_0..a_n` from seed values in the free slots.
///
/// Seeds are dyadic (they arrive as floats); the prefix is assembled and the
/// recurrence forward-solved exactly, and only the final values are rounded
/// to the requested precision. The converted output is residual-checked.
pub fn generate_coefficients(
    rs: &RecurrenceSystem,
    seeds: &[BigComplex],
    n: usize,
    precision_bits: u32,
) -> Result<CoefficientSequence, RecurrenceError> {
    let param = parametrize(rs);
    if seeds.len() != param.free_count() {
        return Err(RecurrenceError::SeedCountMismatch {
            expected: param.free_count(),
            got: seeds.len(),
        });
    }
    let exact_seeds: Vec<ComplexRational> = seeds
        .iter()
        .map(|s| s.to_rational().ok_or(RecurrenceError::SeedNotRepresentable))
        .collect::<Result<_, _>>()?;
    generate_from_exact_seeds(rs, &param, &exact_seeds, n, precision_bits)
}

/// Seed-vector variant over exact scalars (used by tests and the basis
/// machinery).
pub fn generate_from_exact_seeds(
    rs: &RecurrenceSystem,
    param: &SolutionParametrization,
    seeds: &[ComplexRational],
    n: usize,
    precision_bits: u32,
) -> Result<CoefficientSequence, RecurrenceError> {
    let prefix = param.prefix_for(seeds);
    let run_to = n.max(param.prefix_len.saturating_sub(1));
    let engine = Engine::new(rs, param.start);
    let run = engine.run_full(&prefix, run_to);
    let mut seq = run.to_sequence(precision_bits, Provenance::Recurrence);
    seq = seq.truncated(n);
    check_precision(rs, &seq, precision_bits)?;
    Ok(seq)
}

/// Generate from explicit prefix values `a_0..a_{prefix_len−1}`, verifying
/// the low-index and resonance constraints exactly.
pub fn generate_from_prefix(
    rs: &RecurrenceSystem,
    prefix: &[ComplexRational],
    n: usize,
    precision_bits: u32,
) -> Result<CoefficientSequence, RecurrenceError> {
    let param = parametrize(rs);
    assert_eq!(prefix.len(), param.prefix_len, "prefix length mismatch");
    // every constraint row must vanish on the prefix
    for low in rs.low_constraints.iter() {
        let mut acc = ComplexRational::zero();
        for (c, v) in low.iter().zip(prefix.iter()) {
            if !c.is_zero() {
                acc = acc + c.clone() * v.clone();
            }
        }
        if !acc.is_zero() {
            return Err(RecurrenceError::InconsistentConstraints);
        }
    }
    for nrow in rs.max_degree..param.start {
        let mut acc = ComplexRational::zero();
        for i in -(rs.m as i64)..=rs.trail_offset() {
            let q = rs.q(i);
            if q.is_zero() {
                continue;
            }
            let idx = (nrow as i64 - i) as usize;
            acc = acc + q.eval_int(nrow as i64) * prefix[idx].clone();
        }
        if !acc.is_zero() {
            return Err(RecurrenceError::InconsistentConstraints);
        }
    }
    let engine = Engine::new(rs, param.start);
    let run = engine.run_full(prefix, n.max(param.prefix_len - 1));
    let seq = run.to_sequence(precision_bits, Provenance::Recurrence).truncated(n);
    check_precision(rs, &seq, precision_bits)?;
    Ok(seq)
}

/// Maximum relative residual of the recurrence over all checkable rows.
#[derive(Clone, Copy, Debug)]
pub struct ResidualReport {
    /// `max_n |Σ_i a_{n−i} Q(n,i)| / max_i |a_{n−i} Q(n,i)|`, as a plain
    /// ratio (0 when every row vanishes identically).
    pub max_relative: f64,
    pub worst_row: Option<i64>,
}

pub fn residual(rs: &RecurrenceSystem, seq: &CoefficientSequence) -> ResidualReport {
    let prec = seq.precision_bits + 16;
    let n_max = seq.max_index();
    let mut worst: (f64, Option<i64>) = (0.0, None);

    let mut check_row = |terms: &[BigComplex], row: i64| {
        let mut sum = BigComplex::zero();
        let mut max_log2 = f64::NEG_INFINITY;
        let mut any = false;
        for t in terms {
            if t.is_zero() {
                continue;
            }
            any = true;
            max_log2 = max_log2.max(t.log2_abs().expect("nonzero term"));
            sum = sum.add(t, prec);
        }
        if !any {
            return;
        }
        let rel = match sum.log2_abs() {
            None => 0.0,
            Some(l) => (l - max_log2).exp2(),
        };
        if rel > worst.0 {
            worst = (rel, Some(row));
        }
    };

    // low-index rows
    for (n, low) in rs.low_constraints.iter().enumerate() {
        if low.len() > seq.len() {
            continue;
        }
        let terms: Vec<BigComplex> = low
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| {
                BigComplex::from_rational(c, prec).mul(seq.get(idx), prec)
            })
            .collect();
        check_row(&terms, n as i64);
    }
    // recurrence rows
    let e = rs.trail_offset();
    let mut n = rs.max_degree as i64;
    while n + (rs.m as i64) <= n_max as i64 {
        if n - e < 0 {
            n += 1;
            continue;
        }
        let mut terms = Vec::new();
        for i in -(rs.m as i64)..=e {
            let q = rs.q(i);
            if q.is_zero() {
                continue;
            }
            let qv = q.eval_int(n);
            if qv.is_zero() {
                continue;
            }
            let idx = (n - i) as usize;
            terms.push(BigComplex::from_rational(&qv, prec).mul(seq.get(idx), prec));
        }
        check_row(&terms, n);
        n += 1;
    }
    ResidualReport {
        max_relative: worst.0,
        worst_row: worst.1,
    }
}

fn check_precision(
    rs: &RecurrenceSystem,
    seq: &CoefficientSequence,
    precision_bits: u32,
) -> Result<(), RecurrenceError> {
    let rep = residual(rs, seq);
    let threshold = (-(precision_bits as f64) / 2.0).exp2();
    if rep.max_relative > threshold {
        return Err(RecurrenceError::PrecisionTooLow {
            max_residual_log2: rep.max_relative.log2(),
            precision_bits,
        });
    }
    Ok(())
}

/// How a basis member grows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionClass {
    /// Terminating coefficient sequence.
    Polynomial,
    /// Estimated order matches profile entry `segment` (1-based).
    Order { segment: usize },
    /// Not of order below one.
    Other,
}

#[derive(Clone, Debug)]
pub struct BasisMember {
    pub seq: CoefficientSequence,
    pub chi_hat: Option<f64>,
    pub class: SolutionClass,
}

#[derive(Clone, Debug, Default)]
pub struct SolutionBasis {
    pub members: Vec<BasisMember>,
}

impl SolutionBasis {
    /// Members matching some profile entry (order below one).
    pub fn sub_unit_count(&self) -> usize {
        self.members
            .iter()
            .filter(|b| matches!(b.class, SolutionClass::Order { .. }))
            .count()
    }
}

/// Tolerance on `|χ̂ − ρ_j|` when classifying basis members.
pub const CHI_CLASS_TOL: f64 = 0.05;

/// Compute a growth-separated basis of the constrained solution space,
/// truncated at `n`, and classify each member.
///
/// The space is parametrized exactly, each parameter direction is
/// forward-solved past `n` into a buffer zone, and exact column reduction on
/// a block of trailing values produces combinations that vanish on
/// successively many trailing slots. A combination vanishing on `k` trailing
/// slots carries no component of the `k` fastest-growing solution classes
/// beyond truncation error, so the returned members expose the slower
/// classes (in particular the sub-unit-order solutions) instead of being
/// swamped by the dominant ones.
pub fn solution_basis(
    rs: &RecurrenceSystem,
    profile: &GrowthProfile,
    n: usize,
    precision_bits: u32,
) -> Result<SolutionBasis, RecurrenceError> {
    let required = 4 * (rs.m + rs.max_degree);
    if n < required {
        return Err(RecurrenceError::RequestTooSmall { required, got: n });
    }
    let param = parametrize(rs);
    let dim = param.free_count();
    if dim == 0 {
        return Ok(SolutionBasis::default());
    }

    let span = (rs.m as i64 + rs.trail_offset().max(0)) as usize;
    let slots = (dim - 1) + (2 * span + 4).min(16);
    let buffer = tail_buffer(rs, n).max(slots + 16);
    let n_sys = n.max(param.prefix_len) + buffer;

    // phase 1: tail blocks of every parameter direction
    let engine = Engine::new(rs, param.start);
    let tails: Vec<_> = (0..dim)
        .into_par_iter()
        .map(|j| engine.run_tail(&param.basis[j], n_sys, slots))
        .collect();

    // slot matrix: row 0 = topmost slot; per-column gcd reduction keeps the
    // exact elimination on numbers of ratio size rather than value size.
    // The matrix column for parameter direction j is the true solution
    // scaled by d0_j / gcd_j, so that factor multiplies the combination
    // coefficients again when the members are re-run below.
    let mut mat = vec![vec![ComplexRational::zero(); dim]; slots];
    let mut col_scale = Vec::with_capacity(dim);
    for (j, tail) in tails.iter().enumerate() {
        let mut col_gcd = BigInt::zero();
        for g in &tail.g {
            col_gcd = num_integer::Integer::gcd(&col_gcd, &g.0);
            col_gcd = num_integer::Integer::gcd(&col_gcd, &g.1);
        }
        if col_gcd.is_zero() {
            col_gcd = BigInt::one();
        }
        for r in 0..slots {
            let g = &tail.g[slots - 1 - r]; // reverse: top slot first
            if g_is_zero(g) {
                continue;
            }
            mat[r][j] = ComplexRational::new(
                Rational::from_integer(&g.0 / &col_gcd),
                Rational::from_integer(&g.1 / &col_gcd),
            );
        }
        col_scale.push(Rational::new(tail.d0.clone(), col_gcd));
    }
    let (combos, _placed) = linalg::tail_flag(mat, dim);

    // phase 2: rerun each combination exactly up to n and classify
    let run_to = n.max(param.prefix_len.saturating_sub(1));
    let members: Vec<BasisMember> = combos
        .into_par_iter()
        .map(|combo| {
            // seed vector carrying the per-column scale used in phase 1
            let seeds: Vec<ComplexRational> = combo
                .iter()
                .zip(col_scale.iter())
                .map(|(c, s)| c.clone() * ComplexRational::new(s.clone(), Rational::zero()))
                .collect();
            let prefix = param.prefix_for(&seeds);
            let run = engine.run_full(&prefix, run_to);
            let seq = run.to_sequence(precision_bits, Provenance::Recurrence).truncated(n);
            let seq = normalize_first_nonzero(seq);
            classify_member(seq, profile)
        })
        .collect();

    let basis = SolutionBasis { members };
    for member in &basis.members {
        check_precision(rs, &member.seq, precision_bits)?;
    }
    Ok(basis)
}

/// Buffer length past the output range, sized from the minimal slope gap of
/// the full polygon so that tail truncation error stays far below the output
/// precision.
fn tail_buffer(rs: &RecurrenceSystem, n: usize) -> usize {
    let m = rs.m as i64;
    let mut points = Vec::new();
    for i in -m..=rs.trail_offset() {
        if let Some(deg) = rs.q(i).degree() {
            points.push((m + i, deg as i64));
        }
    }
    let mut slopes = Vec::new();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    for w in hull.windows(2) {
        slopes.push((w[0].1 - w[1].1) as f64 / (w[1].0 - w[0].0) as f64);
    }
    let mut gap = f64::INFINITY;
    for w in slopes.windows(2) {
        let g = (w[1] - w[0]).abs();
        if g > 1e-9 {
            gap = gap.min(g);
        }
    }
    if !gap.is_finite() {
        return 64;
    }
    let b = (280.0 / (gap * (n.max(4) as f64).log2())).ceil() as usize;
    b.clamp(64, 384)
}

fn normalize_first_nonzero(mut seq: CoefficientSequence) -> CoefficientSequence {
    let prec = seq.precision_bits;
    let Some(first) = seq.values.iter().position(|v| !v.is_zero()) else {
        return seq;
    };
    let pivot = seq.values[first].clone();
    for v in seq.values.iter_mut() {
        if !v.is_zero() {
            *v = v.div(&pivot, prec);
        }
    }
    seq
}

fn classify_member(seq: CoefficientSequence, profile: &GrowthProfile) -> BasisMember {
    match growth::chi_estimate(&seq) {
        Err(_) => BasisMember {
            seq,
            chi_hat: None,
            class: SolutionClass::Other,
        },
        Ok(chi) if chi.all_zero_tail => {
            // terminating sequence
            BasisMember {
                seq,
                chi_hat: None,
                class: SolutionClass::Polynomial,
            }
        }
        Ok(chi) => {
            let chi_hat = chi.chi_hat;
            let mut best: Option<(usize, f64)> = None;
            for (idx, entry) in profile.entries.iter().enumerate() {
                let rho = entry.rho.to_f64().unwrap_or(f64::NAN);
                let dev = (chi_hat - rho).abs();
                if best.map_or(true, |(_, b)| dev < b) {
                    best = Some((idx, dev));
                }
            }
            let class = match best {
                Some((idx, dev)) if dev <= CHI_CLASS_TOL && chi_hat < 1.0 - CHI_CLASS_TOL => {
                    SolutionClass::Order { segment: idx + 1 }
                }
                _ => SolutionClass::Other,
            };
            BasisMember {
                seq,
                chi_hat: Some(chi_hat),
                class,
            }
        }
    }
}

/// Exact check helper exposed for tests: value of the combination
/// `Σ_i a_{n−i} Q(n,i)` over exact sequence values.
pub fn exact_row_value(
    rs: &RecurrenceSystem,
    values: &[ComplexRational],
    n: i64,
) -> ComplexRational {
    let mut acc = ComplexRational::zero();
    for i in -(rs.m as i64)..=rs.trail_offset() {
        let q = rs.q(i);
        if q.is_zero() {
            continue;
        }
        let idx = n - i;
        if idx < 0 || idx as usize >= values.len() {
            continue;
        }
        acc = acc + q.eval_int(n) * values[idx as usize].clone();
    }
    acc
}
