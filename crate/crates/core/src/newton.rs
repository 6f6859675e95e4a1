//! Index sequence, admissible orders and exact types for a difference
//! equation, plus the convex-hull cross-check against the coefficient
//! recurrence.
//!
//! For `P_m Δ^m f + … + P_0 f = 0` with `d_j = deg P_j`, the strictly
//! decreasing index sequence `s_1 > … > s_p` selects the vertices of the
//! relevant Newton polygon. Consecutive vertices yield the admissible
//! sub-unit orders `ρ_j = 1 + (d_{s_{j+1}} − d_{s_j})/(s_j − s_{j+1})` and
//! types
//! `L_j = (1/ρ_j) |A_{s_{j+1},d_{s_{j+1}}}/A_{s_j,d_{s_j}}|^{ρ_j/Δ_j}`,
//! `Δ_j = (d_{s_{j+1}} − s_{j+1}) − (d_{s_j} − s_j)`, all kept in exact
//! radical form.

use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::exact::{ln_rational, nth_root_exact, rational_pow, Poly, Rational};
use crate::recurrence::RecurrenceSystem;

#[derive(Debug, Error)]
pub enum NewtonError {
    #[error("every coefficient polynomial is identically zero")]
    AllCoefficientsZero,
    #[error("invalid difference equation: {0}")]
    InvalidEquation(String),
}

/// The equation `P_m(z) Δ^m f(z) + … + P_1(z) Δ f(z) + P_0(z) f(z) = 0`,
/// stored as `P_0..P_m` in the monomial basis.
#[derive(Clone, Debug)]
pub struct DifferenceEquation {
    polys: Vec<Poly>,
}

impl DifferenceEquation {
    pub fn new(polys: Vec<Poly>) -> Result<Self, NewtonError> {
        if polys.len() < 2 {
            return Err(NewtonError::InvalidEquation(
                "order m must be at least 1".into(),
            ));
        }
        if polys.last().expect("nonempty").is_zero() {
            return Err(NewtonError::InvalidEquation(
                "leading coefficient P_m must not vanish identically".into(),
            ));
        }
        Ok(DifferenceEquation { polys })
    }

    pub fn m(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, j: usize) -> &Poly {
        &self.polys[j]
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// `d_j` per coefficient; `None` exactly where `P_j ≡ 0`.
    pub fn degrees(&self) -> Vec<Option<usize>> {
        self.polys.iter().map(|p| p.degree()).collect()
    }

    /// `d = max_j d_j` over the nonvanishing coefficients.
    pub fn max_degree(&self) -> usize {
        self.degrees()
            .into_iter()
            .flatten()
            .max()
            .expect("P_m is nonzero")
    }
}

/// The vertex index sequence `s_1 > … > s_p` with its degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSequence {
    /// `s_1, …, s_p`, strictly decreasing.
    pub indices: Vec<usize>,
    /// `d_{s_1}, …, d_{s_p}`, strictly decreasing.
    pub degrees: Vec<usize>,
}

impl SSequence {
    pub fn p(&self) -> usize {
        self.indices.len()
    }

    /// `d_{s_j} − s_j` for 1-based `j`; strictly increasing in `j`.
    pub fn offset(&self, j: usize) -> i64 {
        self.degrees[j - 1] as i64 - self.indices[j - 1] as i64
    }
}

/// Exact radical form of a type constant:
/// `prefactor · base_modulus_squared^exponent`.
///
/// The modulus of the leading-coefficient ratio is kept squared with a halved
/// exponent so complex coefficients never force an intermediate square root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactType {
    /// `1/ρ_j`.
    pub prefactor: Rational,
    /// `|A_{s_{j+1},d_{s_{j+1}}} / A_{s_j,d_{s_j}}|^2`.
    pub base_modulus_squared: Rational,
    /// `ρ_j / (2 Δ_j)`.
    pub exponent: Rational,
}

impl ExactType {
    /// Exact rational value when the radical simplifies, e.g.
    /// `(4/3)·(6561/65536)^{1/8} = 1`.
    pub fn as_exact_rational(&self) -> Option<Rational> {
        let u = self.exponent.numer().to_i64()?;
        let v = self.exponent.denom().to_u32()?;
        debug_assert!(u >= 0);
        let powered = rational_pow(&self.base_modulus_squared, u);
        let root = nth_root_exact(&powered, v)?;
        Some(&self.prefactor * root)
    }

    /// Numeric value of `prefactor · base^exponent`.
    pub fn eval_f64(&self) -> f64 {
        let pf = self.prefactor.to_f64().unwrap_or(f64::NAN);
        let ln_base = ln_rational(&self.base_modulus_squared);
        let e = self.exponent.to_f64().unwrap_or(f64::NAN);
        pf * (e * ln_base).exp()
    }

    /// Fixed-point decimal rendering (used in reports alongside the exact
    /// form).
    pub fn decimal_string(&self, digits: usize) -> String {
        format!("{:.*}", digits, self.eval_f64())
    }
}

/// One admissible `(ρ_j, L_j)` pair together with its vertex pair.
#[derive(Clone, Debug)]
pub struct ProfileEntry {
    pub rho: Rational,
    pub growth_type: ExactType,
    /// `(s_j, s_{j+1})`.
    pub segment: (usize, usize),
}

/// All admissible sub-unit orders and types; empty exactly when `p = 1`.
#[derive(Clone, Debug, Default)]
pub struct GrowthProfile {
    pub entries: Vec<ProfileEntry>,
}

impl GrowthProfile {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact membership test for `(ρ, σ)`; the type comparison requires the
    /// radical to simplify to a rational.
    pub fn contains_exact(&self, rho: &Rational, sigma: &Rational) -> bool {
        self.entries.iter().any(|e| {
            e.rho == *rho && e.growth_type.as_exact_rational().as_ref() == Some(sigma)
        })
    }
}

/// Compute the index sequence.
///
/// `s_1` is the least index attaining the maximal degree; thereafter
/// `s_{j+1}` is the least index attaining the maximal degree within the
/// candidate set `{k < s_j : P_k ≢ 0, d_k − k > d_{s_j} − s_j}`, and the
/// sequence stops when the candidate set is empty.
pub fn s_sequence(eq: &DifferenceEquation) -> Result<SSequence, NewtonError> {
    let degs = eq.degrees();
    let max_d = degs
        .iter()
        .flatten()
        .max()
        .copied()
        .ok_or(NewtonError::AllCoefficientsZero)?;
    let s1 = degs
        .iter()
        .position(|d| *d == Some(max_d))
        .expect("max attained");
    let mut indices = vec![s1];
    let mut degrees = vec![max_d];
    loop {
        let cur = *indices.last().expect("nonempty");
        let cur_off = degrees.last().map(|&d| d as i64 - cur as i64).expect("nonempty");
        let mut best: Option<(usize, usize)> = None;
        for k in 0..cur {
            let Some(dk) = degs[k] else { continue };
            if dk as i64 - k as i64 <= cur_off {
                continue;
            }
            let better = match best {
                None => true,
                // maximize degree, then take the least index
                Some((_, bd)) => dk > bd,
            };
            if better {
                best = Some((k, dk));
            }
        }
        match best {
            Some((k, dk)) => {
                indices.push(k);
                degrees.push(dk);
            }
            None => break,
        }
    }
    Ok(SSequence { indices, degrees })
}

/// The exact `(ρ_j, L_j)` menu over consecutive vertex pairs.
pub fn growth_profile(eq: &DifferenceEquation) -> Result<GrowthProfile, NewtonError> {
    let s = s_sequence(eq)?;
    let mut entries = Vec::new();
    for j in 0..s.p().saturating_sub(1) {
        let (sj, sj1) = (s.indices[j], s.indices[j + 1]);
        let (dj, dj1) = (s.degrees[j] as i64, s.degrees[j + 1] as i64);
        let rho = Rational::one()
            + Rational::new((dj1 - dj).into(), (sj as i64 - sj1 as i64).into());
        let delta = (dj1 - sj1 as i64) - (dj - sj as i64);
        debug_assert!(delta > 0);
        let lead_hi = eq.poly(sj).leading().expect("vertex coefficient nonzero");
        let lead_lo = eq.poly(sj1).leading().expect("vertex coefficient nonzero");
        let ratio = lead_lo.clone() / lead_hi.clone();
        let base = ratio.norm_sqr();
        debug_assert!(base.is_positive());
        let exponent = &rho / Rational::from_integer((2 * delta).into());
        entries.push(ProfileEntry {
            rho: rho.clone(),
            growth_type: ExactType {
                prefactor: rho.recip(),
                base_modulus_squared: base,
                exponent,
            },
            segment: (sj, sj1),
        });
    }
    Ok(GrowthProfile { entries })
}

/// Result of comparing the recurrence's convex hull against the index
/// sequence.
#[derive(Clone, Debug)]
pub struct HullReport {
    pub ok: bool,
    /// Upper-hull vertices of `(m+i, deg Q(n,i))` over the vertex index
    /// range, left to right.
    pub vertices: Vec<(i64, i64)>,
    pub expected_vertices: Vec<(i64, i64)>,
    /// Downward slopes of consecutive hull segments.
    pub slopes: Vec<Rational>,
    /// `1/ρ_j` per profile entry.
    pub expected_slopes: Vec<Rational>,
    pub mismatches: Vec<String>,
}

/// Check that the upward-convex hull of the points `(m+i, deg Q(n,i))` for
/// `i` in the vertex offset range has exactly the vertices
/// `(m + d_{s_j} − s_j, s_j)` and that its downward segment slopes equal
/// `1/ρ_j`.
pub fn hull_crosscheck(eq: &DifferenceEquation, rs: &RecurrenceSystem) -> HullReport {
    let s = &rs.s_seq;
    let m = eq.m() as i64;
    let lo = s.offset(1);
    let hi = s.offset(s.p());
    let mut points = Vec::new();
    for i in lo..=hi {
        let q = rs.q(i);
        if let Some(deg) = q.degree() {
            points.push((m + i, deg as i64));
        }
    }
    let vertices = upper_hull(&points);
    let expected_vertices: Vec<(i64, i64)> = (1..=s.p())
        .map(|j| (m + s.offset(j), s.indices[j - 1] as i64))
        .collect();

    let slopes: Vec<Rational> = vertices
        .windows(2)
        .map(|w| Rational::new((w[0].1 - w[1].1).into(), (w[1].0 - w[0].0).into()))
        .collect();
    let profile = growth_profile(eq).unwrap_or_default();
    let expected_slopes: Vec<Rational> =
        profile.entries.iter().map(|e| e.rho.recip()).collect();

    let mut mismatches = Vec::new();
    if vertices != expected_vertices {
        for v in &vertices {
            if !expected_vertices.contains(v) {
                mismatches.push(format!("unexpected hull vertex at ({}, {})", v.0, v.1));
            }
        }
        for v in &expected_vertices {
            if !vertices.contains(v) {
                mismatches.push(format!("missing hull vertex at ({}, {})", v.0, v.1));
            }
        }
        if mismatches.is_empty() {
            mismatches.push("hull vertex order differs".into());
        }
    }
    if slopes != expected_slopes {
        mismatches.push(format!(
            "segment slopes {:?} differ from reciprocal orders {:?}",
            slopes.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            expected_slopes
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
        ));
    }
    HullReport {
        ok: mismatches.is_empty(),
        vertices,
        expected_vertices,
        slopes,
        expected_slopes,
        mismatches,
    }
}

/// Strict upper convex hull of points with strictly increasing x.
fn upper_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            // pop collinear middles as well: vertices only
            if cross >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}
