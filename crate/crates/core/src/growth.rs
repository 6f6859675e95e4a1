//! Order and type estimation from coefficient sequences.
//!
//! For a binomial series `Σ a_n z^(n)` the order is
//! `χ({a_n}) = limsup n log n / (−log|a_n|)` and, at order `ρ ∈ (0,1)`, the
//! type is `τ = (1/eρ) limsup n |a_n|^{ρ/n}`.
//!
//! The limsups are approximated over the window `[N/2, N]`. The raw per-n
//! order functional converges only like `1/log n` (its finite-n value for
//! `a_n = (eρτ/n)^{n/ρ}` is `ρ·log n/(log n − log(eρτ))`), far too slow for
//! usable windows, so the order estimate extrapolates `1/χ_n`, which is
//! affine in `1/log n` for every coefficient family arising here, to
//! `1/log n → 0`. The type functional needs no such correction; its windowed
//! max is used directly, with a dyadic-window trend detector for the
//! maximum/minimum-type verdicts.
//!
//! Logarithms of coefficients are always read from the (exponent, mantissa)
//! representation; values are never squeezed through machine floats.

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::exact::Rational;
use crate::newton::{ExactType, GrowthProfile};
use crate::sequence::CoefficientSequence;

#[derive(Debug, Error)]
pub enum GrowthError {
    #[error("coefficients do not decay over the estimation window")]
    NotDecaying,
    #[error("growth profile is empty")]
    EmptyProfile,
    #[error("rho must lie strictly between 0 and 1")]
    InvalidRho,
}

/// Tolerance on `|χ̂ − ρ_j|` for a profile match.
pub const CHI_MATCH_TOL: f64 = 0.05;
/// Relative tolerance on `τ̂/L_j` for a profile match.
pub const TAU_MATCH_RELTOL: f64 = 0.10;
/// Total growth across the dyadic windows that flags an ∞/0 trend.
pub const TREND_RATIO: f64 = 1.1;

#[derive(Clone, Debug)]
pub struct ChiEstimate {
    pub chi_hat: f64,
    /// Windowed max of the raw functional `n log n/(−log|a_n|)`.
    pub raw_max: f64,
    /// Every windowed coefficient vanished (terminating sequence).
    pub all_zero_tail: bool,
    pub window: (usize, usize),
}

/// Estimate `χ({a_n})` over the window `[N/2, N]`.
pub fn chi_estimate(seq: &CoefficientSequence) -> Result<ChiEstimate, GrowthError> {
    let n_max = seq.max_index();
    let lo = (n_max / 2).max(2);
    let window = (lo, n_max);
    let mut pts: Vec<(f64, f64)> = Vec::new(); // (1/ln n, 1/chi_n)
    let mut raw_max = 0.0f64;
    for n in lo..=n_max {
        let Some(ln_a) = seq.get(n).ln_abs() else { continue };
        if ln_a >= 0.0 {
            return Err(GrowthError::NotDecaying);
        }
        let nf = n as f64;
        let chi_n = nf * nf.ln() / (-ln_a);
        raw_max = raw_max.max(chi_n);
        pts.push((1.0 / nf.ln(), 1.0 / chi_n));
    }
    if pts.is_empty() {
        return Ok(ChiEstimate {
            chi_hat: 0.0,
            raw_max: 0.0,
            all_zero_tail: true,
            window,
        });
    }
    // The limsup ignores interleaved dips (lattice-supported sequences,
    // near-cancellations, residue where exact zeros were rounded): feed only
    // points near the windowed max into the extrapolation.
    let cutoff = 1.0 / (0.85 * raw_max);
    pts.retain(|&(_, inv_chi)| inv_chi <= cutoff);
    let chi_hat = extrapolate_intercept(&pts).unwrap_or(raw_max);
    Ok(ChiEstimate {
        chi_hat,
        raw_max,
        all_zero_tail: false,
        window,
    })
}

/// Least-squares intercept of `y` against `x`, inverted: the fitted value of
/// `1/y` at `x = 0`. `None` when the fit is unusable.
fn extrapolate_intercept(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 4 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-12 {
        return None;
    }
    let intercept = (sy * sxx - sx * sxy) / det;
    if !(intercept.is_finite() && intercept > 1e-9) {
        return None;
    }
    Some(1.0 / intercept)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TypeEstimate {
    Finite(f64),
    /// The per-n trace keeps climbing across the trailing dyadic windows:
    /// maximum type.
    InfinityTrend,
    /// The trace keeps falling: minimum type.
    ZeroTrend,
}

#[derive(Clone, Debug)]
pub struct TypeReport {
    pub estimate: TypeEstimate,
    pub window: (usize, usize),
    /// `(n, n |a_n|^{ρ/n})` over the main window.
    pub trace: Vec<(usize, f64)>,
}

/// Estimate the type at order `rho` per the coefficient formula
/// `τ = (1/eρ) limsup n |a_n|^{ρ/n}`.
pub fn type_estimate(
    seq: &CoefficientSequence,
    rho: &Rational,
) -> Result<TypeReport, GrowthError> {
    let rho_f = rho.to_f64().ok_or(GrowthError::InvalidRho)?;
    if !(rho_f > 0.0 && rho_f < 1.0) {
        return Err(GrowthError::InvalidRho);
    }
    let n_max = seq.max_index();
    let lo = (n_max / 2).max(2);
    let window = (lo, n_max);

    let trace_value = |n: usize| -> Option<f64> {
        let ln_a = seq.get(n).ln_abs()?;
        let nf = n as f64;
        Some(nf * ((rho_f / nf) * ln_a).exp())
    };

    // guard: the window must decay, same as the order estimator
    let mut any = false;
    for n in lo..=n_max {
        if let Some(ln_a) = seq.get(n).ln_abs() {
            any = true;
            if ln_a >= 0.0 {
                return Err(GrowthError::NotDecaying);
            }
        }
    }
    if !any {
        return Ok(TypeReport {
            estimate: TypeEstimate::Finite(0.0),
            window,
            trace: Vec::new(),
        });
    }

    let trace: Vec<(usize, f64)> = (lo..=n_max)
        .filter_map(|n| trace_value(n).map(|t| (n, t)))
        .collect();

    // dyadic windows (N/2^{k+1}, N/2^k], k = 0..3
    let mut stats: Vec<Option<f64>> = Vec::new();
    for k in 0..4usize {
        let w_lo = (n_max >> (k + 1)).max(2);
        let w_hi = n_max >> k;
        let mut best: Option<f64> = None;
        if w_lo < w_hi {
            for n in (w_lo + 1)..=w_hi {
                if let Some(t) = trace_value(n) {
                    best = Some(best.map_or(t, |b: f64| b.max(t)));
                }
            }
        }
        stats.push(best);
    }
    if let (Some(g0), Some(g1), Some(g2), Some(g3)) = (stats[0], stats[1], stats[2], stats[3]) {
        if g0 > g1 && g1 > g2 && g2 > g3 && g0 > TREND_RATIO * g3 {
            return Ok(TypeReport {
                estimate: TypeEstimate::InfinityTrend,
                window,
                trace,
            });
        }
        if g0 < g1 && g1 < g2 && g2 < g3 && g3 > TREND_RATIO * g0 {
            return Ok(TypeReport {
                estimate: TypeEstimate::ZeroTrend,
                window,
                trace,
            });
        }
    }
    let g0 = trace.iter().map(|&(_, t)| t).fold(f64::NEG_INFINITY, f64::max);
    let tau = g0 / (std::f64::consts::E * rho_f);
    Ok(TypeReport {
        estimate: TypeEstimate::Finite(tau),
        window,
        trace,
    })
}

/// Combined order/type estimate of one sequence.
#[derive(Clone, Debug)]
pub struct GrowthEstimate {
    pub chi: ChiEstimate,
    pub tau: Option<TypeReport>,
}

/// How a sequence relates to a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchClass {
    Polynomial,
    Matched,
    Unmatched,
}

#[derive(Clone, Debug)]
pub struct MatchReport {
    pub class: MatchClass,
    pub chi: ChiEstimate,
    /// Index of the nearest profile entry.
    pub entry_index: Option<usize>,
    pub rho: Option<Rational>,
    pub type_exact: Option<ExactType>,
    pub l_value: Option<f64>,
    pub tau: Option<TypeReport>,
    pub chi_dev: Option<f64>,
    pub tau_rel_dev: Option<f64>,
}

/// Compare a sequence's estimated growth against the exact profile: nearest
/// `(ρ_j, L_j)` with deviations; a match requires `|χ̂ − ρ_j| ≤ 0.05` and
/// `|τ̂/L_j − 1| ≤ 0.10`.
pub fn profile_match(
    seq: &CoefficientSequence,
    profile: &GrowthProfile,
) -> Result<MatchReport, GrowthError> {
    if profile.is_empty() {
        return Err(GrowthError::EmptyProfile);
    }
    let chi = chi_estimate(seq)?;
    if chi.all_zero_tail {
        return Ok(MatchReport {
            class: MatchClass::Polynomial,
            chi,
            entry_index: None,
            rho: None,
            type_exact: None,
            l_value: None,
            tau: None,
            chi_dev: None,
            tau_rel_dev: None,
        });
    }
    let (idx, entry, chi_dev) = profile
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let rho = e.rho.to_f64().unwrap_or(f64::NAN);
            (i, e, (chi.chi_hat - rho).abs())
        })
        .min_by(|a, b| a.2.partial_cmp(&b.2).expect("finite deviations"))
        .expect("profile nonempty");
    let tau = type_estimate(seq, &entry.rho)?;
    let l_value = entry.growth_type.eval_f64();
    let tau_rel_dev = match tau.estimate {
        TypeEstimate::Finite(t) => Some((t / l_value - 1.0).abs()),
        _ => None,
    };
    let matched =
        chi_dev <= CHI_MATCH_TOL && tau_rel_dev.is_some_and(|d| d <= TAU_MATCH_RELTOL);
    Ok(MatchReport {
        class: if matched {
            MatchClass::Matched
        } else {
            MatchClass::Unmatched
        },
        chi,
        entry_index: Some(idx),
        rho: Some(entry.rho.clone()),
        type_exact: Some(entry.growth_type.clone()),
        l_value: Some(l_value),
        tau: Some(tau),
        chi_dev: Some(chi_dev),
        tau_rel_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::{BigComplex, BigFloat};
    use crate::sequence::Provenance;

    /// `a_n = (e ρ τ / n)^{n/ρ}` materialized through log2.
    pub(crate) fn mean_type_family(rho: f64, tau: f64, n_max: usize) -> CoefficientSequence {
        let c = std::f64::consts::E * rho * tau;
        let values = (0..=n_max)
            .map(|n| {
                if n == 0 {
                    BigComplex::one()
                } else {
                    let log2 = (n as f64 / rho) * (c.log2() - (n as f64).log2());
                    BigComplex::new(BigFloat::from_log2(log2, 64), BigFloat::zero())
                }
            })
            .collect();
        CoefficientSequence::new(values, 64, Provenance::User)
    }

    #[test]
    fn chi_of_mean_type_family() {
        for (rho, tau) in [(0.5, 2.0), (0.5, 1.0), (1.0 / 3.0, 1.0), (0.75, 1.0)] {
            let seq = mean_type_family(rho, tau, 2000);
            let chi = chi_estimate(&seq).unwrap();
            assert!(
                (chi.chi_hat - rho).abs() < 0.01,
                "rho={rho} tau={tau} chi_hat={}",
                chi.chi_hat
            );
        }
    }

    #[test]
    fn tau_of_mean_type_family() {
        for (rho, tau) in [(0.5, 1.0), (0.5, 2.0), (1.0 / 3.0, 1.0), (0.75, 1.0)] {
            let seq = mean_type_family(rho, tau, 2000);
            let rho_rat = Rational::new(
                num_bigint::BigInt::from((rho * 12.0).round() as i64),
                num_bigint::BigInt::from(12),
            );
            let rep = type_estimate(&seq, &rho_rat).unwrap();
            match rep.estimate {
                TypeEstimate::Finite(t) => {
                    assert!((t / tau - 1.0).abs() < 0.05, "rho={rho} tau={tau} got {t}")
                }
                other => panic!("expected finite type, got {other:?}"),
            }
        }
    }

    #[test]
    fn terminating_sequence_has_zero_chi() {
        let mut values = vec![BigComplex::zero(); 101];
        values[0] = BigComplex::one();
        values[3] = BigComplex::one();
        let seq = CoefficientSequence::new(values, 64, Provenance::User);
        let chi = chi_estimate(&seq).unwrap();
        assert!(chi.all_zero_tail);
        assert_eq!(chi.chi_hat, 0.0);
    }

    #[test]
    fn not_decaying_detected() {
        let values = (0..=100).map(|_| BigComplex::one()).collect();
        let seq = CoefficientSequence::new(values, 64, Provenance::User);
        assert!(matches!(chi_estimate(&seq), Err(GrowthError::NotDecaying)));
    }

    #[test]
    fn maximum_type_family_trends_to_infinity() {
        // a_n = (log^ρ n / n)^{n/ρ}, ρ = 1/2, N = 4000
        let rho = 0.5;
        let n_max = 4000;
        let values: Vec<BigComplex> = (0..=n_max)
            .map(|n| {
                if n < 2 {
                    BigComplex::one()
                } else {
                    let nf = n as f64;
                    let ln2e = std::f64::consts::LOG2_E;
                    let log2 = (nf / rho) * (rho * (nf.ln().ln() * ln2e) - nf.log2());
                    BigComplex::new(BigFloat::from_log2(log2, 64), BigFloat::zero())
                }
            })
            .collect();
        let seq = CoefficientSequence::new(values, 64, Provenance::User);
        let rep = type_estimate(&seq, &crate::exact::rat(1, 2)).unwrap();
        assert_eq!(rep.estimate, TypeEstimate::InfinityTrend);
    }

    #[test]
    fn minimum_type_family_trends_to_zero() {
        // a_n = (n^{1/ρ} log n)^{−n}, ρ = 1/2, N = 4000
        let rho = 0.5f64;
        let n_max = 4000;
        let values: Vec<BigComplex> = (0..=n_max)
            .map(|n| {
                if n < 2 {
                    BigComplex::one()
                } else {
                    let nf = n as f64;
                    let ln2e = std::f64::consts::LOG2_E;
                    let log2 = -nf * (nf.log2() / rho + nf.ln().ln() * ln2e);
                    BigComplex::new(BigFloat::from_log2(log2, 64), BigFloat::zero())
                }
            })
            .collect();
        let seq = CoefficientSequence::new(values, 64, Provenance::User);
        let rep = type_estimate(&seq, &crate::exact::rat(1, 2)).unwrap();
        assert_eq!(rep.estimate, TypeEstimate::ZeroTrend);
    }

    #[test]
    fn type_is_scale_invariant_within_tolerance() {
        let seq = mean_type_family(0.5, 2.0, 1200);
        let base = match finite_type_at_half(&seq) {
            TypeEstimate::Finite(t) => t,
            other => panic!("{other:?}"),
        };
        for scale_log2 in [-3.0f64, 3.0] {
            let scaled = CoefficientSequence::new(
                seq.values
                    .iter()
                    .map(|v| v.scale(&BigFloat::from_log2(scale_log2, 64), 64))
                    .collect(),
                64,
                Provenance::User,
            );
            let t = match finite_type_at_half(&scaled) {
                TypeEstimate::Finite(t) => t,
                other => panic!("{other:?}"),
            };
            assert!((t / base - 1.0).abs() < 0.01, "scale 2^{scale_log2}: {t} vs {base}");
        }
    }

    fn finite_type_at_half(seq: &CoefficientSequence) -> TypeEstimate {
        type_estimate(seq, &crate::exact::rat(1, 2)).unwrap().estimate
    }
}
