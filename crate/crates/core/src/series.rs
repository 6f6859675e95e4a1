//! Numeric evaluation of binomial series, maximum modulus on circles, and
//! empirical growth fits `log M(r, f) ≈ L r^ρ`.

use rayon::prelude::*;
use thiserror::Error;

use crate::bigfloat::{BigComplex, BigFloat};
use crate::exact::Rational;
use crate::growth::{self, GrowthError};
use crate::sequence::CoefficientSequence;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("series truncation bound not reached; about {required} terms needed")]
    TruncationNotReached { required: usize },
    #[error("radius {radius} exceeds the term budget; about {required} terms needed")]
    BudgetExceeded { radius: f64, required: usize },
    #[error("at least 64 boundary samples are required")]
    TooFewSamples,
    #[error("at least 4 radii are required")]
    TooFewRadii,
    #[error(transparent)]
    Growth(#[from] GrowthError),
}

/// Terms needed per unit of `r^χ`; evaluation refuses radii beyond
/// `len ≥ BUDGET_FACTOR · r^χ` rather than silently truncating.
pub const BUDGET_FACTOR: f64 = 8.0;

#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: BigComplex,
    pub terms_used: usize,
    /// Upper bound on the dropped tail; zero when the series terminated
    /// within the stored range.
    pub tail_bound: BigFloat,
}

/// Evaluate `Σ a_n z^(n)` by accumulating the falling factorials
/// iteratively. Terms are summed through the first index `T` at which the
/// verified geometric tail bound `2·|term_T|` drops below
/// `2^{−prec/4}·|partial sum|`; the bound is certified on the stored range by
/// checking that every later consecutive pair of nonzero terms decays by at
/// least one half.
pub fn eval_series(seq: &CoefficientSequence, z: &BigComplex) -> Result<EvalResult, SeriesError> {
    let prec = seq.precision_bits;
    let guard = prec + 16;
    let n_max = seq.max_index();

    // terms and running partial sums, fixed order
    let mut w = BigComplex::one(); // z^(n), accumulated
    let mut partial = BigComplex::zero();
    let mut partials: Vec<BigComplex> = Vec::with_capacity(n_max + 1);
    let mut term_msq: Vec<Option<BigFloat>> = Vec::with_capacity(n_max + 1); // None = zero term
    let mut terminated = false;
    for n in 0..=n_max {
        let a = seq.get(n);
        let term = if a.is_zero() {
            BigComplex::zero()
        } else {
            a.mul(&w, guard)
        };
        if term.is_zero() {
            term_msq.push(None);
        } else {
            term_msq.push(Some(term.modulus_sq(96)));
            partial = partial.add(&term, guard);
        }
        partials.push(partial.clone());
        // advance the falling factorial; an exact zero ends the series
        let offset = BigComplex::from_f64(-(n as f64), 0.0, guard);
        w = w.mul(&z.add(&offset, guard), guard);
        if w.is_zero() {
            terminated = true;
            break;
        }
    }
    let stored = partials.len() - 1;

    let nonzero: Vec<usize> = (0..=stored).filter(|&n| term_msq[n].is_some()).collect();
    if nonzero.is_empty() {
        return Ok(EvalResult {
            value: BigComplex::zero(),
            terms_used: 0,
            tail_bound: BigFloat::zero(),
        });
    }
    let last_nz = *nonzero.last().expect("nonempty");

    // series that terminate inside the stored range are summed exactly
    let zero_margin = (n_max / 4).max(4);
    if terminated || n_max - last_nz >= zero_margin {
        return Ok(EvalResult {
            value: partials[stored].clone(),
            terms_used: last_nz + 1,
            tail_bound: BigFloat::zero(),
        });
    }

    // largest suffix on which consecutive nonzero terms at least halve
    let mut safe_from = nonzero[0];
    for pair in nonzero.windows(2) {
        let (u, v) = (pair[0], pair[1]);
        let mu = term_msq[u].as_ref().expect("nonzero");
        let mv = term_msq[v].as_ref().expect("nonzero");
        // |t_v|^2 > |t_u|^2 / 4 breaks the chain
        if mv.cmp_abs(&mu.mul_pow2(&(-2).into())) == std::cmp::Ordering::Greater {
            safe_from = v;
        }
    }

    // stop at the first safe index where the tail bound is small enough
    let threshold_log2 = -(prec as f64) / 4.0;
    for &t in nonzero.iter().filter(|&&t| t >= safe_from) {
        let msq = term_msq[t].as_ref().expect("nonzero");
        let tail_log2 = 0.5 * msq.log2_abs().expect("nonzero") + 1.0;
        let Some(sum_log2) = partials[t].log2_abs() else { continue };
        if tail_log2 < threshold_log2 + sum_log2 {
            return Ok(EvalResult {
                value: partials[t].clone(),
                terms_used: t + 1,
                tail_bound: BigFloat::from_log2(tail_log2 + 1e-9, 64),
            });
        }
    }

    let required = required_terms(seq, z.log2_abs().map_or(0.0, |l| l.exp2()));
    Err(SeriesError::TruncationNotReached { required })
}

fn required_terms(seq: &CoefficientSequence, r: f64) -> usize {
    let chi = growth::chi_estimate(seq)
        .map(|c| if c.all_zero_tail { 0.0 } else { c.chi_hat.clamp(0.0, 1.0) })
        .unwrap_or(1.0);
    let budget = (BUDGET_FACTOR * r.max(1.0).powf(chi)).ceil() as usize;
    budget.max(2 * seq.len())
}

#[derive(Clone, Copy, Debug)]
pub struct ModulusReport {
    /// `max |f|` over the sampled circle (saturates far outside f64 range).
    pub max: f64,
    /// `ln max |f|`.
    pub log_max: f64,
    /// Sample index attaining the max (first, on ties).
    pub argmax_index: usize,
}

/// Maximum of `|f|` over equally spaced points on `|z| = r`. The maximum
/// modulus lives on the boundary circle, so sampling it suffices. Sample
/// evaluations may run concurrently; the maximum is combined in fixed sample
/// order, so results are deterministic.
pub fn max_modulus(
    seq: &CoefficientSequence,
    r: f64,
    samples: usize,
) -> Result<ModulusReport, SeriesError> {
    if samples < 64 {
        return Err(SeriesError::TooFewSamples);
    }
    budget_check(seq, r)?;
    let prec = seq.precision_bits;
    let logs: Vec<Option<f64>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let z = BigComplex::from_f64(r * theta.cos(), r * theta.sin(), prec);
            eval_series(seq, &z).map(|res| res.value.log2_abs())
        })
        .collect::<Result<_, _>>()?;
    let mut best: Option<(usize, f64)> = None;
    for (k, l) in logs.iter().enumerate() {
        let Some(l) = *l else { continue };
        if best.is_none_or(|(_, b)| l > b) {
            best = Some((k, l));
        }
    }
    let (argmax_index, log2_max) = best.unwrap_or((0, f64::NEG_INFINITY));
    let log_max = log2_max * std::f64::consts::LN_2;
    Ok(ModulusReport {
        max: log_max.exp(),
        log_max,
        argmax_index,
    })
}

fn budget_check(seq: &CoefficientSequence, r: f64) -> Result<(), SeriesError> {
    let chi = growth::chi_estimate(seq)?;
    if chi.all_zero_tail {
        return Ok(()); // terminating series evaluate exactly at any radius
    }
    let required = (BUDGET_FACTOR * r.max(1.0).powf(chi.chi_hat.clamp(0.0, 1.0))).ceil() as usize;
    if seq.len() < required {
        return Err(SeriesError::BudgetExceeded {
            radius: r,
            required,
        });
    }
    Ok(())
}

/// Fitted growth law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RhoFit {
    /// Exact ρ supplied by the caller.
    Given(f64),
    /// Least-squares slope of `log log M` vs `log r`.
    Fitted(f64),
    /// `log M` did not vary (constant solution) or was not positive.
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct Refusal {
    pub radius: f64,
    pub required_terms: usize,
}

#[derive(Clone, Debug)]
pub struct EmpiricalGrowth {
    /// `(r, log M(r))` for every evaluated radius, natural log.
    pub points: Vec<(f64, f64)>,
    /// Radii refused by the term budget.
    pub refused: Vec<Refusal>,
    pub rho_fit: RhoFit,
    /// `log M(r_max) / r_max^ρ` at the largest evaluated radius.
    pub l_fit: Option<f64>,
}

/// Measure `log M` across radii and fit the growth constant.
pub fn empirical_growth(
    seq: &CoefficientSequence,
    radii: &[f64],
    rho_exact: Option<&Rational>,
    samples: usize,
) -> Result<EmpiricalGrowth, SeriesError> {
    if radii.len() < 4 {
        return Err(SeriesError::TooFewRadii);
    }
    let mut sorted = radii.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
    let mut points = Vec::new();
    let mut refused = Vec::new();
    for &r in &sorted {
        match max_modulus(seq, r, samples) {
            Ok(rep) => points.push((r, rep.log_max)),
            Err(SeriesError::BudgetExceeded { radius, required }) => refused.push(Refusal {
                radius,
                required_terms: required,
            }),
            Err(SeriesError::TruncationNotReached { required }) => refused.push(Refusal {
                radius: r,
                required_terms: required,
            }),
            Err(e) => return Err(e),
        }
    }
    let usable: Vec<(f64, f64)> = points.iter().copied().filter(|&(_, lm)| lm > 0.0).collect();
    let spread = usable
        .iter()
        .map(|&(_, lm)| lm)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    let degenerate = usable.len() < 2 || (spread.1 - spread.0) < 1e-9 * spread.1.abs().max(1.0);

    let rho_fit = match (rho_exact, degenerate) {
        (_, true) => RhoFit::Degenerate,
        (Some(r), false) => RhoFit::Given(num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)),
        (None, false) => {
            let pts: Vec<(f64, f64)> = usable
                .iter()
                .map(|&(r, lm)| (r.ln(), lm.ln()))
                .collect();
            RhoFit::Fitted(slope(&pts))
        }
    };
    let l_fit = match rho_fit {
        RhoFit::Degenerate => None,
        RhoFit::Given(rho) | RhoFit::Fitted(rho) => usable
            .last()
            .map(|&(r, lm)| lm / r.powf(rho)),
    };
    Ok(EmpiricalGrowth {
        points,
        refused,
        rho_fit,
        l_fit,
    })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::Provenance;

    #[test]
    fn eval_at_zero_returns_a0() {
        let mut values = vec![BigComplex::zero(); 64];
        values[0] = BigComplex::from_f64(2.5, 0.0, 128);
        values[1] = BigComplex::from_f64(7.0, 0.0, 128);
        let seq = CoefficientSequence::new(values, 128, Provenance::User);
        let res = eval_series(&seq, &BigComplex::zero()).unwrap();
        assert!((res.value.re.to_f64() - 2.5).abs() < 1e-12);
        assert!(res.value.im.is_zero());
        assert!(res.tail_bound.is_zero());
    }

    #[test]
    fn eval_at_small_integer_is_finite_sum() {
        // z = 3: only n ≤ 3 contribute since 3^(n) = 0 beyond
        let values: Vec<BigComplex> = (0..32)
            .map(|n| BigComplex::from_f64(1.0 / (1.0 + n as f64), 0.0, 128))
            .collect();
        let seq = CoefficientSequence::new(values, 128, Provenance::User);
        let res = eval_series(&seq, &BigComplex::from_f64(3.0, 0.0, 128)).unwrap();
        // 1 + (1/2)·3 + (1/3)·6 + (1/4)·6 = 6
        assert!((res.value.re.to_f64() - 6.0).abs() < 1e-10);
        assert!(res.tail_bound.is_zero());
    }

    #[test]
    fn constant_sequence_max_modulus() {
        let mut values = vec![BigComplex::zero(); 80];
        values[0] = BigComplex::from_f64(-3.0, 0.0, 128);
        let seq = CoefficientSequence::new(values, 128, Provenance::User);
        for r in [1.0, 10.0, 250.0] {
            let rep = max_modulus(&seq, r, 64).unwrap();
            assert!((rep.max - 3.0).abs() < 1e-9, "r={r}");
        }
    }

    #[test]
    fn sample_count_validated() {
        let mut values = vec![BigComplex::zero(); 8];
        values[0] = BigComplex::one();
        let seq = CoefficientSequence::new(values, 64, Provenance::User);
        assert!(matches!(
            max_modulus(&seq, 1.0, 32),
            Err(SeriesError::TooFewSamples)
        ));
    }

    #[test]
    fn constant_sequence_degenerate_growth() {
        let mut values = vec![BigComplex::zero(); 80];
        values[0] = BigComplex::from_f64(2.0, 0.0, 128);
        let seq = CoefficientSequence::new(values, 128, Provenance::User);
        let g = empirical_growth(&seq, &[10.0, 20.0, 40.0, 80.0], None, 64).unwrap();
        assert_eq!(g.rho_fit, RhoFit::Degenerate);
        assert!(g.l_fit.is_none());
    }
}
