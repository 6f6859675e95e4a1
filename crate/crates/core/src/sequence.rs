//! Coefficient sequences `a_0, …, a_N` of binomial series `Σ a_n z^(n)`.

use crate::bigfloat::BigComplex;
use crate::exact::ComplexRational;

/// Where a sequence came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Generated by forward-solving the coefficient recurrence.
    Recurrence,
    /// Materialized from a closed form.
    ClosedForm,
    /// Supplied by the caller.
    User,
}

/// A finite prefix of series coefficients at a fixed working precision.
#[derive(Clone, Debug)]
pub struct CoefficientSequence {
    pub values: Vec<BigComplex>,
    pub precision_bits: u32,
    pub provenance: Provenance,
}

impl CoefficientSequence {
    pub fn new(values: Vec<BigComplex>, precision_bits: u32, provenance: Provenance) -> Self {
        assert!(!values.is_empty(), "coefficient sequence must hold a_0");
        CoefficientSequence {
            values,
            precision_bits,
            provenance,
        }
    }

    pub fn from_rationals(
        values: &[ComplexRational],
        precision_bits: u32,
        provenance: Provenance,
    ) -> Self {
        Self::new(
            values
                .iter()
                .map(|v| BigComplex::from_rational(v, precision_bits))
                .collect(),
            precision_bits,
            provenance,
        )
    }

    /// Highest stored index `N`.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, n: usize) -> &BigComplex {
        &self.values[n]
    }

    /// Keep only `a_0..a_n`.
    pub fn truncated(&self, n: usize) -> Self {
        CoefficientSequence {
            values: self.values[..=n.min(self.max_index())].to_vec(),
            precision_bits: self.precision_bits,
            provenance: self.provenance,
        }
    }

    /// Index of the last nonzero coefficient, if any.
    pub fn last_nonzero(&self) -> Option<usize> {
        self.values.iter().rposition(|v| !v.is_zero())
    }
}
