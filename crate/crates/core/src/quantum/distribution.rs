use crate::error::{Error, Result};

/// Entries at or above this negative threshold are treated as rounding and
/// clamped to zero.
const CLAMP_TOL: f64 = 1e-12;
const SUM_TOL: f64 = 1e-9;

/// A probability vector over measurement outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_clamp(probs, CLAMP_TOL)
    }

    /// Outcome probabilities computed from validated operators can dip below
    /// zero by up to the operator validation tolerance.
    pub(crate) fn from_born(probs: Vec<f64>) -> Result<Self> {
        Self::with_clamp(probs, super::VALIDATION_TOL)
    }

    fn with_clamp(mut probs: Vec<f64>, clamp: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -clamp {
                return Err(Error::InvalidDistribution(format!("entry {i} is {p}")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("sums to {sum}")));
        }
        Ok(Distribution { probs })
    }

    /// Relative frequencies of integer tallies.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("no counts".into()));
        }
        Self::new(counts.iter().map(|&k| k as f64 / total as f64).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        Ok(Distribution {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// `(p, 1 − p)`
    pub fn binary(p: f64) -> Result<Self> {
        Self::new(vec![p, 1.0 - p])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    pub(crate) fn same_len(&self, other: &Distribution) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::CountMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(())
    }
}
