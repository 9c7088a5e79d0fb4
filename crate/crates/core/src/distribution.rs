//! Probability vectors and finite-shot histograms over measurement outcomes.
//!
//! Outcome indices follow the crate-wide bit order: bit `j` of an outcome
//! index is the result of the `j`-th measured qubit.

use crate::error::{Error, Result};

/// Tolerance on `Σp = 1` accepted by [`Distribution::new`].
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Exact probability vector over `len()` outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Wraps `probs`, rejecting negative or non-finite entries and sums
    /// further than [`SUM_TOLERANCE`] from one.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(probs, SUM_TOLERANCE)
    }

    pub fn with_tolerance(probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("entry {p} is not a probability")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Self { probs })
    }

    /// Clips negative entries to zero and rescales to unit sum.
    pub fn from_weights(mut weights: Vec<f64>) -> Result<Self> {
        for w in weights.iter_mut() {
            if !w.is_finite() {
                return Err(Error::InvalidDistribution(format!("weight {w} is not finite")));
            }
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidDistribution("weights have zero mass".into()));
        }
        weights.iter_mut().for_each(|w| *w /= sum);
        Ok(Self { probs: weights })
    }

    pub fn uniform(len: usize) -> Self {
        Self { probs: vec![1.0 / len as f64; len] }
    }

    pub fn point_mass(len: usize, outcome: usize) -> Self {
        let mut probs = vec![0.0; len];
        probs[outcome] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Index of the most likely outcome (first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.probs.iter().enumerate() {
            if *p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(i, p)| i as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.probs.iter().enumerate().map(|(i, p)| (i as f64 - m).powi(2) * p).sum()
    }
}

/// Finite-shot sample: `counts[outcome]`, with `Σ counts = shots`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsHistogram {
    counts: Vec<u64>,
    shots: u64,
}

impl CountsHistogram {
    pub fn new(counts: Vec<u64>) -> Self {
        let shots = counts.iter().sum();
        Self { counts, shots }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Normalized frequencies in canonical outcome order.
    pub fn to_distribution(&self) -> Result<Distribution> {
        if self.shots == 0 {
            return Err(Error::ZeroShots);
        }
        let n = self.shots as f64;
        Ok(Distribution { probs: self.counts.iter().map(|c| *c as f64 / n).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_vectors() {
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![1.5, -0.5]).is_err());
        assert!(Distribution::new(vec![]).is_err());
        assert!(Distribution::new(vec![0.25; 4]).is_ok());
    }

    #[test]
    fn weights_are_clipped_and_renormalized() {
        let d = Distribution::from_weights(vec![2.0, -1.0, 2.0]).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.0, 0.5]);
        assert!(Distribution::from_weights(vec![-1.0, 0.0]).is_err());
    }

    #[test]
    fn histogram_frequencies() {
        let h = CountsHistogram::new(vec![3, 1]);
        assert_eq!(h.to_distribution().unwrap().probs(), &[0.75, 0.25]);
        let h = CountsHistogram::new(vec![0, 4096, 0]);
        assert_eq!(h.to_distribution().unwrap(), Distribution::point_mass(3, 1));
        assert!(matches!(CountsHistogram::new(vec![0, 0]).to_distribution(), Err(Error::ZeroShots)));
    }
}
