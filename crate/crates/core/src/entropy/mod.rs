//! Shannon entropy, multinomial classes and enumerative (rank) coding.

mod enumerative;

pub use enumerative::{enum_decode, enum_encode, rank, unrank, FrequencyClass};

use num_bigint::BigUint;
use thiserror::Error;

use crate::coding::CodingError;

/// Tolerance on `Σ f_i = 1`.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("probabilities must be finite, nonnegative and sum to 1 (sum was {0})")]
    InvalidDistribution(f64),
    #[error("word does not belong to the frequency class")]
    ClassMismatch,
    #[error("symbol at position {0} is not in the alphabet")]
    UnknownSymbol(usize),
    #[error("rank {rank} out of range for class of size {size}")]
    RankOutOfRange { rank: BigUint, size: BigUint },
    #[error("distributions have different supports ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Coding(#[from] CodingError),
}

/// A probability vector `f_1..f_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyDistribution {
    probabilities: Vec<f64>,
}

impl FrequencyDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self, EntropyError> {
        let sum: f64 = probabilities.iter().sum();
        let valid = probabilities.iter().all(|p| p.is_finite() && *p >= 0.0)
            && (sum - 1.0).abs() <= DISTRIBUTION_TOLERANCE;
        if !valid || probabilities.is_empty() {
            return Err(EntropyError::InvalidDistribution(sum));
        }
        Ok(Self { probabilities })
    }

    /// Empirical frequencies `m_i / n`. `None` when every count is zero.
    pub fn from_counts(counts: &[u64]) -> Option<Self> {
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return None;
        }
        Some(Self {
            probabilities: counts.iter().map(|&m| m as f64 / n as f64).collect(),
        })
    }

    pub fn uniform(s: usize) -> Self {
        Self {
            probabilities: vec![1.0 / s as f64; s],
        }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

/// `H = -Σ f_i log2 f_i` in bits per symbol, with `0 log 0 = 0`.
pub fn entropy(dist: &FrequencyDistribution) -> f64 {
    let h: f64 = dist
        .probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    // -0.0 for degenerate distributions
    h.max(0.0)
}

/// Entropy of the empirical distribution of `counts`; zero for an empty source.
pub fn entropy_of_counts(counts: &[u64]) -> f64 {
    FrequencyDistribution::from_counts(counts).map_or(0.0, |d| entropy(&d))
}

/// `-Σ p_i log2 q_i`; infinite when some `q_i = 0 < p_i`.
pub fn cross_entropy(
    p: &FrequencyDistribution,
    q: &FrequencyDistribution,
) -> Result<f64, EntropyError> {
    if p.probabilities.len() != q.probabilities.len() {
        return Err(EntropyError::LengthMismatch(
            p.probabilities.len(),
            q.probabilities.len(),
        ));
    }
    Ok(p.probabilities
        .iter()
        .zip(&q.probabilities)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| if qi == 0.0 { f64::INFINITY } else { -pi * qi.log2() })
        .sum())
}

/// `log2` of an arbitrarily large integer, accurate to f64 precision.
pub fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        let v = n.iter_u64_digits().next().unwrap_or(0);
        return (v as f64).log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&FrequencyDistribution::uniform(4)), 2.0);
        let degenerate = FrequencyDistribution::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(entropy(&degenerate), 0.0);
        let d = FrequencyDistribution::new(vec![0.5, 0.25, 0.25]).unwrap();
        assert_eq!(entropy(&d), 1.5);
        assert_eq!(entropy_of_counts(&[2, 1, 1]), 1.5);
        assert_eq!(entropy_of_counts(&[0, 0]), 0.0);
    }

    #[test]
    fn bounded_by_log_s() {
        for s in 1..10usize {
            for seed in 0..20u64 {
                let counts: Vec<u64> = (0..s as u64).map(|i| (i * 7 + seed * 13) % 11).collect();
                let h = entropy_of_counts(&counts);
                assert!(h >= 0.0 && h <= (s as f64).log2() + 1e-12);
            }
        }
    }

    #[test]
    fn invalid_distributions() {
        assert!(FrequencyDistribution::new(vec![0.5, 0.4]).is_err());
        assert!(FrequencyDistribution::new(vec![1.5, -0.5]).is_err());
        assert!(FrequencyDistribution::new(vec![f64::NAN]).is_err());
        assert!(FrequencyDistribution::new(vec![]).is_err());
        // within tolerance
        assert!(FrequencyDistribution::new(vec![0.5, 0.5 + 1e-10]).is_ok());
    }

    #[test]
    fn cross_entropy_edges() {
        let p = FrequencyDistribution::new(vec![0.5, 0.5]).unwrap();
        let q = FrequencyDistribution::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(cross_entropy(&p, &q).unwrap(), f64::INFINITY);
        assert_eq!(cross_entropy(&q, &p).unwrap(), 1.0);
        let r = FrequencyDistribution::uniform(3);
        assert!(cross_entropy(&p, &r).is_err());
    }

    #[test]
    fn big_logs() {
        assert_eq!(log2_big(&BigUint::from(1u32)), 0.0);
        assert_eq!(log2_big(&BigUint::from(1024u32)), 10.0);
        let big = BigUint::from(3u32) << 200u32;
        assert!((log2_big(&big) - (200.0 + 3f64.log2())).abs() < 1e-12);
    }
}
