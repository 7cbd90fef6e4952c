use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use super::prefix::{canonical_codewords, PrefixCode};
use super::CodingError;

/// Outcome of asking for a prefix code with prescribed codeword lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KraftOutcome {
    /// Canonical code; symbol `i` carries the `i`-th requested length.
    Code(PrefixCode<usize>),
    /// `Σ 2^-ℓ` exceeds one, so no prefix code has these lengths.
    Violation { kraft_sum: BigRational },
}

impl KraftOutcome {
    pub fn code(&self) -> Option<&PrefixCode<usize>> {
        match self {
            KraftOutcome::Code(c) => Some(c),
            KraftOutcome::Violation { .. } => None,
        }
    }
}

/// Exact `Σ 2^-ℓ_i`.
pub fn kraft_sum(lengths: &[usize]) -> BigRational {
    let max = lengths.iter().copied().max().unwrap_or(0);
    let numer: BigUint = lengths
        .iter()
        .map(|&l| BigUint::one() << (max - l))
        .sum();
    BigRational::new(numer.into(), (BigUint::one() << max).into())
}

pub fn kraft_construct(lengths: &[usize]) -> Result<KraftOutcome, CodingError> {
    if lengths.is_empty() {
        return Err(CodingError::EmptyAlphabet);
    }
    if let Some(i) = lengths.iter().position(|&l| l == 0) {
        return Err(CodingError::EmptyCodeword(i));
    }
    let sum = kraft_sum(lengths);
    if sum > BigRational::one() {
        return Ok(KraftOutcome::Violation { kraft_sum: sum });
    }
    let words = canonical_codewords(lengths);
    let code = PrefixCode::new((0..lengths.len()).collect(), words)?;
    Ok(KraftOutcome::Code(code))
}
