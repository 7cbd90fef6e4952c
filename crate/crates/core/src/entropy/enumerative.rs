//! Lexicographic rank within a frequency class and the two-part code
//! "counts, then rank" built on it.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::EntropyError;
use crate::bits::BitString;
use crate::coding::{pair_pack_len, read_len_prefixed};

/// All words with exactly `counts[i]` occurrences of symbol `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrequencyClass {
    counts: Vec<u64>,
}

impl FrequencyClass {
    pub fn new(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    /// Class of a word given as symbol indices into an alphabet of size `s`.
    pub fn of_word(word: &[usize], s: usize) -> Result<Self, EntropyError> {
        let mut counts = vec![0u64; s];
        for (pos, &sym) in word.iter().enumerate() {
            *counts.get_mut(sym).ok_or(EntropyError::UnknownSymbol(pos))? += 1;
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `n! / (m_1! ... m_s!)`, exactly.
    pub fn size(&self) -> BigUint {
        let mut total = BigUint::one();
        let mut placed = 0u64;
        for &m in &self.counts {
            // multiply by C(placed + m, m) one factor at a time
            for j in 1..=m {
                total = total * (placed + j) / j;
            }
            placed += m;
        }
        total
    }

    /// Bits needed for a fixed-width rank: `⌈log2(size)⌉`.
    pub fn rank_width(&self) -> usize {
        let size = self.size();
        if size.is_one() {
            0
        } else {
            (size - 1u32).bits() as usize
        }
    }
}

/// Position of `word` among the words of `class` in lexicographic order.
pub fn rank(class: &FrequencyClass, word: &[usize]) -> Result<BigUint, EntropyError> {
    if FrequencyClass::of_word(word, class.counts.len()).ok().as_ref() != Some(class) {
        return Err(EntropyError::ClassMismatch);
    }
    let mut remaining = class.counts.clone();
    let mut size = class.size();
    let mut left = class.n();
    let mut r = BigUint::zero();
    for &sym in word {
        for &c in &remaining[..sym] {
            if c > 0 {
                r += &size * c / left;
            }
        }
        size = size * remaining[sym] / left;
        remaining[sym] -= 1;
        left -= 1;
    }
    Ok(r)
}

/// Inverse of [`rank`].
pub fn unrank(class: &FrequencyClass, r: &BigUint) -> Result<Vec<usize>, EntropyError> {
    let mut size = class.size();
    if r >= &size {
        return Err(EntropyError::RankOutOfRange {
            rank: r.clone(),
            size,
        });
    }
    let mut r = r.clone();
    let mut remaining = class.counts.clone();
    let mut left = class.n();
    let mut word = Vec::with_capacity(left as usize);
    while left > 0 {
        for sym in 0..remaining.len() {
            let c = remaining[sym];
            if c == 0 {
                continue;
            }
            let sub = &size * c / left;
            if r < sub {
                word.push(sym);
                size = sub;
                remaining[sym] -= 1;
                left -= 1;
                break;
            }
            r -= sub;
        }
    }
    Ok(word)
}

/// Counts as binary numerals packed with [`pair_pack_len`], followed by the
/// rank in exactly `⌈log2(class size)⌉` bits.
pub fn enum_encode<S: PartialEq>(word: &[S], alphabet: &[S]) -> Result<BitString, EntropyError> {
    let indices = word
        .iter()
        .enumerate()
        .map(|(pos, w)| {
            alphabet
                .iter()
                .position(|a| a == w)
                .ok_or(EntropyError::UnknownSymbol(pos))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let class = FrequencyClass::of_word(&indices, alphabet.len())?;
    let r = rank(&class, &indices)?;
    let numerals: Vec<BitString> = class.counts.iter().map(|&m| BitString::binary(m)).collect();
    Ok(pair_pack_len(&numerals, &fixed_width(&r, class.rank_width())))
}

pub fn enum_decode<S: Clone>(bits: &BitString, alphabet: &[S]) -> Result<Vec<S>, EntropyError> {
    let mut reader = bits.reader();
    let mut counts = Vec::with_capacity(alphabet.len());
    for _ in alphabet {
        let numeral = read_len_prefixed(&mut reader)?;
        let m = numeral
            .to_uint()
            .ok_or(crate::coding::CodingError::MalformedPacking(reader.position()))?;
        counts.push(m);
    }
    let class = FrequencyClass::new(counts);
    let width = class.rank_width();
    if reader.remaining() != width {
        return Err(crate::coding::CodingError::MalformedPacking(reader.position()).into());
    }
    let r = reader
        .rest()
        .bits()
        .iter()
        .fold(BigUint::zero(), |acc, &b| (acc << 1u32) + u32::from(b));
    let word = unrank(&class, &r).map_err(|_| {
        EntropyError::Coding(crate::coding::CodingError::MalformedPacking(bits.len()))
    })?;
    Ok(word.into_iter().map(|i| alphabet[i].clone()).collect())
}

fn fixed_width(n: &BigUint, width: usize) -> BitString {
    let mut out = BitString::with_capacity(width);
    for i in (0..width as u64).rev() {
        out.push(n.bit(i));
    }
    out
}
