use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use super::prefix::{canonical_codewords, PrefixCode};
use super::CodingError;

/// Symbol counts of a source.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequencyTable<S: Ord> {
    counts: BTreeMap<S, u64>,
}

impl<S: Ord + Clone> FrequencyTable<S> {
    pub fn new() -> Self {
        Self {
            counts: BTreeMap::new(),
        }
    }

    pub fn from_word(word: &[S]) -> Self {
        let mut t = Self::new();
        for s in word {
            t.add(s.clone(), 1);
        }
        t
    }

    pub fn add(&mut self, symbol: S, count: u64) {
        *self.counts.entry(symbol).or_insert(0) += count;
    }

    pub fn count(&self, symbol: &S) -> u64 {
        self.counts.get(symbol).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, u64)> {
        self.counts.iter().map(|(s, &c)| (s, c))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &S> {
        self.counts.keys()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl<S: Ord + Clone> FromIterator<(S, u64)> for FrequencyTable<S> {
    fn from_iter<I: IntoIterator<Item = (S, u64)>>(iter: I) -> Self {
        let mut t = Self::new();
        for (s, c) in iter {
            t.add(s, c);
        }
        t
    }
}

/// Optimal codeword lengths for `counts` (all positive), indexed like `counts`.
///
/// Merges the two lightest subtrees; ties go to the lower total, then to the
/// lexicographically smaller sorted list of symbol indices. A lone symbol
/// gets length 1.
pub fn huffman_lengths(counts: &[u64]) -> Vec<usize> {
    let n = counts.len();
    if n == 1 {
        return vec![1];
    }
    let mut lengths = vec![0usize; n];
    let mut heap: BinaryHeap<Reverse<(u64, Vec<usize>)>> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| Reverse((c, vec![i])))
        .collect();
    while heap.len() > 1 {
        let Reverse((c1, s1)) = heap.pop().expect("heap has two entries");
        let Reverse((c2, s2)) = heap.pop().expect("heap has two entries");
        for &i in s1.iter().chain(&s2) {
            lengths[i] += 1;
        }
        let mut merged = s1;
        merged.extend(s2);
        merged.sort_unstable();
        heap.push(Reverse((c1 + c2, merged)));
    }
    lengths
}

/// Canonical Huffman code over the symbols with positive count.
pub fn huffman_build<S: Ord + Clone>(freqs: &FrequencyTable<S>) -> Result<PrefixCode<S>, CodingError> {
    let (alphabet, counts): (Vec<S>, Vec<u64>) = freqs
        .iter()
        .filter(|(_, c)| *c > 0)
        .map(|(s, c)| (s.clone(), c))
        .unzip();
    if alphabet.is_empty() {
        return Err(CodingError::EmptySource);
    }
    let lengths = huffman_lengths(&counts);
    PrefixCode::new(alphabet, canonical_codewords(&lengths))
}
