use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use super::CodingError;
use crate::bits::BitString;

/// Symbol-to-codeword table whose codewords are mutually prefix-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCode<S> {
    alphabet: Vec<S>,
    codewords: Vec<BitString>,
    trie: Vec<TrieNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct TrieNode {
    child: [Option<u32>; 2],
    symbol: Option<u32>,
}

impl<S: Ord + Clone> PrefixCode<S> {
    /// Builds a code, rejecting duplicate symbols, empty codewords and
    /// any codeword that is a prefix of another.
    pub fn new(alphabet: Vec<S>, codewords: Vec<BitString>) -> Result<Self, CodingError> {
        if alphabet.is_empty() {
            return Err(CodingError::EmptyAlphabet);
        }
        if alphabet.len() != codewords.len() {
            return Err(CodingError::ShapeMismatch {
                symbols: alphabet.len(),
                codewords: codewords.len(),
            });
        }
        let mut seen = alphabet.clone();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(CodingError::DuplicateSymbol);
        }
        let mut trie = vec![TrieNode::default()];
        for (idx, word) in codewords.iter().enumerate() {
            if word.is_empty() {
                return Err(CodingError::EmptyCodeword(idx));
            }
            let mut node = 0usize;
            for &bit in word.bits() {
                if trie[node].symbol.is_some() {
                    return Err(CodingError::NotPrefixFree(idx));
                }
                let next = match trie[node].child[usize::from(bit)] {
                    Some(n) => n as usize,
                    None => {
                        trie.push(TrieNode::default());
                        let n = trie.len() - 1;
                        trie[node].child[usize::from(bit)] = Some(n as u32);
                        n
                    }
                };
                node = next;
            }
            if trie[node].symbol.is_some() || trie[node].child != [None, None] {
                return Err(CodingError::NotPrefixFree(idx));
            }
            trie[node].symbol = Some(idx as u32);
        }
        Ok(Self {
            alphabet,
            codewords,
            trie,
        })
    }

    pub fn alphabet(&self) -> &[S] {
        &self.alphabet
    }

    pub fn codewords(&self) -> &[BitString] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn codeword(&self, symbol: &S) -> Option<&BitString> {
        self.alphabet
            .iter()
            .position(|s| s == symbol)
            .map(|i| &self.codewords[i])
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.codewords.iter().map(BitString::len).collect()
    }

    /// Concatenation of the codewords of `word`.
    pub fn encode(&self, word: &[S]) -> Result<BitString, CodingError> {
        let index: BTreeMap<&S, &BitString> =
            self.alphabet.iter().zip(&self.codewords).collect();
        let mut out = BitString::new();
        for (pos, sym) in word.iter().enumerate() {
            let cw = index.get(sym).ok_or(CodingError::AlphabetMismatch(pos))?;
            out.extend_from(cw);
        }
        Ok(out)
    }

    /// Left-to-right greedy prefix matching.
    pub fn decode(&self, bits: &BitString) -> Result<Vec<S>, CodingError> {
        let mut out = Vec::new();
        let mut node = 0usize;
        let mut start = 0usize;
        for (i, &bit) in bits.bits().iter().enumerate() {
            match self.trie[node].child[usize::from(bit)] {
                Some(n) => node = n as usize,
                None => return Err(CodingError::TruncatedStream(start)),
            }
            if let Some(sym) = self.trie[node].symbol {
                out.push(self.alphabet[sym as usize].clone());
                node = 0;
                start = i + 1;
            }
        }
        if node != 0 {
            return Err(CodingError::TruncatedStream(start));
        }
        Ok(out)
    }
}

impl<S: Ord + Clone + Display> PrefixCode<S> {
    /// `{symbol: codeword}` as a JSON object.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .alphabet
            .iter()
            .zip(&self.codewords)
            .map(|(s, w)| (s.to_string(), serde_json::Value::String(w.to_string())))
            .collect();
        serde_json::Value::Object(map)
    }
}

impl<S: Ord + Clone + FromStr> PrefixCode<S> {
    pub fn from_json(value: &serde_json::Value) -> Result<Self, CodingError> {
        let obj = value
            .as_object()
            .ok_or_else(|| CodingError::Serialization("expected a JSON object".into()))?;
        let mut alphabet = Vec::with_capacity(obj.len());
        let mut codewords = Vec::with_capacity(obj.len());
        for (k, v) in obj {
            let sym = k
                .parse()
                .map_err(|_| CodingError::Serialization(format!("bad symbol {k:?}")))?;
            let word = v
                .as_str()
                .ok_or_else(|| CodingError::Serialization(format!("codeword for {k:?} is not text")))?
                .parse()
                .map_err(|e| CodingError::Serialization(format!("{e}")))?;
            alphabet.push(sym);
            codewords.push(word);
        }
        Self::new(alphabet, codewords)
    }
}

/// Canonical codewords for the given lengths: sorted by (length, index),
/// each codeword is the previous one plus one, shifted to its length.
/// Caller guarantees the lengths satisfy Kraft's inequality.
pub(crate) fn canonical_codewords(lengths: &[usize]) -> Vec<BitString> {
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| (lengths[i], i));
    let mut out = vec![BitString::new(); lengths.len()];
    let mut next: u128 = 0;
    let mut prev_len = 0usize;
    for (rank, &i) in order.iter().enumerate() {
        let len = lengths[i];
        if rank > 0 {
            next += 1;
        }
        next <<= len - prev_len;
        prev_len = len;
        let mut word = BitString::with_capacity(len);
        for b in (0..len).rev() {
            word.push(b < 128 && (next >> b) & 1 == 1);
        }
        out[i] = word;
    }
    out
}
