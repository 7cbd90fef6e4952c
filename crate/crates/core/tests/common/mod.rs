//! Seeded generators and brute-force oracles shared by the integration
//! suites. Nothing here calls the code paths it is used to check.

#![allow(dead_code)]

use kolmo::ncd::CorpusItem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `len` bytes whose bits are independent coin flips with `P(1) = p`.
pub fn biased_bytes(rng: &mut ChaCha8Rng, len: usize, p: f64) -> Vec<u8> {
    (0..len)
        .map(|_| (0..8).fold(0u8, |acc, _| (acc << 1) | u8::from(rng.gen_bool(p))))
        .collect()
}

pub fn random_bytes(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.gen()).collect()
}

/// Three items from each of two biased-coin sources (`p = 0.1`, `p = 0.9`).
pub fn planted_corpus(seed: u64, len: usize) -> (Vec<CorpusItem>, Vec<String>, Vec<String>) {
    let mut r = rng(seed);
    let mut corpus = Vec::new();
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    for i in 0..3 {
        let name = format!("low{i}");
        corpus.push(CorpusItem::new(name.clone(), biased_bytes(&mut r, len, 0.1)));
        lo.push(name);
        let name = format!("high{i}");
        corpus.push(CorpusItem::new(name.clone(), biased_bytes(&mut r, len, 0.9)));
        hi.push(name);
    }
    (corpus, lo, hi)
}

/// Backtracking search for prefix-free codewords with exactly these lengths.
pub fn brute_force_prefix_code(lengths: &[usize]) -> Option<Vec<Vec<bool>>> {
    fn is_prefix(a: &[bool], b: &[bool]) -> bool {
        a.len() <= b.len() && b[..a.len()] == *a
    }
    fn go(lengths: &[usize], chosen: &mut Vec<Vec<bool>>) -> bool {
        let Some(&len) = lengths.get(chosen.len()) else {
            return true;
        };
        for v in 0..1u32 << len {
            let word: Vec<bool> = (0..len).rev().map(|i| (v >> i) & 1 == 1).collect();
            if chosen.iter().any(|c| is_prefix(c, &word) || is_prefix(&word, c)) {
                continue;
            }
            chosen.push(word);
            if go(lengths, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    go(lengths, &mut chosen).then_some(chosen)
}

/// Minimum of `Σ m_i ℓ_i` over all length vectors with `1 <= ℓ_i <= max_len`
/// satisfying Kraft's inequality.
pub fn brute_force_optimal_cost(counts: &[u64], max_len: usize) -> u64 {
    let s = counts.len();
    let mut best = u64::MAX;
    let mut lengths = vec![1usize; s];
    loop {
        let kraft: u64 = lengths.iter().map(|&l| 1u64 << (max_len - l)).sum();
        if kraft <= 1u64 << max_len {
            let cost: u64 = counts.iter().zip(&lengths).map(|(&m, &l)| m * l as u64).sum();
            best = best.min(cost);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == s {
                return best;
            }
            lengths[i] += 1;
            if lengths[i] <= max_len {
                break;
            }
            lengths[i] = 1;
            i += 1;
        }
    }
}

/// All multisets (non-decreasing sequences) of size `k` over `lo..=hi`.
pub fn multisets(k: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in lo..=hi {
        for mut rest in multisets(k - 1, first, hi) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All tuples of length `k` with entries in `lo..=hi`.
pub fn tuples(k: usize, lo: u64, hi: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (lo..=hi).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// `-Σ f log2 f` computed independently of the library.
pub fn plain_entropy(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    counts
        .iter()
        .filter(|&&m| m > 0)
        .map(|&m| {
            let f = m as f64 / n as f64;
            -f * f.log2()
        })
        .sum()
}

/// Minimal recursive-descent Newick reader: returns leaf labels in order,
/// or an error describing where the grammar broke.
pub fn parse_newick(text: &str) -> Result<Vec<String>, String> {
    struct P<'a> {
        s: &'a [u8],
        i: usize,
        leaves: Vec<String>,
    }
    impl P<'_> {
        fn peek(&self) -> Option<u8> {
            self.s.get(self.i).copied()
        }
        fn eat(&mut self, c: u8) -> Result<(), String> {
            if self.peek() == Some(c) {
                self.i += 1;
                Ok(())
            } else {
                Err(format!("expected {:?} at {}", c as char, self.i))
            }
        }
        fn subtree(&mut self) -> Result<(), String> {
            if self.peek() == Some(b'(') {
                self.i += 1;
                self.subtree()?;
                self.length()?;
                while self.peek() == Some(b',') {
                    self.i += 1;
                    self.subtree()?;
                    self.length()?;
                }
                self.eat(b')')
            } else {
                let label = self.label()?;
                self.leaves.push(label);
                Ok(())
            }
        }
        fn label(&mut self) -> Result<String, String> {
            if self.peek() == Some(b'\'') {
                self.i += 1;
                let mut out = Vec::new();
                loop {
                    match self.peek() {
                        None => return Err("unterminated quote".into()),
                        Some(b'\'') if self.s.get(self.i + 1) == Some(&b'\'') => {
                            out.push(b'\'');
                            self.i += 2;
                        }
                        Some(b'\'') => {
                            self.i += 1;
                            break;
                        }
                        Some(c) => {
                            out.push(c);
                            self.i += 1;
                        }
                    }
                }
                String::from_utf8(out).map_err(|e| e.to_string())
            } else {
                let start = self.i;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.i += 1;
                }
                if start == self.i {
                    return Err(format!("empty label at {start}"));
                }
                Ok(String::from_utf8_lossy(&self.s[start..self.i]).into_owned())
            }
        }
        fn length(&mut self) -> Result<(), String> {
            self.eat(b':')?;
            let start = self.i;
            while self.peek().is_some_and(|c| c.is_ascii_digit() || c == b'.') {
                self.i += 1;
            }
            std::str::from_utf8(&self.s[start..self.i])
                .unwrap()
                .parse::<f64>()
                .map(|_| ())
                .map_err(|_| format!("bad branch length at {start}"))
        }
    }
    let mut p = P {
        s: text.as_bytes(),
        i: 0,
        leaves: Vec::new(),
    };
    p.subtree()?;
    p.eat(b';')?;
    if p.i != text.len() {
        return Err(format!("trailing input at {}", p.i));
    }
    Ok(p.leaves)
}
