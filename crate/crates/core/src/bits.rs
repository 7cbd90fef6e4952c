//! Bit strings and a cursor for reading them back.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A finite sequence of bits. The textual form is a run of `0`/`1`
/// characters, first bit first.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid bit character {0:?} at offset {1}")]
pub struct ParseBitsError(pub char, pub usize);

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            bits: Vec::with_capacity(n),
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// All bits of `bytes`, most significant bit of each byte first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut out = Self::with_capacity(bytes.len() * 8);
        for &b in bytes {
            out.push_uint(u64::from(b), 8);
        }
        out
    }

    /// Packs into bytes, zero-padding the final byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)))
            })
            .collect()
    }

    /// The `width` low bits of `value`, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        let mut out = Self::with_capacity(width);
        out.push_uint(value, width);
        out
    }

    /// Plain binary numeral without leading zeros; zero maps to the empty string.
    pub fn binary(value: u64) -> Self {
        let width = (64 - value.leading_zeros()) as usize;
        Self::from_uint(value, width)
    }

    pub fn repeat_bit(bit: bool, n: usize) -> Self {
        Self { bits: vec![bit; n] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn push_uint(&mut self, value: u64, width: usize) {
        debug_assert!(width == 64 || width < 64 && value >> width == 0);
        for i in (0..width).rev() {
            self.bits.push((value >> i) & 1 == 1);
        }
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        Self::from_bits(self.bits[start..end].to_vec())
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        self.bits.starts_with(&prefix.bits)
    }

    /// Value of the whole string read as an unsigned binary numeral.
    /// `None` when it does not fit in 64 bits.
    pub fn to_uint(&self) -> Option<u64> {
        let significant = self.bits.iter().skip_while(|b| !**b).count();
        if significant > 64 {
            return None;
        }
        Some(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
    }

    /// Every bit string of length `n`, in lexicographic (numeric) order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < 64, "length {n} too large to enumerate");
        (0..1u64 << n).map(move |v| BitString::from_uint(v, n))
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { bits: self, pos: 0 }
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bits(iter.into_iter().collect())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ParseBitsError(other, i)),
            })
            .collect()
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sequential reader over a [`BitString`].
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl BitReader<'_> {
    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn is_exhausted(&self) -> bool {
        self.remaining() == 0
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        let bit = self.bits.get(self.pos)?;
        self.pos += 1;
        Some(bit)
    }

    pub fn read_uint(&mut self, width: usize) -> Option<u64> {
        if width > 64 || self.remaining() < width {
            return None;
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | u64::from(self.read_bit()?);
        }
        Some(v)
    }

    pub fn read_bits(&mut self, n: usize) -> Option<BitString> {
        if self.remaining() < n {
            return None;
        }
        let out = self.bits.slice(self.pos, self.pos + n);
        self.pos += n;
        Some(out)
    }

    /// Everything not yet read.
    pub fn rest(&mut self) -> BitString {
        let out = self.bits.slice(self.pos, self.bits.len());
        self.pos = self.bits.len();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let b: BitString = "0010110".parse().unwrap();
        assert_eq!(b.len(), 7);
        assert_eq!(b.to_string(), "0010110");
        assert_eq!("".parse::<BitString>().unwrap(), BitString::new());
        assert_eq!("01x".parse::<BitString>(), Err(ParseBitsError('x', 2)));
    }

    #[test]
    fn binary_numerals() {
        assert!(BitString::binary(0).is_empty());
        assert_eq!(BitString::binary(6).to_string(), "110");
        assert_eq!(BitString::from_uint(5, 6).to_string(), "000101");
        assert_eq!("000101".parse::<BitString>().unwrap().to_uint(), Some(5));
    }

    #[test]
    fn bytes_round_trip() {
        let b = BitString::from_bytes(&[0xA5, 0x01]);
        assert_eq!(b.to_string(), "1010010100000001");
        assert_eq!(b.to_bytes(), vec![0xA5, 0x01]);
        let partial: BitString = "101".parse().unwrap();
        assert_eq!(partial.to_bytes(), vec![0b1010_0000]);
    }

    #[test]
    fn reader_stops_at_end() {
        let b: BitString = "10110".parse().unwrap();
        let mut r = b.reader();
        assert_eq!(r.read_uint(3), Some(0b101));
        assert_eq!(r.read_uint(3), None);
        assert_eq!(r.rest().to_string(), "10");
        assert!(r.is_exhausted());
        assert_eq!(r.read_bit(), None);
    }

    #[test]
    fn enumerates_in_order() {
        let all: Vec<String> = BitString::all_of_length(2).map(|b| b.to_string()).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
        assert_eq!(BitString::all_of_length(0).count(), 1);
    }

    #[test]
    fn serde_as_text() {
        let b: BitString = "0110".parse().unwrap();
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, "\"0110\"");
        assert_eq!(serde_json::from_str::<BitString>(&json).unwrap(), b);
    }
}
