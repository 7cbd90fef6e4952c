//! Fixed-parameter LZ77.
//!
//! Tokens: `0` + 8-bit literal, or `1` + 12-bit offset + 4-bit length.
//! Offsets 1..=4096 are stored minus one; lengths 3..=18 are stored minus
//! three. Parsing is greedy longest match; among equally long matches the
//! smallest offset wins. There is no terminator.

use super::{Codec, CodecError, Compressor};
use crate::bits::BitString;

pub const NAME: &str = "lz77";
pub const WINDOW: usize = 4096;
pub const MIN_MATCH: usize = 3;
pub const MAX_MATCH: usize = 18;
const OFFSET_BITS: usize = 12;
const LENGTH_BITS: usize = 4;
const LITERAL_TOKEN_BITS: usize = 9;
const MATCH_TOKEN_BITS: usize = 1 + OFFSET_BITS + LENGTH_BITS;

#[derive(Debug, Clone, Copy, Default)]
pub struct Lz77;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Token {
    Literal(u8),
    Match { offset: usize, length: usize },
}

/// Greedy parse of `data` into tokens.
pub fn tokenize(data: &[u8]) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < data.len() {
        let max_len = MAX_MATCH.min(data.len() - pos);
        let mut best = (0usize, 0usize);
        if max_len >= MIN_MATCH {
            for offset in 1..=WINDOW.min(pos) {
                let start = pos - offset;
                let len = (0..max_len)
                    .take_while(|&i| data[start + i] == data[pos + i])
                    .count();
                if len > best.1 {
                    best = (offset, len);
                    if len == max_len {
                        break;
                    }
                }
            }
        }
        if best.1 >= MIN_MATCH {
            tokens.push(Token::Match {
                offset: best.0,
                length: best.1,
            });
            pos += best.1;
        } else {
            tokens.push(Token::Literal(data[pos]));
            pos += 1;
        }
    }
    tokens
}

pub fn lz77_compress(data: &[u8]) -> BitString {
    let mut out = BitString::new();
    for token in tokenize(data) {
        match token {
            Token::Literal(b) => {
                out.push(false);
                out.push_uint(u64::from(b), 8);
            }
            Token::Match { offset, length } => {
                out.push(true);
                out.push_uint((offset - 1) as u64, OFFSET_BITS);
                out.push_uint((length - MIN_MATCH) as u64, LENGTH_BITS);
            }
        }
    }
    out
}

pub fn lz77_decompress(bits: &BitString) -> Result<Vec<u8>, CodecError> {
    let corrupt = |detail: String| CodecError::Corrupt {
        codec: NAME,
        detail,
    };
    let mut r = bits.reader();
    let mut out: Vec<u8> = Vec::new();
    while let Some(flag) = r.read_bit() {
        let at = r.position() - 1;
        if flag {
            let (Some(off), Some(len)) = (r.read_uint(OFFSET_BITS), r.read_uint(LENGTH_BITS)) else {
                return Err(corrupt(format!("truncated match token at bit {at}")));
            };
            let offset = off as usize + 1;
            let length = len as usize + MIN_MATCH;
            if offset > out.len() {
                return Err(corrupt(format!("offset {offset} reaches before start at bit {at}")));
            }
            let start = out.len() - offset;
            for i in 0..length {
                out.push(out[start + i]);
            }
        } else {
            let b = r
                .read_uint(8)
                .ok_or_else(|| corrupt(format!("truncated literal at bit {at}")))?;
            out.push(b as u8);
        }
    }
    Ok(out)
}

impl Compressor for Lz77 {
    fn name(&self) -> &str {
        NAME
    }

    fn compressed_bits(&self, data: &[u8]) -> Result<u64, CodecError> {
        Ok(tokenize(data)
            .iter()
            .map(|t| match t {
                Token::Literal(_) => LITERAL_TOKEN_BITS as u64,
                Token::Match { .. } => MATCH_TOKEN_BITS as u64,
            })
            .sum())
    }
}

impl Codec for Lz77 {
    fn compress(&self, data: &[u8]) -> Result<BitString, CodecError> {
        Ok(lz77_compress(data))
    }

    fn decompress(&self, bits: &BitString) -> Result<Vec<u8>, CodecError> {
        lz77_decompress(bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_only() {
        assert_eq!(lz77_compress(b"abc").len(), 27);
        assert_eq!(
            tokenize(b"abc"),
            vec![Token::Literal(b'a'), Token::Literal(b'b'), Token::Literal(b'c')]
        );
        assert!(lz77_compress(b"").is_empty());
    }

    #[test]
    fn repeated_pair() {
        let data = b"ab".repeat(32);
        let tokens = tokenize(&data);
        assert_eq!(tokens[0], Token::Literal(b'a'));
        assert_eq!(tokens[1], Token::Literal(b'b'));
        // 62 bytes left: 18 + 18 + 18 + 8, each from two back
        assert_eq!(
            &tokens[2..],
            &[
                Token::Match { offset: 2, length: 18 },
                Token::Match { offset: 2, length: 18 },
                Token::Match { offset: 2, length: 18 },
                Token::Match { offset: 2, length: 8 },
            ]
        );
        let bits = lz77_compress(&data);
        assert_eq!(bits.len(), 2 * 9 + 4 * 17);
        assert!(bits.len() < data.len() * 8);
        assert_eq!(lz77_decompress(&bits).unwrap(), data);
        assert_eq!(Lz77.compressed_bits(&data).unwrap(), bits.len() as u64);
    }

    #[test]
    fn smallest_offset_on_ties() {
        // "abc" occurs at distance 6 and 3
        let tokens = tokenize(b"abcabcabc");
        assert_eq!(tokens[3], Token::Match { offset: 3, length: 6 });
    }

    #[test]
    fn window_limit() {
        let mut data: Vec<u8> = b"xyzw".to_vec();
        data.extend((0..WINDOW as u32).map(|i| (i % 251) as u8 ^ 0x5a));
        data.extend_from_slice(b"xyzw");
        let tokens = tokenize(&data);
        // the first "xyzw" is 4100 bytes back, outside the window
        assert!(tokens
            .iter()
            .all(|t| !matches!(t, Token::Match { offset, .. } if *offset > WINDOW)));
        assert_eq!(lz77_decompress(&lz77_compress(&data)).unwrap(), data);
    }

    #[test]
    fn corrupt_streams() {
        let bad: BitString = "1000000000000000".parse().unwrap();
        assert!(lz77_decompress(&bad).is_err());
        let bad: BitString = "10000000000000000".parse().unwrap();
        assert!(lz77_decompress(&bad).is_err());
        let bad: BitString = "0101".parse().unwrap();
        assert!(lz77_decompress(&bad).is_err());
    }
}
