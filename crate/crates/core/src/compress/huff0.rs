//! Order-0 entropy codec: symbol census header, then a canonical Huffman
//! payload.
//!
//! Layout: `[distinct: 8][value: 8, count: 32]* [payload]`. A distinct
//! count of 0 followed by more bits means all 256 byte values occur.

use super::{Codec, CodecError, Compressor};
use crate::bits::BitString;
use crate::coding::{huffman_build, FrequencyTable};

#[derive(Debug, Clone, Copy, Default)]
pub struct Huff0;

pub const NAME: &str = "huff0";

pub fn huff0_compress(data: &[u8]) -> Result<BitString, CodecError> {
    let freqs = FrequencyTable::from_word(data);
    let mut out = BitString::new();
    out.push_uint((freqs.len() % 256) as u64, 8);
    for (&sym, count) in freqs.iter() {
        let count = u32::try_from(count).map_err(|_| CodecError::InputTooLarge {
            codec: NAME,
            detail: format!("byte {sym:#04x} occurs {count} times"),
        })?;
        out.push_uint(u64::from(sym), 8);
        out.push_uint(u64::from(count), 32);
    }
    if freqs.is_empty() {
        return Ok(out);
    }
    let code = huffman_build(&freqs).expect("nonempty source");
    let payload = code.encode(data).expect("alphabet covers input");
    out.extend_from(&payload);
    Ok(out)
}

pub fn huff0_decompress(bits: &BitString) -> Result<Vec<u8>, CodecError> {
    let corrupt = |what: &str| CodecError::Corrupt {
        codec: NAME,
        detail: what.to_string(),
    };
    let mut r = bits.reader();
    let distinct = r.read_uint(8).ok_or_else(|| corrupt("missing header"))? as usize;
    let distinct = match distinct {
        0 if r.is_exhausted() => return Ok(Vec::new()),
        0 => 256,
        d => d,
    };
    let mut freqs = FrequencyTable::new();
    let mut prev: Option<u8> = None;
    for _ in 0..distinct {
        let sym = r.read_uint(8).ok_or_else(|| corrupt("truncated symbol table"))? as u8;
        let count = r.read_uint(32).ok_or_else(|| corrupt("truncated symbol table"))?;
        if prev.is_some_and(|p| p >= sym) || count == 0 {
            return Err(corrupt("symbol table not strictly ascending or has zero count"));
        }
        prev = Some(sym);
        freqs.add(sym, count);
    }
    let code = huffman_build(&freqs).map_err(|e| corrupt(&e.to_string()))?;
    let payload = r.rest();
    let out = code.decode(&payload).map_err(|e| corrupt(&e.to_string()))?;
    if FrequencyTable::from_word(&out) != freqs {
        return Err(corrupt("payload disagrees with symbol table"));
    }
    Ok(out)
}

impl Compressor for Huff0 {
    fn name(&self) -> &str {
        NAME
    }

    fn compressed_bits(&self, data: &[u8]) -> Result<u64, CodecError> {
        Ok(huff0_compress(data)?.len() as u64)
    }
}

impl Codec for Huff0 {
    fn compress(&self, data: &[u8]) -> Result<BitString, CodecError> {
        huff0_compress(data)
    }

    fn decompress(&self, bits: &BitString) -> Result<Vec<u8>, CodecError> {
        huff0_decompress(bits)
    }
}
