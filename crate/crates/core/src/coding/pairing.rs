//! Self-delimiting concatenation of several bit strings followed by a
//! free tail. Each part carries a header from which its length is read
//! back, so the packing is injective for a fixed number of parts.

use super::CodingError;
use crate::bits::{BitReader, BitString};

/// `1^{|u_1|} 0 u_1 ... 1^{|u_s|} 0 u_s v`; length is exactly
/// `2Σ|u_i| + |v| + s`.
pub fn pair_pack_unary(parts: &[BitString], tail: &BitString) -> BitString {
    let len = parts.iter().map(|u| 2 * u.len() + 1).sum::<usize>() + tail.len();
    let mut out = BitString::with_capacity(len);
    for u in parts {
        push_unary(&mut out, u.len());
        out.extend_from(u);
    }
    out.extend_from(tail);
    out
}

pub fn pair_unpack_unary(
    bits: &BitString,
    s: usize,
) -> Result<(Vec<BitString>, BitString), CodingError> {
    let mut r = bits.reader();
    let mut parts = Vec::with_capacity(s);
    for _ in 0..s {
        let len = read_unary(&mut r)?;
        parts.push(r.read_bits(len).ok_or(CodingError::MalformedPacking(r.position()))?);
    }
    Ok((parts, r.rest()))
}

/// Per part: `1^{|β|} 0 β u` with `β` the plain binary numeral of `|u|`
/// (empty for `|u| = 0`), then the tail. Each part costs at most
/// `|u| + 2log|u| + 3` bits.
pub fn pair_pack_len(parts: &[BitString], tail: &BitString) -> BitString {
    let mut out = BitString::new();
    for u in parts {
        let beta = BitString::binary(u.len() as u64);
        push_unary(&mut out, beta.len());
        out.extend_from(&beta);
        out.extend_from(u);
    }
    out.extend_from(tail);
    out
}

pub fn pair_unpack_len(
    bits: &BitString,
    s: usize,
) -> Result<(Vec<BitString>, BitString), CodingError> {
    let mut r = bits.reader();
    let parts = (0..s)
        .map(|_| read_len_prefixed(&mut r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((parts, r.rest()))
}

/// Reads one length-prefixed part as written by [`pair_pack_len`].
pub(crate) fn read_len_prefixed(r: &mut BitReader<'_>) -> Result<BitString, CodingError> {
    let beta_len = read_unary(r)?;
    let beta = r
        .read_bits(beta_len)
        .ok_or(CodingError::MalformedPacking(r.position()))?;
    // a canonical numeral has no leading zero
    if beta.get(0) == Some(false) {
        return Err(CodingError::MalformedPacking(r.position()));
    }
    let len = beta
        .to_uint()
        .and_then(|v| usize::try_from(v).ok())
        .ok_or(CodingError::MalformedPacking(r.position()))?;
    r.read_bits(len)
        .ok_or(CodingError::MalformedPacking(r.position()))
}

fn push_unary(out: &mut BitString, n: usize) {
    for _ in 0..n {
        out.push(true);
    }
    out.push(false);
}

fn read_unary(r: &mut BitReader<'_>) -> Result<usize, CodingError> {
    let mut n = 0;
    loop {
        match r.read_bit() {
            Some(true) => n += 1,
            Some(false) => return Ok(n),
            None => return Err(CodingError::MalformedPacking(r.position())),
        }
    }
}
