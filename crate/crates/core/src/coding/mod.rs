//! Numerals, prefix codes and self-delimiting packings.

mod huffman;
mod kadic;
mod kraft;
mod pairing;
mod prefix;

pub use huffman::{huffman_build, huffman_lengths, FrequencyTable};
pub use kadic::{digits_to_string, kadic_decode, kadic_encode, parse_digits};
pub use kraft::{kraft_construct, kraft_sum, KraftOutcome};
pub use pairing::{pair_pack_len, pair_pack_unary, pair_unpack_len, pair_unpack_unary};
pub(crate) use pairing::read_len_prefixed;
pub use prefix::PrefixCode;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("radix must be at least 2, got {0}")]
    InvalidRadix(u32),
    #[error("digit {digit} at position {pos} is not in 1..={radix}")]
    MalformedNumeral { digit: u32, pos: usize, radix: u32 },
    #[error("numeral does not fit in 64 bits")]
    NumeralOverflow,
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("{symbols} symbols but {codewords} codewords")]
    ShapeMismatch { symbols: usize, codewords: usize },
    #[error("duplicate symbol in alphabet")]
    DuplicateSymbol,
    #[error("codeword {0} is empty")]
    EmptyCodeword(usize),
    #[error("codeword {0} clashes with another as a prefix")]
    NotPrefixFree(usize),
    #[error("all symbol counts are zero")]
    EmptySource,
    #[error("symbol at position {0} is not in the code's alphabet")]
    AlphabetMismatch(usize),
    #[error("bits from offset {0} match no codeword")]
    TruncatedStream(usize),
    #[error("malformed packing near bit {0}")]
    MalformedPacking(usize),
    #[error("{0}")]
    Serialization(String),
}
