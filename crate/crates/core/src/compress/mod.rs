//! Computable compressors standing in for program-size complexity.
//!
//! Every compressor reports a size in bits. The internal codecs are also
//! lossless and expose their bit streams; external tools only report size.

mod external;
pub mod huff0;
pub mod lz77;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::BitString;
pub use external::{external_size, ExternalCodec, ExternalSpec, ProcessSlots};
pub use huff0::{huff0_compress, huff0_decompress, Huff0};
pub use lz77::{lz77_compress, lz77_decompress, Lz77};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("{codec}: corrupt stream: {detail}")]
    Corrupt { codec: &'static str, detail: String },
    #[error("{codec}: input too large: {detail}")]
    InputTooLarge { codec: &'static str, detail: String },
    #[error("external compressor {codec}: {detail}")]
    External { codec: String, detail: String },
    #[error("unknown codec {0:?}")]
    UnknownCodec(String),
}

/// Compressed size in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompressedSize(pub u64);

impl CompressedSize {
    pub fn bits(self) -> u64 {
        self.0
    }
}

impl fmt::Display for CompressedSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Anything that can report the compressed size of a byte string.
pub trait Compressor: Send + Sync {
    fn name(&self) -> &str;
    fn compressed_bits(&self, data: &[u8]) -> Result<u64, CodecError>;
}

/// A lossless compressor with a bit-level stream.
pub trait Codec: Compressor {
    fn compress(&self, data: &[u8]) -> Result<BitString, CodecError>;
    fn decompress(&self, bits: &BitString) -> Result<Vec<u8>, CodecError>;
}

/// Stores bytes verbatim; compresses nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Compressor for Identity {
    fn name(&self) -> &str {
        "identity"
    }

    fn compressed_bits(&self, data: &[u8]) -> Result<u64, CodecError> {
        Ok(8 * data.len() as u64)
    }
}

impl Codec for Identity {
    fn compress(&self, data: &[u8]) -> Result<BitString, CodecError> {
        Ok(BitString::from_bytes(data))
    }

    fn decompress(&self, bits: &BitString) -> Result<Vec<u8>, CodecError> {
        if bits.len() % 8 != 0 {
            return Err(CodecError::Corrupt {
                codec: "identity",
                detail: format!("{} bits is not a whole number of bytes", bits.len()),
            });
        }
        Ok(bits.to_bytes())
    }
}

pub const BUILTIN_CODECS: [&str; 3] = ["huff0", "lz77", "identity"];

/// Looks up an internal codec by name.
pub fn builtin(name: &str) -> Result<Arc<dyn Compressor>, CodecError> {
    match name {
        "huff0" => Ok(Arc::new(Huff0)),
        "lz77" => Ok(Arc::new(Lz77)),
        "identity" => Ok(Arc::new(Identity)),
        other => Err(CodecError::UnknownCodec(other.to_string())),
    }
}

/// Size of `data` under `codec`, uncached.
pub fn c_len(codec: &dyn Compressor, data: &[u8]) -> Result<CompressedSize, CodecError> {
    codec.compressed_bits(data).map(CompressedSize)
}

/// Session-wide memo of compressed sizes keyed by codec name and the
/// SHA-256 of the input.
#[derive(Debug, Default)]
pub struct SizeCache {
    sizes: RwLock<HashMap<(String, [u8; 32]), u64>>,
}

impl SizeCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn c_len(&self, codec: &dyn Compressor, data: &[u8]) -> Result<CompressedSize, CodecError> {
        let key = (codec.name().to_string(), Sha256::digest(data).into());
        if let Some(&bits) = self.sizes.read().expect("cache lock poisoned").get(&key) {
            return Ok(CompressedSize(bits));
        }
        let bits = codec.compressed_bits(data)?;
        self.sizes
            .write()
            .expect("cache lock poisoned")
            .insert(key, bits);
        Ok(CompressedSize(bits))
    }

    pub fn len(&self) -> usize {
        self.sizes.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
