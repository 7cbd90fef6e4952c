//! Prefix and enumerative coding, compressor-based complexity estimates,
//! compression and co-occurrence distances, clustering, and finite
//! randomness tests.
//!
//! Kolmogorov complexity itself is not computable. Here it is approached
//! from two sides: real compressors give computable upper estimates
//! ([`compress`]), and a deliberately tiny two-mode decoder ([`toyk`]) has a
//! program-size complexity that can be found by exhaustive search.

pub mod bits;
pub mod cluster;
pub mod coding;
pub mod compress;
pub mod corpus;
pub mod entropy;
pub mod matrix;
pub mod ncd;
pub mod ngd;
pub mod randomness;
pub mod toyk;

pub use bits::{BitReader, BitString};
pub use matrix::DistanceMatrix;
