//! Normalized compression distance and its diagnostics.
//!
//! With `C` a compressor, conditional size is approximated by
//! `C(y|x) = C(xy) - C(x)` and
//! `NCD(x, y) = (C(xy) - min(C(x), C(y))) / max(C(x), C(y))`.
//! The ideal information distances built on Kolmogorov complexity are not
//! computable, so nothing here tries to compute them.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::compress::{CodecError, Compressor, SizeCache};
pub use crate::corpus::CorpusItem;
use crate::matrix::{DistanceMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NcdError {
    #[error("distance is undefined when both inputs compress to nothing")]
    Undefined,
    #[error("a distance matrix needs at least two items, got {0}")]
    TooFewItems(usize),
    #[error("pair ({0}, {1}): {2}")]
    Pair(String, String, Box<NcdError>),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `C(xy) - C(x)`, signed.
pub fn cond_c(cache: &SizeCache, codec: &dyn Compressor, y: &[u8], x: &[u8]) -> Result<i64, CodecError> {
    let xy = [x, y].concat();
    let cxy = cache.c_len(codec, &xy)?.bits() as i64;
    let cx = cache.c_len(codec, x)?.bits() as i64;
    Ok(cxy - cx)
}

/// The NCD formula on precomputed sizes.
pub fn ncd_from_sizes(cx: u64, cy: u64, cxy: u64) -> Result<f64, NcdError> {
    let max = cx.max(cy);
    if max == 0 {
        return Err(NcdError::Undefined);
    }
    Ok((cxy as f64 - cx.min(cy) as f64) / max as f64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NcdOptions {
    /// Restrict results to `[0, 1]`.
    pub clamp: bool,
}

pub fn ncd(
    cache: &SizeCache,
    codec: &dyn Compressor,
    x: &[u8],
    y: &[u8],
    opts: NcdOptions,
) -> Result<f64, NcdError> {
    if x.is_empty() && y.is_empty() {
        return Err(NcdError::Undefined);
    }
    let cx = cache.c_len(codec, x)?.bits();
    let cy = cache.c_len(codec, y)?.bits();
    let cxy = cache.c_len(codec, &[x, y].concat())?.bits();
    let d = ncd_from_sizes(cx, cy, cxy)?;
    Ok(if opts.clamp { d.clamp(0.0, 1.0) } else { d })
}

/// Ordered-pair NCD: entry `(i, j)` is `ncd(x_i, x_j)` using `C(x_i x_j)`.
/// Entries may be negative and the table need not be symmetric.
pub fn raw_distance_matrix(
    cache: &SizeCache,
    codec: &dyn Compressor,
    corpus: &[CorpusItem],
    opts: NcdOptions,
) -> Result<DistanceMatrix, NcdError> {
    if corpus.len() < 2 {
        return Err(NcdError::TooFewItems(corpus.len()));
    }
    let n = corpus.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let values: Vec<f64> = cells
        .par_iter()
        .map(|&(i, j)| {
            ncd(cache, codec, &corpus[i].payload, &corpus[j].payload, opts).map_err(|e| {
                NcdError::Pair(corpus[i].name.clone(), corpus[j].name.clone(), Box::new(e))
            })
        })
        .collect::<Result<_, _>>()?;
    let rows = values.chunks(n).map(<[f64]>::to_vec).collect();
    let names = corpus.iter().map(|c| c.name.clone()).collect();
    Ok(DistanceMatrix::new_raw(names, rows)?)
}

/// Symmetric NCD table: off-diagonal entries are the larger of the two
/// orders, the diagonal is `ncd(x, x)` as computed.
pub fn distance_matrix(
    cache: &SizeCache,
    codec: &dyn Compressor,
    corpus: &[CorpusItem],
    opts: NcdOptions,
) -> Result<DistanceMatrix, NcdError> {
    let raw = raw_distance_matrix(cache, codec, corpus, opts)?;
    Ok(symmetrize_max(&raw))
}

pub fn symmetrize_max(raw: &DistanceMatrix) -> DistanceMatrix {
    let n = raw.len();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { raw.get(i, i) } else { raw.get(i, j).max(raw.get(j, i)) })
                .collect()
        })
        .collect();
    DistanceMatrix::new_raw(raw.items().to_vec(), rows).expect("same shape as input")
}

/// How far a table is from satisfying the metric axioms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub items: usize,
    pub max_asymmetry: f64,
    pub max_self_distance: f64,
    pub triples_checked: u64,
    pub triangle_violations: u64,
    pub max_triangle_excess: f64,
    pub negative_entries: u64,
}

/// Triangle violations are counted over ordered triples of distinct items
/// where `d(i,k) > d(i,j) + d(j,k)`.
pub fn metric_report(m: &DistanceMatrix) -> MetricReport {
    let n = m.len();
    let mut report = MetricReport {
        items: n,
        max_asymmetry: 0.0,
        max_self_distance: 0.0,
        triples_checked: 0,
        triangle_violations: 0,
        max_triangle_excess: 0.0,
        negative_entries: 0,
    };
    for i in 0..n {
        report.max_self_distance = report.max_self_distance.max(m.get(i, i));
        for j in 0..n {
            if m.get(i, j) < 0.0 {
                report.negative_entries += 1;
            }
            let asym = (m.get(i, j) - m.get(j, i)).abs();
            if asym.is_finite() {
                report.max_asymmetry = report.max_asymmetry.max(asym);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                report.triples_checked += 1;
                let excess = m.get(i, k) - (m.get(i, j) + m.get(j, k));
                if excess > 0.0 {
                    report.triangle_violations += 1;
                    report.max_triangle_excess = report.max_triangle_excess.max(excess);
                }
            }
        }
    }
    report
}
