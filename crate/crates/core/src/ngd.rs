//! Normalized Google distance over a local document collection.
//!
//! `NGD(x, y) = (max(log f(x), log f(y)) - log f(x,y)) / (log M - min(log f(x), log f(y)))`
//! where `f` counts documents containing every queried term and `M` is the
//! number of indexed documents. Logarithms are base 2.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::read_corpus_dir;
use crate::matrix::DistanceMatrix;

#[derive(Debug, Error)]
pub enum NgdError {
    #[error("cannot read document {path}: {source}")]
    Ingestion {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no documents to index")]
    EmptyCollection,
    #[error("term {0:?} occurs in no document")]
    UnknownTerm(String),
    #[error("need at least two known terms, got {0}")]
    TooFewTerms(usize),
    #[error("index file: {0}")]
    Format(String),
}

/// Lowercased alphanumeric runs.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Inverted index with positions, enough for phrase queries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitIndex {
    #[serde(rename = "M")]
    m: u64,
    #[serde(default)]
    documents: Vec<String>,
    postings: BTreeMap<String, BTreeSet<u32>>,
    #[serde(default)]
    positions: BTreeMap<String, BTreeMap<u32, Vec<u32>>>,
}

impl HitIndex {
    /// Indexes `(name, text)` pairs; document ids follow input order.
    pub fn build<N: AsRef<str>, T: AsRef<str>>(docs: &[(N, T)]) -> Result<Self, NgdError> {
        if docs.is_empty() {
            return Err(NgdError::EmptyCollection);
        }
        let mut postings: BTreeMap<String, BTreeSet<u32>> = BTreeMap::new();
        let mut positions: BTreeMap<String, BTreeMap<u32, Vec<u32>>> = BTreeMap::new();
        for (id, (_, text)) in docs.iter().enumerate() {
            let id = id as u32;
            for (pos, tok) in tokenize(text.as_ref()).into_iter().enumerate() {
                postings.entry(tok.clone()).or_default().insert(id);
                positions
                    .entry(tok)
                    .or_default()
                    .entry(id)
                    .or_default()
                    .push(pos as u32);
            }
        }
        Ok(Self {
            m: docs.len() as u64,
            documents: docs.iter().map(|(n, _)| n.as_ref().to_string()).collect(),
            postings,
            positions,
        })
    }

    /// Every regular file in `dir`, in file-name order.
    pub fn from_dir(dir: &Path) -> Result<Self, NgdError> {
        let docs = read_corpus_dir(dir)
            .map_err(|(path, source)| NgdError::Ingestion { path, source })?
            .into_iter()
            .map(|(path, bytes)| {
                let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
                String::from_utf8(bytes)
                    .map(|text| (name, text))
                    .map_err(|e| NgdError::Ingestion {
                        path,
                        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::build(&docs)
    }

    pub fn total_documents(&self) -> u64 {
        self.m
    }

    pub fn documents(&self) -> &[String] {
        &self.documents
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    /// Documents containing `term`; multiword terms must appear as a phrase.
    pub fn documents_with(&self, term: &str) -> BTreeSet<u32> {
        let words = tokenize(term);
        match words.as_slice() {
            [] => BTreeSet::new(),
            [w] => self.postings.get(w).cloned().unwrap_or_default(),
            [first, rest @ ..] => {
                let Some(starts) = self.positions.get(first) else {
                    return BTreeSet::new();
                };
                starts
                    .iter()
                    .filter(|(doc, pos)| {
                        pos.iter().any(|&p| {
                            rest.iter().enumerate().all(|(k, w)| {
                                self.positions
                                    .get(w)
                                    .and_then(|d| d.get(doc))
                                    .is_some_and(|ps| ps.binary_search(&(p + 1 + k as u32)).is_ok())
                            })
                        })
                    })
                    .map(|(&doc, _)| doc)
                    .collect()
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("index serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, NgdError> {
        let index: Self = serde_json::from_str(text).map_err(|e| NgdError::Format(e.to_string()))?;
        if index.m == 0 {
            return Err(NgdError::Format("M must be at least 1".into()));
        }
        for (term, docs) in &index.postings {
            if docs.is_empty() || docs.iter().any(|&d| u64::from(d) >= index.m) {
                return Err(NgdError::Format(format!("bad posting list for {term:?}")));
            }
        }
        Ok(index)
    }
}

/// Number of documents containing all `terms`.
pub fn hits(index: &HitIndex, terms: &[&str]) -> u64 {
    let mut sets = terms.iter().map(|t| index.documents_with(t));
    let Some(first) = sets.next() else { return 0 };
    sets.fold(first, |acc, s| &acc & &s).len() as u64
}

/// The NGD formula on raw counts. Empty co-occurrence gives `+inf`.
pub fn ngd_from_counts(fx: u64, fy: u64, fxy: u64, m: u64) -> f64 {
    if fxy == 0 {
        return f64::INFINITY;
    }
    let (lx, ly, lxy, lm) = (
        (fx as f64).log2(),
        (fy as f64).log2(),
        (fxy as f64).log2(),
        (m as f64).log2(),
    );
    let num = lx.max(ly) - lxy;
    let den = lm - lx.min(ly);
    if den == 0.0 {
        return if num == 0.0 { 0.0 } else { f64::INFINITY };
    }
    num / den
}

pub fn ngd(index: &HitIndex, x: &str, y: &str) -> Result<f64, NgdError> {
    let fx = hits(index, &[x]);
    if fx == 0 {
        return Err(NgdError::UnknownTerm(x.to_string()));
    }
    let fy = hits(index, &[y]);
    if fy == 0 {
        return Err(NgdError::UnknownTerm(y.to_string()));
    }
    Ok(ngd_from_counts(fx, fy, hits(index, &[x, y]), index.m))
}

/// NGD between all pairs of known terms; unknown terms are skipped and
/// listed.
#[derive(Debug, Clone, PartialEq)]
pub struct NgdMatrix {
    pub matrix: DistanceMatrix,
    pub skipped: Vec<String>,
}

pub fn ngd_matrix(index: &HitIndex, terms: &[&str]) -> Result<NgdMatrix, NgdError> {
    let (known, skipped): (Vec<&str>, Vec<&str>) = terms.iter().partition(|t| hits(index, &[t]) > 0);
    if known.len() < 2 {
        return Err(NgdError::TooFewTerms(known.len()));
    }
    let n = known.len();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let d = ngd(index, known[i], known[j])?;
            rows[i][j] = d;
            rows[j][i] = d;
        }
    }
    let matrix = DistanceMatrix::new(known.iter().map(|s| s.to_string()).collect(), rows)
        .map_err(|e| NgdError::Format(e.to_string()))?;
    Ok(NgdMatrix {
        matrix,
        skipped: skipped.iter().map(|s| s.to_string()).collect(),
    })
}
