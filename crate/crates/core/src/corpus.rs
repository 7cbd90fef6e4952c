//! Loading named payloads from disk.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// A named payload in a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    pub name: String,
    pub payload: Vec<u8>,
}

impl CorpusItem {
    pub fn new(name: impl Into<String>, payload: impl Into<Vec<u8>>) -> Self {
        Self {
            name: name.into(),
            payload: payload.into(),
        }
    }
}

/// Every regular file of `dir` with its contents, sorted by path. Errors
/// carry the offending path.
pub fn read_corpus_dir(dir: &Path) -> Result<Vec<(PathBuf, Vec<u8>)>, (PathBuf, io::Error)> {
    let entries = fs::read_dir(dir).map_err(|e| (dir.to_path_buf(), e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| (dir.to_path_buf(), e))?.path();
        if path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();
    paths
        .into_iter()
        .map(|p| match fs::read(&p) {
            Ok(bytes) => Ok((p, bytes)),
            Err(e) => Err((p, e)),
        })
        .collect()
}

/// Corpus items named by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusItem>, (PathBuf, io::Error)> {
    Ok(read_corpus_dir(dir)?
        .into_iter()
        .map(|(path, payload)| CorpusItem {
            name: path
                .file_name()
                .map_or_else(String::new, |n| n.to_string_lossy().into_owned()),
            payload,
        })
        .collect())
}
