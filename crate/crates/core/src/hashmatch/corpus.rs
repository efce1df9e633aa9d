use std::collections::HashSet;
use std::fs;
use std::path::Path;

use super::PatternSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub bytes: Vec<u8>,
}

/// The M long strings. Ids are unique; the list is never empty, though
/// individual documents may be.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        if documents.is_empty() {
            return Err(Error::Input("corpus has no documents".into()));
        }
        let mut seen = HashSet::new();
        for d in &documents {
            if !seen.insert(d.id.as_str()) {
                return Err(Error::Input(format!("duplicate document id {:?}", d.id)));
            }
        }
        Ok(Corpus { documents })
    }

    /// Documents named "0", "1", ... in order.
    pub fn from_texts(texts: Vec<Vec<u8>>) -> Result<Self> {
        Self::new(
            texts
                .into_iter()
                .enumerate()
                .map(|(i, bytes)| Document {
                    id: i.to_string(),
                    bytes,
                })
                .collect(),
        )
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn max_document_len(&self) -> usize {
        self.documents
            .iter()
            .map(|d| d.bytes.len())
            .max()
            .unwrap_or(0)
    }

    /// Loads a corpus from disk.
    ///
    /// A directory yields one document per regular file (sorted by file name,
    /// id = file name). A file yields one document per line, with ids
    /// `line-1`, `line-2`, ...; a trailing `\r` is stripped from each line.
    pub fn load(path: &Path) -> Result<Self> {
        let meta = fs::metadata(path).map_err(|e| io_err(path, e))?;
        if meta.is_dir() {
            let mut docs = Vec::new();
            for entry in fs::read_dir(path).map_err(|e| io_err(path, e))? {
                let entry = entry.map_err(|e| io_err(path, e))?;
                let p = entry.path();
                if !p.is_file() {
                    continue;
                }
                let id = entry.file_name().to_string_lossy().into_owned();
                let bytes = fs::read(&p).map_err(|e| io_err(&p, e))?;
                docs.push(Document { id, bytes });
            }
            docs.sort_by(|a, b| a.id.cmp(&b.id));
            Self::new(docs)
        } else {
            let data = fs::read(path).map_err(|e| io_err(path, e))?;
            let docs = split_lines(&data)
                .enumerate()
                .map(|(i, line)| Document {
                    id: format!("line-{}", i + 1),
                    bytes: line.to_vec(),
                })
                .collect();
            Self::new(docs)
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Input(format!("{}: {e}", path.display()))
}

fn split_lines(data: &[u8]) -> impl Iterator<Item = &[u8]> {
    let body = data.strip_suffix(b"\n").unwrap_or(data);
    let empty = body.is_empty() && data.is_empty();
    body.split(|&b| b == b'\n')
        .filter(move |_| !empty)
        .map(|l| l.strip_suffix(b"\r").unwrap_or(l))
}

/// Decodes `\xNN` and `\\` escapes; any other byte passes through.
pub fn parse_escaped(s: &str) -> Result<Vec<u8>> {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'\\' {
            out.push(bytes[i]);
            i += 1;
            continue;
        }
        match bytes.get(i + 1) {
            Some(b'\\') => {
                out.push(b'\\');
                i += 2;
            }
            Some(b'x') => {
                let hex = bytes
                    .get(i + 2..i + 4)
                    .and_then(|h| std::str::from_utf8(h).ok())
                    .and_then(|h| u8::from_str_radix(h, 16).ok())
                    .ok_or_else(|| Error::Input(format!("bad \\x escape in {s:?}")))?;
                out.push(hex);
                i += 4;
            }
            _ => return Err(Error::Input(format!("unknown escape in {s:?}"))),
        }
    }
    Ok(out)
}

impl PatternSet {
    /// One pattern per line with `\xNN` escapes; blank lines are skipped.
    pub fn load(path: &Path) -> Result<Self> {
        let data = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let patterns = data
            .lines()
            .filter(|l| !l.is_empty())
            .map(parse_escaped)
            .collect::<Result<Vec<_>>>()?;
        PatternSet::new(patterns)
    }
}
