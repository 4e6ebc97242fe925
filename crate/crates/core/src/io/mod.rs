//! Corpus files: CoNLL two-column tags, token-index standoff annotations,
//! plain tokenized text, and synthetic fixture generation.

mod conll;
mod fixtures;
mod standoff;

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

pub use conll::{parse_conll, read_conll, write_conll};
pub use fixtures::{generate_fixtures, FixtureSpec};
pub use standoff::{
    parse_runs, parse_standoff, read_standoff, write_standoff, write_standoff_files,
};

/// A recoverable problem met while reading; the input was repaired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub origin: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.origin, self.line, self.message)
    }
}

/// Reads a whole file as UTF-8.
pub fn read_utf8(path: &Path) -> Result<String> {
    let bytes =
        std::fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    String::from_utf8(bytes).map_err(|_| Error::NotUtf8 {
        path: path.to_path_buf(),
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// One whitespace-tokenized sentence per non-blank line.
pub fn parse_plain_sentences(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split_whitespace().map(str::to_string).collect::<Vec<_>>())
        .filter(|s| !s.is_empty())
        .collect()
}

pub fn read_plain_sentences(path: &Path) -> Result<Vec<Vec<String>>> {
    Ok(parse_plain_sentences(&read_utf8(path)?))
}

pub(crate) fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "doc".to_string())
}
