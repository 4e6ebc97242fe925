//! Per-token tag schemas and the flat-merge preprocessing.

mod bio;
mod bioext;
mod flat;

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

pub use bio::{bio_mentions, decode_bio, encode_bio};
pub use bioext::{decode_bioext, encode_bioext, AlternativeReading, AmbiguityReport};
pub use flat::flat_merge;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Schema {
    Bio,
    BioExt,
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schema::Bio => "bio",
            Schema::BioExt => "bioext",
        })
    }
}

impl FromStr for Schema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bio" => Ok(Schema::Bio),
            "bioext" | "bio-ext" | "bio-extension" => Ok(Schema::BioExt),
            _ => Err(Error::Config(format!("unknown schema `{s}`"))),
        }
    }
}

/// Tags for one sentence under a schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSequence {
    pub schema: Schema,
    pub tags: Vec<String>,
    /// Decoding these tags does not give back the encoded mentions.
    pub lossy: bool,
    /// The single category of a BIO-extension sequence; its tags carry
    /// only the position indicator.
    pub category: Option<String>,
}
