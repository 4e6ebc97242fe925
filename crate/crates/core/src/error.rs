use std::path::PathBuf;

use thiserror::Error;

use crate::transition::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sentence: {0}")]
    InvalidSentence(String),

    #[error("invalid mention: {0}")]
    InvalidMention(String),

    #[error("mention {0} does not belong to the sentence")]
    MentionNotInSentence(String),

    #[error("invalid transition: {0}")]
    Transition(#[from] Violation),

    #[error("sentence of {len} tokens exceeds the search limit of {max}")]
    SizeLimit { len: usize, max: usize },

    #[error("schema limitation: {0}")]
    SchemaLimitation(String),

    #[error("{0}")]
    TagParse(String),

    #[error("{path}:{line}: {message}")]
    Format {
        path: String,
        line: usize,
        message: String,
    },

    #[error("annotation references sentence ({doc_id}, {index}) that is not in the text file")]
    DanglingAnnotation { doc_id: String, index: usize },

    #[error("{path}: file is not valid UTF-8")]
    NotUtf8 { path: PathBuf },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown action `{0}`")]
    UnknownAction(String),

    #[error("sentence keys differ between gold and predicted corpora: {0}")]
    KeyMismatch(String),

    #[error("{0}")]
    Similarity(String),

    #[error("model file: {0}")]
    Model(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
