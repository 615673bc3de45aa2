use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library. CLI exit codes map `Usage` to 2 and the
/// input/format variants to 3; validation and alert failures exit 1.
#[derive(Debug, Error)]
pub enum SfrError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config error in {path} ({key}): {message}")]
    Config {
        path: String,
        key: String,
        message: String,
    },

    #[error("invalid code point range {start:#06X}-{end:#06X}: {message}")]
    InvalidRange { start: u32, end: u32, message: String },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}: invalid UTF-8 at byte offset {offset}")]
    Encoding { path: String, offset: usize },

    #[error("unknown language '{language}'; known: {known}")]
    UnknownLanguage { language: String, known: String },

    #[error("utterance '{id}': reference transcription missing")]
    MissingReference { id: String },

    #[error("utterance '{id}': reference is empty after normalization, WER/CER undefined")]
    EmptyReference { id: String },

    #[error("duplicate matrix cell for ({model}, {language})")]
    DuplicateCell { model: String, language: String },

    #[error("matrix contains no evaluated cells")]
    EmptyMatrix,

    #[error("utterance '{id}' has no group assignment")]
    UngroupedUtterance { id: String },

    #[error("model '{model}' has no family assignment")]
    UnmappedModel { model: String },

    #[error("wilson interval undefined for n = 0")]
    EmptySample,

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, SfrError>;
