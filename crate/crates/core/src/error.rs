use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid braille dot {0}: dots are numbered 1 to 6")]
    InvalidDot(u8),

    #[error("{ch:?} (U+{cp:04X}) is not a braille pattern", ch = .0, cp = *.0 as u32)]
    NotBraille(char),

    #[error("invalid pinyin syllable {0:?}")]
    InvalidPinyin(String),

    #[error("scheme table line {line}: {message}")]
    SchemeSyntax { line: usize, message: String },

    #[error("scheme table line {line}: duplicate entry for {key:?} in [{section}]")]
    DuplicateEntry {
        section: &'static str,
        key: String,
        line: usize,
    },

    #[error("scheme is not injective: {0}")]
    Injectivity(String),

    #[error("incomplete scheme: no cell for {0}")]
    IncompleteScheme(String),

    #[error("lexicon line {line}: {message}")]
    LexiconSyntax { line: usize, message: String },

    #[error("unknown character {ch:?} at offset {offset}")]
    UnknownCharacter { ch: char, offset: usize },

    #[error("malformed braille syllable at offset {offset}: {reason}")]
    MalformedSyllable { offset: usize, reason: String },

    #[error("corpus line {line}: {message}")]
    CorpusParse { line: usize, message: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("cannot compute statistics of an empty split")]
    EmptySplit,

    #[error("no candidate characters at lattice position {position}")]
    UndecodablePosition { position: usize },

    #[error("paired inputs differ in length: {left} vs {right}")]
    PairedInput { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("language model file line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{}: digest mismatch, manifest has {expected}, file has {actual}", path.display())]
    DigestMismatch {
        path: PathBuf,
        expected: String,
        actual: String,
    },

    #[error("stage {stage} failed: {error}")]
    Stage { stage: &'static str, error: Box<Error> },

    #[error("{}: {error}", path.display())]
    File { path: PathBuf, error: io::Error },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// The innermost error, looking through stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { error, .. } => error.root(),
            other => other,
        }
    }

    pub(crate) fn file(path: impl Into<PathBuf>, error: io::Error) -> Self {
        Error::File {
            path: path.into(),
            error,
        }
    }
}

pub(crate) fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::file(path, e))
}
