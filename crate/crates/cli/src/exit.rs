//! Process exit codes by error class.

use zhbraille::Error;

pub const OK: u8 = 0;
pub const OTHER: u8 = 1;
pub const USAGE: u8 = 2;
pub const IO: u8 = 3;
pub const PARSE: u8 = 4;
pub const DATA: u8 = 5;

fn classify(e: &Error) -> u8 {
    match e.root() {
        Error::File { .. } | Error::Io(_) => IO,
        Error::InvalidDot(_)
        | Error::NotBraille(_)
        | Error::InvalidPinyin(_)
        | Error::SchemeSyntax { .. }
        | Error::DuplicateEntry { .. }
        | Error::LexiconSyntax { .. }
        | Error::CorpusParse { .. }
        | Error::MalformedSyllable { .. }
        | Error::ModelFormat { .. }
        | Error::Config { .. }
        | Error::Json(_) => PARSE,
        Error::Injectivity(_)
        | Error::IncompleteScheme(_)
        | Error::UnknownCharacter { .. }
        | Error::InsufficientData(_)
        | Error::EmptySplit
        | Error::UndecodablePosition { .. }
        | Error::PairedInput { .. }
        | Error::DigestMismatch { .. } => DATA,
        Error::InvalidArgument(_) => USAGE,
        Error::Stage { .. } => OTHER,
    }
}

pub fn code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return classify(e);
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return IO;
        }
    }
    OTHER
}
