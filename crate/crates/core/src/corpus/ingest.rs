use std::collections::HashSet;

use crate::error::{Error, Result};

/// A source sentence keyed by its corpus id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub index: u64,
    pub text: String,
}

/// Reads a Leipzig-style sentence file: `numeric-id<TAB>sentence` per line.
/// Blank lines are skipped; ids must be unique because they key the tone draws.
pub fn ingest_sentences(source: &str) -> Result<Vec<Sentence>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| Error::CorpusParse { line: idx + 1, message };
        let (id, text) = line
            .split_once('\t')
            .ok_or_else(|| err("expected `id<TAB>sentence`".into()))?;
        let index = id
            .trim()
            .parse::<u64>()
            .map_err(|_| err(format!("sentence id {id:?} is not a non-negative integer")))?;
        if !seen.insert(index) {
            return Err(err(format!("duplicate sentence id {index}")));
        }
        out.push(Sentence {
            index,
            text: text.trim().to_owned(),
        });
    }
    log::info!("ingested {} sentences", out.len());
    Ok(out)
}

/// Formats sentences back into the Leipzig layout.
pub fn format_sentences(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&s.index.to_string());
        out.push('\t');
        out.push_str(&s.text);
        out.push('\n');
    }
    out
}
