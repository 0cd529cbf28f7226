use super::cell::BrailleCell;
use super::scheme::{BrailleScheme, SyllableCells};
use crate::error::{Error, Result};

/// One syllable read back from a braille string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BrailleSyllable {
    pub cells: SyllableCells,
    /// Index of the space-separated word the syllable belongs to.
    pub word: usize,
    /// Character offset of the syllable's first cell.
    pub offset: usize,
}

/// Splits a braille string into syllables, left to right, classifying each
/// cell by its role in `scheme`. Words are separated by ASCII spaces.
pub fn parse_braille_syllables(braille: &str, scheme: &BrailleScheme) -> Result<Vec<BrailleSyllable>> {
    let mut out = Vec::new();
    let mut word = 0usize;
    let mut cells: Vec<BrailleCell> = Vec::new();
    let mut word_start = 0usize;

    let mut flush = |cells: &mut Vec<BrailleCell>, start: usize, word: usize| -> Result<()> {
        let mut pos = 0;
        while pos < cells.len() {
            let (group, used) = scheme.group_prefix(&cells[pos..], start + pos)?;
            out.push(BrailleSyllable {
                cells: group,
                word,
                offset: start + pos,
            });
            pos += used;
        }
        cells.clear();
        Ok(())
    };

    for (offset, ch) in braille.chars().enumerate() {
        if ch == ' ' {
            if !cells.is_empty() {
                flush(&mut cells, word_start, word)?;
                word += 1;
            }
            continue;
        }
        let cell = BrailleCell::from_char(ch).map_err(|_| Error::MalformedSyllable {
            offset,
            reason: format!("{ch:?} is not a braille cell"),
        })?;
        if cells.is_empty() {
            word_start = offset;
        }
        cells.push(cell);
    }
    if !cells.is_empty() {
        flush(&mut cells, word_start, word)?;
    }
    Ok(out)
}
