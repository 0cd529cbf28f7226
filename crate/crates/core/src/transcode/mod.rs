//! Chinese text to braille: segmentation, pronunciation and tone retention.

mod lexicon;
mod policy;
mod segment;

pub use lexicon::{HomophoneIndex, Lexicon, WordEntry};
pub use policy::{TonePolicy, TonePreset, ToneDraws};
pub use segment::segment;

use crate::braille::{parse_braille_syllables, BrailleScheme, PinyinSyllable};
use crate::error::Result;

/// CJK ideographs handled by the transcoder. Anything else except whitespace
/// is dropped and counted.
pub fn is_hanzi(ch: char) -> bool {
    matches!(ch as u32,
        0x4E00..=0x9FFF | 0x3400..=0x4DBF | 0xF900..=0xFAFF | 0x20000..=0x2EBEF | 0x30000..=0x3134F)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmittedSyllable {
    pub syllable: PinyinSyllable,
    pub tone_emitted: bool,
}

/// A transcoded sentence together with everything needed to audit it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Transcription {
    pub braille: String,
    /// The transcoded characters, i.e. the input without dropped characters.
    pub text: String,
    pub words: Vec<String>,
    pub syllables: Vec<EmittedSyllable>,
    /// Non-whitespace characters that are not Chinese ideographs.
    pub dropped: usize,
}

impl Transcription {
    pub fn retained_tones(&self) -> usize {
        self.syllables.iter().filter(|s| s.tone_emitted).count()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }
}

/// Transcodes one sentence. Words are joined by single spaces; a syllable's
/// tone cell is written iff its draw falls below the retention probability.
/// Every syllable consumes one draw, including neutral-tone ones.
pub fn transcribe(
    text: &str,
    scheme: &BrailleScheme,
    lexicon: &Lexicon,
    policy: &TonePolicy,
    sentence_index: u64,
) -> Result<Transcription> {
    let mut kept = Vec::new();
    let mut offsets = Vec::new();
    let mut dropped = 0;
    for (offset, ch) in text.chars().enumerate() {
        if is_hanzi(ch) {
            kept.push(ch);
            offsets.push(offset);
        } else if !ch.is_whitespace() {
            dropped += 1;
        }
    }
    if dropped > 0 {
        log::debug!("sentence {sentence_index}: dropped {dropped} non-Chinese character(s)");
    }

    let mut out = Transcription {
        text: kept.iter().collect(),
        dropped,
        ..Default::default()
    };
    let mut draws = policy.draws(sentence_index);
    for range in segment::segment_chars(&kept, lexicon) {
        let word: String = kept[range.clone()].iter().collect();
        let syllables = lexicon.annotate_at(&word, 0).map_err(|e| match e {
            crate::Error::UnknownCharacter { ch, offset } => crate::Error::UnknownCharacter {
                ch,
                offset: offsets[range.start + offset],
            },
            other => other,
        })?;
        if !out.words.is_empty() {
            out.braille.push(' ');
        }
        for syllable in syllables {
            let keep_tone = policy.retains(draws.next().unwrap_or(1.0));
            let cells = scheme.encode(syllable, keep_tone)?;
            out.braille.extend(cells.cells().map(|c| c.to_char()));
            out.syllables.push(EmittedSyllable {
                syllable,
                tone_emitted: cells.has_tone(),
            });
        }
        out.words.push(word);
    }
    Ok(out)
}

pub fn transcode_sentence(
    text: &str,
    scheme: &BrailleScheme,
    lexicon: &Lexicon,
    policy: &TonePolicy,
    sentence_index: u64,
) -> Result<String> {
    transcribe(text, scheme, lexicon, policy, sentence_index).map(|t| t.braille)
}

/// Re-parses braille and counts syllables that carry a tone cell.
/// Returns `(retained, total_syllables)`.
pub fn count_retained_tones(braille: &str, scheme: &BrailleScheme) -> Result<(usize, usize)> {
    let groups = parse_braille_syllables(braille, scheme)?;
    let retained = groups.iter().filter(|g| g.cells.has_tone()).count();
    Ok((retained, groups.len()))
}
