//! Braille back to Chinese characters: an n-gram language model scores
//! paths through a lattice of homophone candidates.

mod lattice;
mod ngram;
mod search;

pub use lattice::{build_lattice, Candidate, Lattice};
pub use ngram::{NgramModel, Token, MAX_ORDER, MODEL_FORMAT_VERSION};
pub use search::{character_accuracy, decode, Decoded};

use crate::braille::{parse_braille_syllables, BrailleScheme};
use crate::error::Result;
use crate::transcode::HomophoneIndex;

/// Parses, builds the lattice and decodes one braille sentence.
pub fn decode_braille(
    braille: &str,
    scheme: &BrailleScheme,
    homophones: &HomophoneIndex,
    model: &NgramModel,
    beam_width: usize,
) -> Result<Decoded> {
    let groups = parse_braille_syllables(braille, scheme)?;
    let lattice = build_lattice(&groups, scheme, homophones)?;
    decode(&lattice, model, beam_width)
}
