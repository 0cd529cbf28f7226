//! Per-syllable candidate characters.

use crate::braille::{BrailleScheme, BrailleSyllable};
use crate::error::{Error, Result};
use crate::transcode::HomophoneIndex;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub ch: char,
    /// Emission probability within this position; sums to 1 per position.
    pub emission: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Lattice {
    positions: Vec<Vec<Candidate>>,
}

impl Lattice {
    /// Builds a lattice from raw `(char, weight)` lists. Weights below 1 are
    /// raised to 1 and then normalized per position. Duplicate characters are
    /// merged. Candidates are kept sorted by character.
    pub fn from_weights<I, P>(positions: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: IntoIterator<Item = (char, f64)>,
    {
        let mut out = Vec::new();
        for (position, cands) in positions.into_iter().enumerate() {
            let mut merged: Vec<(char, f64)> = Vec::new();
            for (ch, w) in cands {
                let w = if w.is_finite() { w.max(1.0) } else { 1.0 };
                match merged.iter_mut().find(|(c, _)| *c == ch) {
                    Some((_, acc)) => *acc += w,
                    None => merged.push((ch, w)),
                }
            }
            if merged.is_empty() {
                return Err(Error::UndecodablePosition { position });
            }
            merged.sort_by_key(|c| c.0);
            let total: f64 = merged.iter().map(|c| c.1).sum();
            out.push(merged.into_iter().map(|(ch, w)| Candidate { ch, emission: w / total }).collect());
        }
        Ok(Lattice { positions: out })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, i: usize) -> &[Candidate] {
        &self.positions[i]
    }

    pub fn positions(&self) -> impl Iterator<Item = &[Candidate]> {
        self.positions.iter().map(Vec::as_slice)
    }

    /// Number of distinct paths, saturating.
    pub fn path_count(&self) -> u128 {
        self.positions.iter().fold(1u128, |acc, p| acc.saturating_mul(p.len() as u128))
    }
}

/// One lattice position per braille syllable. Candidates are every character
/// with a reading among the syllables the cells can stand for; the emission
/// weight is the reading frequency, floored at 1.
pub fn build_lattice(groups: &[BrailleSyllable], scheme: &BrailleScheme, homophones: &HomophoneIndex) -> Result<Lattice> {
    let positions = groups.iter().map(|g| {
        let mut cands: Vec<(char, f64)> = Vec::new();
        for syllable in scheme.candidates(&g.cells) {
            for (ch, w) in homophones.lookup_syllable(syllable) {
                cands.push((ch, (w as f64).max(1.0)));
            }
        }
        cands
    });
    Lattice::from_weights(positions)
}
