//! Deterministic toy language for desk-scale experiments: a lexicon where
//! every toneless syllable is shared by several characters (one per tone)
//! and a Markov-chain corpus whose character sequences are predictable from
//! context.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braille::{BrailleScheme, PinyinSyllable, SyllableBase, SyllableInventory, Tone};
use crate::corpus::{format_sentences, Sentence};
use crate::error::{Error, Result};
use crate::transcode::Lexicon;

#[derive(Clone, Debug, PartialEq)]
pub struct ToyConfig {
    pub seed: u64,
    /// Toneless syllables; each carries four characters, one per tone.
    pub bases: usize,
    pub sentences: usize,
    /// Possible successors of each character.
    pub successors: usize,
    pub min_len: usize,
    pub max_len: usize,
    /// Two-character words added to the lexicon.
    pub words: usize,
}

impl Default for ToyConfig {
    fn default() -> Self {
        ToyConfig {
            seed: 0,
            bases: 24,
            sentences: 500,
            successors: 3,
            min_len: 4,
            max_len: 12,
            words: 20,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ToyLanguage {
    pub sentences: Vec<Sentence>,
    pub lexicon: Lexicon,
    /// Lexicon file contents (`word<TAB>pinyin<TAB>frequency`).
    pub lexicon_tsv: String,
    pub inventory: SyllableInventory,
}

impl ToyLanguage {
    /// Corpus in `id<TAB>sentence` form.
    pub fn corpus_text(&self) -> String {
        format_sentences(&self.sentences)
    }
}

/// Picks up to `count` bases whose (initial cell, final cell) pair is unique
/// under `scheme`, so that a toned syllable is never ambiguous.
pub fn unambiguous_bases(scheme: &BrailleScheme, count: usize, seed: u64) -> SyllableInventory {
    let mut all: Vec<SyllableBase> = SyllableInventory::structural().iter().collect();
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut used = BTreeSet::new();
    let mut out = SyllableInventory::default();
    for base in all {
        if out.len() == count {
            break;
        }
        let cells = (scheme.initial_cell(base.initial), scheme.final_cell(base.rime));
        if cells.1.is_none() || (base.initial != crate::braille::Initial::Zero && cells.0.is_none()) {
            continue;
        }
        if used.insert(cells) {
            out.insert(base);
        }
    }
    out
}

const FIRST_CHAR: u32 = 0x4E00;

/// Builds the toy language over `scheme`, which should be unrestricted
/// (as returned by [`BrailleScheme::parse`]).
pub fn generate(scheme: &BrailleScheme, config: &ToyConfig) -> Result<ToyLanguage> {
    if config.bases == 0 || config.sentences == 0 || config.successors == 0 || config.min_len == 0 || config.min_len > config.max_len {
        return Err(Error::InvalidArgument(format!("invalid toy configuration {config:?}")));
    }
    let inventory = unambiguous_bases(scheme, config.bases, config.seed);
    if inventory.len() < config.bases {
        return Err(Error::InvalidArgument(format!(
            "scheme supports only {} unambiguous syllables, {} requested",
            inventory.len(),
            config.bases
        )));
    }

    let marked: Vec<Tone> = Tone::MARKED.to_vec();
    let mut readings: Vec<(char, PinyinSyllable)> = Vec::new();
    for (b, base) in inventory.iter().enumerate() {
        for (t, &tone) in marked.iter().enumerate() {
            let code = FIRST_CHAR + (b * marked.len() + t) as u32;
            let ch = char::from_u32(code).expect("ideograph block");
            readings.push((ch, base.with_tone(tone)));
        }
    }
    let n = readings.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // Zipf-like start weights; a few fixed successors per character.
    let start_weights: Vec<f64> = {
        let mut ranks: Vec<usize> = (0..n).collect();
        ranks.shuffle(&mut rng);
        ranks.iter().map(|&r| 1.0 / (r + 1) as f64).collect()
    };
    let start = WeightedIndex::new(&start_weights).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut successors: Vec<(Vec<usize>, WeightedIndex<f64>)> = Vec::with_capacity(n);
    for _ in 0..n {
        let next: Vec<usize> = (0..config.successors).map(|_| rng.random_range(0..n)).collect();
        let weights: Vec<f64> = (0..config.successors).map(|i| 1.0 / (i + 1) as f64).collect();
        let dist = WeightedIndex::new(&weights).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        successors.push((next, dist));
    }

    let mut sentences = Vec::with_capacity(config.sentences);
    let mut char_counts = vec![0u64; n];
    let mut bigram_counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for i in 0..config.sentences {
        let len = rng.random_range(config.min_len..=config.max_len);
        let mut cur = start.sample(&mut rng);
        let mut text = String::with_capacity(len * 3);
        for pos in 0..len {
            if pos > 0 {
                let (next, dist) = &successors[cur];
                let prev = cur;
                cur = next[dist.sample(&mut rng)];
                *bigram_counts.entry((prev, cur)).or_insert(0) += 1;
            }
            char_counts[cur] += 1;
            text.push(readings[cur].0);
        }
        sentences.push(Sentence { index: i as u64 + 1, text });
    }

    let mut tsv = String::new();
    for (i, (ch, syl)) in readings.iter().enumerate() {
        let _ = writeln!(tsv, "{ch}\t{syl}\t{}", char_counts[i].max(1));
    }
    // The most frequent distinct bigrams become words.
    let mut frequent: Vec<((usize, usize), u64)> = bigram_counts.into_iter().filter(|(p, _)| p.0 != p.1).collect();
    frequent.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    for ((a, b), count) in frequent.into_iter().take(config.words) {
        let _ = writeln!(tsv, "{}{}\t{} {}\t{count}", readings[a].0, readings[b].0, readings[a].1, readings[b].1);
    }
    let lexicon = Lexicon::parse(&tsv)?;

    Ok(ToyLanguage {
        sentences,
        lexicon,
        lexicon_tsv: tsv,
        inventory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEME: &str = include_str!("../../../data/scheme.tsv");

    #[test]
    fn toy_language_is_deterministic_and_homophonous() {
        let scheme = BrailleScheme::parse(SCHEME).unwrap();
        let config = ToyConfig { sentences: 50, ..ToyConfig::default() };
        let a = generate(&scheme, &config).unwrap();
        let b = generate(&scheme, &config).unwrap();
        assert_eq!(a.corpus_text(), b.corpus_text());
        assert_eq!(a.lexicon_tsv, b.lexicon_tsv);
        assert_eq!(a.sentences.len(), 50);
        assert_eq!(a.inventory.len(), config.bases);
        assert_eq!(a.lexicon.char_count(), config.bases * 4);
        assert!(a.lexicon.word_count() > 0);

        let restricted = BrailleScheme::load(SCHEME, a.lexicon.inventory()).unwrap();
        for base in a.inventory.iter() {
            assert_eq!(a.lexicon.homophones().lookup(base, None).len(), 4);
            for tone in Tone::MARKED {
                let cells = restricted.encode(base.with_tone(tone), true).unwrap();
                assert_eq!(restricted.candidates(&cells).len(), 1);
            }
        }
        let other = generate(&scheme, &ToyConfig { seed: 1, sentences: 50, ..ToyConfig::default() }).unwrap();
        assert_ne!(other.corpus_text(), a.corpus_text());
    }
}
