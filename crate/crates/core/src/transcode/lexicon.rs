//! Pronunciation lexicon: word readings, per-character readings with
//! frequencies, and the homophone index derived from them.
//!
//! File format: UTF-8, one `word<TAB>pinyin<TAB>frequency` row per line, the
//! pinyin being space-separated tone-number syllables (`zhong1 guo2`). A
//! single-character row is one reading of that character; a polyphonic
//! character has one row per reading. Lines starting with `#` are comments.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::braille::{PinyinSyllable, SyllableBase, SyllableInventory, Tone};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct WordEntry {
    pub syllables: Vec<PinyinSyllable>,
    pub frequency: u64,
}

/// Characters indexed by toneless syllable, each with its tone and weight.
#[derive(Clone, Debug, Default)]
pub struct HomophoneIndex {
    by_base: HashMap<SyllableBase, Vec<(char, Tone, u64)>>,
}

impl HomophoneIndex {
    /// Characters read as `base` with `tone`, or with any tone when `tone`
    /// is `None`. Weights of a character that has several matching readings
    /// are summed.
    pub fn lookup(&self, base: SyllableBase, tone: Option<Tone>) -> BTreeMap<char, u64> {
        let mut out = BTreeMap::new();
        if let Some(entries) = self.by_base.get(&base) {
            for &(ch, t, w) in entries {
                if tone.map_or(true, |want| want == t) {
                    *out.entry(ch).or_insert(0) += w;
                }
            }
        }
        out
    }

    pub fn lookup_syllable(&self, syllable: PinyinSyllable) -> BTreeMap<char, u64> {
        self.lookup(syllable.base(), Some(syllable.tone))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    words: HashMap<String, WordEntry>,
    /// Readings per character, most frequent first.
    chars: HashMap<char, Vec<(PinyinSyllable, u64)>>,
    homophones: HomophoneIndex,
    inventory: SyllableInventory,
    max_word_chars: usize,
}

impl Lexicon {
    pub fn parse(source: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (idx, raw) in source.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |message: String| Error::LexiconSyntax { line: idx + 1, message };
            let fields: Vec<&str> = line.split('\t').collect();
            let [word, pinyin, freq] = fields.as_slice() else {
                return Err(err(format!("expected 3 tab-separated fields, got {}", fields.len())));
            };
            let word = word.trim();
            let syllables = pinyin
                .split_whitespace()
                .map(str::parse::<PinyinSyllable>)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| err(e.to_string()))?;
            let frequency = freq
                .trim()
                .parse::<u64>()
                .map_err(|_| err(format!("bad frequency {freq:?}")))?;
            rows.push((idx + 1, word.to_owned(), syllables, frequency));
        }
        Self::build(rows)
    }

    /// Builds a lexicon from `(word, syllables, frequency)` rows.
    pub fn from_rows<I>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Vec<PinyinSyllable>, u64)>,
    {
        Self::build(rows.into_iter().enumerate().map(|(i, (w, s, f))| (i + 1, w, s, f)))
    }

    fn build<I>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, String, Vec<PinyinSyllable>, u64)>,
    {
        let mut lex = Lexicon::default();
        for (line, word, syllables, frequency) in rows {
            let n_chars = word.chars().count();
            if n_chars == 0 {
                return Err(Error::LexiconSyntax { line, message: "empty word".into() });
            }
            if n_chars != syllables.len() {
                return Err(Error::LexiconSyntax {
                    line,
                    message: format!("{word:?} has {n_chars} characters but {} syllables", syllables.len()),
                });
            }
            for s in &syllables {
                lex.inventory.insert(s.base());
            }
            if n_chars == 1 {
                let ch = word.chars().next().unwrap_or_default();
                let readings = lex.chars.entry(ch).or_default();
                match readings.iter_mut().find(|(s, _)| *s == syllables[0]) {
                    Some((_, f)) => *f += frequency,
                    None => readings.push((syllables[0], frequency)),
                }
            } else {
                lex.max_word_chars = lex.max_word_chars.max(n_chars);
                let entry = WordEntry { syllables, frequency };
                match lex.words.get(&word) {
                    Some(prev) if prev.frequency >= frequency => {}
                    _ => {
                        lex.words.insert(word, entry);
                    }
                }
            }
        }

        for (&ch, readings) in lex.chars.iter_mut() {
            readings.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            for &(s, f) in readings.iter() {
                lex.homophones.by_base.entry(s.base()).or_default().push((ch, s.tone, f));
            }
        }
        for entries in lex.homophones.by_base.values_mut() {
            entries.sort_unstable();
        }
        Ok(lex)
    }

    pub fn word(&self, word: &str) -> Option<&WordEntry> {
        self.words.get(word)
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.words.contains_key(word)
    }

    /// Readings of a character, most frequent first.
    pub fn readings(&self, ch: char) -> &[(PinyinSyllable, u64)] {
        self.chars.get(&ch).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn homophones(&self) -> &HomophoneIndex {
        &self.homophones
    }

    /// (initial, final) pairs used by any entry.
    pub fn inventory(&self) -> &SyllableInventory {
        &self.inventory
    }

    /// Length in characters of the longest multi-character word.
    pub fn max_word_chars(&self) -> usize {
        self.max_word_chars.max(1)
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    /// Characters with at least one reading, sorted.
    pub fn characters(&self) -> Vec<char> {
        let mut v: Vec<char> = self.chars.keys().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn char_count(&self) -> usize {
        self.chars.len()
    }

    /// Pronounces one segmented word: the word's own entry when it has one,
    /// else each character's most frequent reading.
    pub fn annotate(&self, word: &str) -> Result<Vec<PinyinSyllable>> {
        self.annotate_at(word, 0)
    }

    pub(crate) fn annotate_at(&self, word: &str, base_offset: usize) -> Result<Vec<PinyinSyllable>> {
        if let Some(entry) = self.words.get(word) {
            return Ok(entry.syllables.clone());
        }
        word.chars()
            .enumerate()
            .map(|(i, ch)| {
                self.readings(ch)
                    .first()
                    .map(|(s, _)| *s)
                    .ok_or(Error::UnknownCharacter { ch, offset: base_offset + i })
            })
            .collect()
    }

    /// Serializes back to the TSV format, rows sorted by word then reading.
    pub fn to_tsv(&self) -> String {
        let mut rows: Vec<(String, String, u64)> = Vec::new();
        for (&ch, readings) in &self.chars {
            for &(s, f) in readings {
                rows.push((ch.to_string(), s.to_string(), f));
            }
        }
        for (w, e) in &self.words {
            let pinyin = e.syllables.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            rows.push((w.clone(), pinyin, e.frequency));
        }
        rows.sort();
        let mut out = String::new();
        for (w, p, f) in rows {
            let _ = writeln!(out, "{w}\t{p}\t{f}");
        }
        out
    }
}
