//! Scheme tables mapping initials, finals and tones to braille cells.
//!
//! The table file is UTF-8 with three sections, `[initials]`, `[finals]` and
//! `[tones]`. Each row is `key<TAB>cell`; anything after `#` is a comment.
//!
//! Every cell belongs to exactly one role, which is what lets a braille
//! string be split into syllables without lookahead. Finals may share a
//! cell (`o`/`e` in the mainland scheme). Initials may share a cell only
//! when no final of the syllable inventory follows both of them, as with
//! `g`/`j`, `k`/`q` and `h`/`x`; tones never share.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::cell::BrailleCell;
use super::pinyin::{Final, Initial, PinyinSyllable, SyllableBase, SyllableInventory, Tone};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellRole {
    Initial,
    Final,
    Tone,
}

/// The cells of one written syllable: `(initial?)(final)(tone?)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SyllableCells {
    pub initial: Option<BrailleCell>,
    pub rime: BrailleCell,
    pub tone: Option<BrailleCell>,
}

impl SyllableCells {
    pub fn cells(&self) -> impl Iterator<Item = BrailleCell> {
        self.initial
            .into_iter()
            .chain(std::iter::once(self.rime))
            .chain(self.tone)
    }

    pub fn len(&self) -> usize {
        1 + usize::from(self.initial.is_some()) + usize::from(self.tone.is_some())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_vec(&self) -> Vec<BrailleCell> {
        self.cells().collect()
    }

    pub fn has_tone(&self) -> bool {
        self.tone.is_some()
    }
}

impl fmt::Display for SyllableCells {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cells() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct BrailleScheme {
    initials: BTreeMap<Initial, BrailleCell>,
    finals: BTreeMap<Final, BrailleCell>,
    tones: BTreeMap<Tone, BrailleCell>,
    initials_by_cell: BTreeMap<BrailleCell, Vec<Initial>>,
    finals_by_cell: BTreeMap<BrailleCell, Vec<Final>>,
    tone_by_cell: BTreeMap<BrailleCell, Tone>,
    inventory: SyllableInventory,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Initials,
    Finals,
    Tones,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Initials => "initials",
            Section::Finals => "finals",
            Section::Tones => "tones",
        }
    }
}

impl BrailleScheme {
    /// Loads a table and checks it against the inventory it must cover.
    pub fn load(source: &str, inventory: &SyllableInventory) -> Result<Self> {
        let mut scheme = Self::parse(source)?;
        scheme.restrict_to(inventory)?;
        Ok(scheme)
    }

    /// Parses a table without an inventory. Candidate lookups then range over
    /// every spelling-valid syllable; use [`BrailleScheme::load`] for
    /// completeness and initial-sharing checks.
    pub fn parse(source: &str) -> Result<Self> {
        let mut initials = BTreeMap::new();
        let mut finals = BTreeMap::new();
        let mut tones = BTreeMap::new();
        let mut section = None;

        for (idx, raw) in source.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| Error::SchemeSyntax {
                line: line_no,
                message,
            };
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(match name.trim() {
                    "initials" => Section::Initials,
                    "finals" => Section::Finals,
                    "tones" => Section::Tones,
                    other => return Err(syntax(format!("unknown section [{other}]"))),
                });
                continue;
            }
            let section = section.ok_or_else(|| syntax("row before any section header".into()))?;

            let mut fields = line.split('\t').map(str::trim).filter(|f| !f.is_empty());
            let (Some(key), Some(cell_text), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(syntax(format!("expected `key<TAB>cell`, got {line:?}")));
            };
            let mut cell_chars = cell_text.chars();
            let (Some(ch), None) = (cell_chars.next(), cell_chars.next()) else {
                return Err(syntax(format!("cell {cell_text:?} is not a single character")));
            };
            let cell = BrailleCell::from_char(ch).map_err(|e| syntax(e.to_string()))?;
            if cell == BrailleCell::BLANK {
                return Err(syntax("the blank pattern cannot encode a syllable component".into()));
            }
            let duplicate = || Error::DuplicateEntry {
                section: section.name(),
                key: key.to_owned(),
                line: line_no,
            };

            match section {
                Section::Initials => {
                    let initial = Initial::from_name(key)
                        .filter(|i| *i != Initial::Zero)
                        .ok_or_else(|| syntax(format!("unknown initial {key:?}")))?;
                    if initials.insert(initial, cell).is_some() {
                        return Err(duplicate());
                    }
                }
                Section::Finals => {
                    let rime = Final::from_key(key).ok_or_else(|| syntax(format!("unknown final {key:?}")))?;
                    if finals.insert(rime, cell).is_some() {
                        return Err(duplicate());
                    }
                }
                Section::Tones => {
                    let tone = key
                        .parse::<u8>()
                        .ok()
                        .and_then(Tone::new)
                        .filter(|t| !t.is_neutral())
                        .ok_or_else(|| syntax(format!("tone key must be 1-4, got {key:?}")))?;
                    if tones.insert(tone, cell).is_some() {
                        return Err(duplicate());
                    }
                }
            }
        }

        for tone in Tone::MARKED {
            if !tones.contains_key(&tone) {
                return Err(Error::IncompleteScheme(format!("tone {tone}")));
            }
        }

        let mut initials_by_cell: BTreeMap<BrailleCell, Vec<Initial>> = BTreeMap::new();
        for (&i, &c) in &initials {
            initials_by_cell.entry(c).or_default().push(i);
        }
        let mut finals_by_cell: BTreeMap<BrailleCell, Vec<Final>> = BTreeMap::new();
        for (&f, &c) in &finals {
            finals_by_cell.entry(c).or_default().push(f);
        }
        let mut tone_by_cell = BTreeMap::new();
        for (&t, &c) in &tones {
            if let Some(prev) = tone_by_cell.insert(c, t) {
                return Err(Error::Injectivity(format!("tones {prev} and {t} share cell {c}")));
            }
        }

        for &c in initials_by_cell.keys() {
            if finals_by_cell.contains_key(&c) || tone_by_cell.contains_key(&c) {
                return Err(Error::Injectivity(format!("cell {c} is used by more than one role")));
            }
        }
        for &c in finals_by_cell.keys() {
            if tone_by_cell.contains_key(&c) {
                return Err(Error::Injectivity(format!("cell {c} is used by more than one role")));
            }
        }

        Ok(BrailleScheme {
            initials,
            finals,
            tones,
            initials_by_cell,
            finals_by_cell,
            tone_by_cell,
            inventory: SyllableInventory::structural(),
        })
    }

    /// Checks coverage of `inventory` and that initials sharing a cell never
    /// combine with a common final, then limits candidate lookups to it.
    pub fn restrict_to(&mut self, inventory: &SyllableInventory) -> Result<()> {
        for base in inventory.iter() {
            if base.initial != Initial::Zero && !self.initials.contains_key(&base.initial) {
                return Err(Error::IncompleteScheme(format!("initial {}", base.initial)));
            }
            if !self.finals.contains_key(&base.rime) {
                return Err(Error::IncompleteScheme(format!("final {}", base.rime)));
            }
        }

        for (cell, group) in &self.initials_by_cell {
            for (a_idx, &a) in group.iter().enumerate() {
                for &b in &group[a_idx + 1..] {
                    let shared: Vec<_> = inventory
                        .iter()
                        .filter(|x| x.initial == a && inventory.contains(&SyllableBase::new(b, x.rime)))
                        .map(|x| x.rime)
                        .collect();
                    if let Some(rime) = shared.first() {
                        return Err(Error::Injectivity(format!(
                            "initials {a} and {b} share cell {cell} but both precede final {rime}"
                        )));
                    }
                }
            }
        }

        self.inventory = inventory.clone();
        Ok(())
    }

    pub fn inventory(&self) -> &SyllableInventory {
        &self.inventory
    }

    pub fn initial_cell(&self, initial: Initial) -> Option<BrailleCell> {
        self.initials.get(&initial).copied()
    }

    pub fn final_cell(&self, rime: Final) -> Option<BrailleCell> {
        self.finals.get(&rime).copied()
    }

    pub fn tone_cell(&self, tone: Tone) -> Option<BrailleCell> {
        self.tones.get(&tone).copied()
    }

    pub fn tone_of(&self, cell: BrailleCell) -> Option<Tone> {
        self.tone_by_cell.get(&cell).copied()
    }

    pub fn role(&self, cell: BrailleCell) -> Option<CellRole> {
        if self.initials_by_cell.contains_key(&cell) {
            Some(CellRole::Initial)
        } else if self.finals_by_cell.contains_key(&cell) {
            Some(CellRole::Final)
        } else if self.tone_by_cell.contains_key(&cell) {
            Some(CellRole::Tone)
        } else {
            None
        }
    }

    /// Number of rows per section: (initials, finals, tones).
    pub fn entry_counts(&self) -> (usize, usize, usize) {
        (self.initials.len(), self.finals.len(), self.tones.len())
    }

    /// Writes a syllable as `[initial] final [tone]`. The zero initial and the
    /// neutral tone emit nothing.
    pub fn encode(&self, syllable: PinyinSyllable, include_tone: bool) -> Result<SyllableCells> {
        let initial = match syllable.initial {
            Initial::Zero => None,
            i => Some(
                self.initial_cell(i)
                    .ok_or_else(|| Error::IncompleteScheme(format!("initial {i}")))?,
            ),
        };
        let rime = self
            .final_cell(syllable.rime)
            .ok_or_else(|| Error::IncompleteScheme(format!("final {}", syllable.rime)))?;
        let tone = if include_tone && !syllable.tone.is_neutral() {
            Some(
                self.tone_cell(syllable.tone)
                    .ok_or_else(|| Error::IncompleteScheme(format!("tone {}", syllable.tone)))?,
            )
        } else {
            None
        };
        Ok(SyllableCells { initial, rime, tone })
    }

    /// Splits exactly one syllable's worth of cells.
    pub fn group(&self, cells: &[BrailleCell]) -> Result<SyllableCells> {
        let malformed = |offset: usize, reason: String| Error::MalformedSyllable { offset, reason };
        let (group, used) = self.group_prefix(cells, 0)?;
        if used != cells.len() {
            return Err(malformed(used, format!("{} trailing cell(s) after a complete syllable", cells.len() - used)));
        }
        Ok(group)
    }

    /// Greedily reads one syllable from the front of `cells`; returns it with
    /// the number of cells consumed. `base_offset` is only used in errors.
    pub(crate) fn group_prefix(&self, cells: &[BrailleCell], base_offset: usize) -> Result<(SyllableCells, usize)> {
        let malformed = |offset: usize, reason: String| Error::MalformedSyllable {
            offset: base_offset + offset,
            reason,
        };
        let mut pos = 0;
        let role_at = |pos: usize| cells.get(pos).map(|&c| (c, self.role(c)));

        let initial = match role_at(pos) {
            None => return Err(malformed(pos, "empty syllable".into())),
            Some((c, None)) => return Err(malformed(pos, format!("cell {c} is not in the scheme"))),
            Some((c, Some(CellRole::Tone))) => return Err(malformed(pos, format!("tone cell {c} without a final"))),
            Some((c, Some(CellRole::Initial))) => {
                pos += 1;
                Some(c)
            }
            Some((_, Some(CellRole::Final))) => None,
        };

        let rime = match role_at(pos) {
            Some((c, Some(CellRole::Final))) => {
                pos += 1;
                c
            }
            Some((c, _)) => return Err(malformed(pos, format!("expected a final, found {c}"))),
            None => return Err(malformed(pos, "initial without a final".into())),
        };

        let tone = match role_at(pos) {
            Some((c, Some(CellRole::Tone))) => {
                pos += 1;
                Some(c)
            }
            _ => None,
        };

        Ok((SyllableCells { initial, rime, tone }, pos))
    }

    /// Every syllable of the inventory that is written as `group`. An absent
    /// tone cell leaves the tone open (1 through 5).
    pub fn candidates(&self, group: &SyllableCells) -> BTreeSet<PinyinSyllable> {
        let zero = [Initial::Zero];
        let initials: &[Initial] = match group.initial {
            None => &zero,
            Some(c) => self.initials_by_cell.get(&c).map(Vec::as_slice).unwrap_or(&[]),
        };
        let finals: &[Final] = self.finals_by_cell.get(&group.rime).map(Vec::as_slice).unwrap_or(&[]);
        let tones: Vec<Tone> = match group.tone {
            Some(c) => self.tone_of(c).into_iter().collect(),
            None => Tone::ALL.to_vec(),
        };

        let mut out = BTreeSet::new();
        for &i in initials {
            for &f in finals {
                let base = SyllableBase::new(i, f);
                if self.inventory.contains(&base) {
                    out.extend(tones.iter().map(|&t| base.with_tone(t)));
                }
            }
        }
        out
    }

    /// Candidate syllables for a raw cell sequence of length 1 to 3.
    pub fn decode_cells(&self, cells: &[BrailleCell]) -> Result<BTreeSet<PinyinSyllable>> {
        if !(1..=3).contains(&cells.len()) {
            return Err(Error::MalformedSyllable {
                offset: 0,
                reason: format!("a syllable has 1 to 3 cells, got {}", cells.len()),
            });
        }
        Ok(self.candidates(&self.group(cells)?))
    }
}
