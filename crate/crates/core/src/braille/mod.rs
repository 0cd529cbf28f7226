//! Braille cells, Mandarin syllables and the scheme tables that join them.

mod cell;
mod parse;
mod pinyin;
mod scheme;

pub use cell::{is_braille_char, BrailleCell};
pub use pinyin::{Final, Initial, PinyinSyllable, SyllableBase, SyllableInventory, Tone};
pub use parse::{parse_braille_syllables, BrailleSyllable};
pub use scheme::{BrailleScheme, CellRole, SyllableCells};
