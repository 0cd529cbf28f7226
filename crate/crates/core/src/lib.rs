//! Chinese braille toolkit.
//!
//! * [`braille`]: cells, pinyin syllables, scheme tables and braille parsing.
//! * [`transcode`]: Chinese sentences to braille under a tone-retention policy.
//! * [`corpus`]: parallel corpus construction, 8:1:1 splitting and length statistics.
//! * [`decode`]: braille back to Chinese through a homophone lattice and an n-gram model.
//! * [`eval`]: corpus BLEU.
//! * [`pipeline`]: the end-to-end run used by the command-line tool.

pub mod braille;
pub mod corpus;
pub mod decode;
pub mod error;
pub mod eval;
pub mod pipeline;
pub mod synth;
pub mod transcode;

pub use braille::{BrailleCell, BrailleScheme, PinyinSyllable, SyllableInventory, Tone};
pub use decode::{decode, NgramModel};
pub use error::{Error, Result};
pub use eval::{bleu, tokenize_chinese, BleuReport};
pub use transcode::{count_retained_tones, transcode_sentence, transcribe, Lexicon, TonePolicy, TonePreset};

/// Toolkit version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
