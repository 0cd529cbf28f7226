//! Shared fixtures for the benchmarks in `benches/`.

use std::path::PathBuf;

use zhbraille::braille::BrailleScheme;
use zhbraille::synth::{generate, ToyConfig, ToyLanguage};
use zhbraille::Lexicon;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("{}: {e}", data_path(name).display()))
}

/// The shipped scheme and lexicon.
pub fn shipped() -> (BrailleScheme, Lexicon) {
    let lexicon = Lexicon::parse(&read("lexicon.tsv")).expect("shipped lexicon parses");
    let scheme = BrailleScheme::load(&read("scheme.tsv"), lexicon.inventory()).expect("shipped scheme loads");
    (scheme, lexicon)
}

/// Toy language plus its restricted scheme.
pub fn toy(sentences: usize) -> (BrailleScheme, ToyLanguage) {
    let src = read("scheme.tsv");
    let toy = generate(&BrailleScheme::parse(&src).expect("scheme parses"), &ToyConfig { sentences, ..ToyConfig::default() })
        .expect("toy language");
    let scheme = BrailleScheme::load(&src, toy.lexicon.inventory()).expect("toy scheme loads");
    (scheme, toy)
}

/// Sentences from the shipped sample corpus.
pub fn sample_sentences() -> Vec<String> {
    read("sample_corpus.txt").lines().filter_map(|l| l.split_once('\t')).map(|(_, s)| s.to_owned()).collect()
}
