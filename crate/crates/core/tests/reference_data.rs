//! Checks on the shipped scheme table and lexicon under `data/`.

use std::path::PathBuf;

use zhbraille::braille::{parse_braille_syllables, Initial, SyllableBase};
use zhbraille::transcode::segment;
use zhbraille::{BrailleScheme, Lexicon, TonePolicy, Tone};

fn data(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn load() -> (BrailleScheme, Lexicon) {
    let lexicon = Lexicon::parse(&data("lexicon.tsv")).unwrap();
    let scheme = BrailleScheme::load(&data("scheme.tsv"), lexicon.inventory()).unwrap();
    (scheme, lexicon)
}

#[test]
fn scheme_entry_counts_match_file_rows() {
    let src = data("scheme.tsv");
    let mut rows = [0usize; 3];
    let mut section = None;
    for line in src.lines().map(|l| l.split('#').next().unwrap().trim()).filter(|l| !l.is_empty()) {
        match line {
            "[initials]" => section = Some(0),
            "[finals]" => section = Some(1),
            "[tones]" => section = Some(2),
            _ => rows[section.unwrap()] += 1,
        }
    }
    let (scheme, _) = load();
    assert_eq!(rows, [21, 36, 4]);
    let (i, f, t) = scheme.entry_counts();
    assert_eq!([i, f, t], rows);
}

#[test]
fn yi1_reads_off_the_table() {
    let (scheme, _) = load();
    let cells = scheme.encode("yi1".parse().unwrap(), true).unwrap();
    // zero initial, final i = dots 24, tone 1 = dot 1
    assert_eq!(cells.to_string(), "⠊⠁");
    assert_eq!(scheme.encode("zhong1".parse().unwrap(), false).unwrap().to_string(), "⠌⠲");
}

#[test]
fn encoding_inverse_over_inventory() {
    let (scheme, lexicon) = load();
    let inventory = lexicon.inventory();
    assert!(inventory.len() > 350, "{}", inventory.len());
    for s in inventory.syllables() {
        for include_tone in [true, false] {
            let cells = scheme.encode(s, include_tone).unwrap();
            let expected_len = 1 + usize::from(s.initial != Initial::Zero) + usize::from(include_tone && !s.tone.is_neutral());
            assert_eq!(cells.len(), expected_len);
            let candidates = scheme.decode_cells(&cells.to_vec()).unwrap();
            assert!(candidates.contains(&s), "{s} via {cells}");
            if include_tone && !s.tone.is_neutral() {
                assert!(candidates.iter().all(|c| c.tone == s.tone));
            } else {
                let bases: Vec<SyllableBase> = candidates.iter().map(|c| c.base()).collect();
                assert!(bases.iter().all(|b| scheme.encode(b.with_tone(Tone::NEUTRAL), false).unwrap() == cells));
                assert_eq!(candidates.len() % 5, 0);
            }
        }
    }
}

#[test]
fn toneless_yi_has_over_a_hundred_characters() {
    let (_, lexicon) = load();
    let yi = SyllableBase::parse("yi").unwrap();
    let n = lexicon.homophones().lookup(yi, None).len();
    assert!(n > 100, "{n}");
}

#[test]
fn shipped_sentence_transcodes() {
    let (scheme, lexicon) = load();
    let text = "中国人民银行今天发布了新的货币政策";
    let words = segment(text, &lexicon);
    assert_eq!(words.concat(), text);
    let t = zhbraille::transcribe(text, &scheme, &lexicon, &TonePolicy::full_tone(0), 0).unwrap();
    let groups = parse_braille_syllables(&t.braille, &scheme).unwrap();
    assert_eq!(groups.len(), text.chars().count());
    assert_eq!(t.braille.matches(' ').count(), t.words.len() - 1);
    for c in t.braille.chars().filter(|c| *c != ' ') {
        assert!(scheme.role(c.try_into().unwrap()).is_some());
    }
}
