use std::ops::Range;

use super::lexicon::Lexicon;

/// Forward maximal matching: at each position take the longest lexicon word,
/// falling back to a single character. Whitespace is removed first.
pub fn segment(text: &str, lexicon: &Lexicon) -> Vec<String> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    segment_chars(&chars, lexicon)
        .into_iter()
        .map(|r| chars[r].iter().collect())
        .collect()
}

pub(crate) fn segment_chars(chars: &[char], lexicon: &Lexicon) -> Vec<Range<usize>> {
    let max_len = lexicon.max_word_chars();
    let mut out = Vec::new();
    let mut start = 0;
    let mut buf = String::new();
    while start < chars.len() {
        let longest = (start + max_len).min(chars.len());
        let mut end = start + 1;
        for stop in (start + 2..=longest).rev() {
            buf.clear();
            buf.extend(&chars[start..stop]);
            if lexicon.contains_word(&buf) {
                end = stop;
                break;
            }
        }
        out.push(start..end);
        start = end;
    }
    out
}
