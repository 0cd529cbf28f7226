use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::split::{DatasetSplit, SplitName};
use crate::braille::is_braille_char;
use crate::error::{Error, Result};

/// Counts tokens on either side of a pair.
pub trait TokenCounter {
    fn braille_tokens(&self, braille: &str) -> usize;
    fn chinese_tokens(&self, chinese: &str) -> usize;
}

/// Braille cells on the braille side, characters on the Chinese side.
#[derive(Clone, Copy, Debug, Default)]
pub struct CellTokenCounter;

impl TokenCounter for CellTokenCounter {
    fn braille_tokens(&self, braille: &str) -> usize {
        braille.chars().filter(|&c| is_braille_char(c)).count()
    }

    fn chinese_tokens(&self, chinese: &str) -> usize {
        chinese.chars().filter(|c| !c.is_whitespace()).count()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanMedian {
    pub mean: f64,
    pub median: f64,
}

impl MeanMedian {
    fn of(mut values: Vec<usize>) -> Self {
        values.sort_unstable();
        let n = values.len();
        let mean = values.iter().sum::<usize>() as f64 / n as f64;
        let median = if n % 2 == 1 {
            values[n / 2] as f64
        } else {
            (values[n / 2 - 1] + values[n / 2]) as f64 / 2.0
        };
        MeanMedian { mean, median }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitStats {
    pub name: SplitName,
    pub sample_count: usize,
    pub braille_string: MeanMedian,
    pub braille_token: MeanMedian,
    pub chinese_string: MeanMedian,
    pub chinese_token: MeanMedian,
}

/// Length statistics of one split. String lengths are in characters
/// (spaces included); token lengths come from `counter`.
pub fn compute_stats(split: &DatasetSplit, counter: &dyn TokenCounter) -> Result<SplitStats> {
    if split.pairs.is_empty() {
        return Err(Error::EmptySplit);
    }
    let column = |f: &dyn Fn(&super::ParallelPair) -> usize| MeanMedian::of(split.pairs.iter().map(f).collect());
    Ok(SplitStats {
        name: split.name,
        sample_count: split.pairs.len(),
        braille_string: column(&|p| p.braille.chars().count()),
        braille_token: column(&|p| counter.braille_tokens(&p.braille)),
        chinese_string: column(&|p| p.chinese.chars().count()),
        chinese_token: column(&|p| counter.chinese_tokens(&p.chinese)),
    })
}

fn cell(m: MeanMedian) -> String {
    format!("{:.0}/{:.0}", m.mean, m.median)
}

/// Renders statistics as a plain-text table, one row per split, with
/// mean/median columns for braille and Chinese string and token lengths.
pub fn render_stats_table(rows: &[SplitStats]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12}| {:>9} | {:^23} | {:^23}",
        "", "# Sample", "Braille Len. (Mean/Median)", "Chinese Len. (Mean/Median)"
    );
    let _ = writeln!(out, "{:<12}| {:>9} | {:>11} {:>11} | {:>11} {:>11}", "", "", "String", "Token", "String", "Token");
    let _ = writeln!(out, "{}", "-".repeat(12 + 2 + 9 + 3 + 23 + 3 + 23));
    for r in rows {
        let _ = writeln!(
            out,
            "{:<12}| {:>9} | {:>11} {:>11} | {:>11} {:>11}",
            r.name.label(),
            r.sample_count,
            cell(r.braille_string),
            cell(r.braille_token),
            cell(r.chinese_string),
            cell(r.chinese_token),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::ParallelPair;

    fn pair(braille_len: usize, chinese_len: usize) -> ParallelPair {
        ParallelPair {
            braille: "⠁".repeat(braille_len),
            chinese: "中".repeat(chinese_len),
            sentence_index: 0,
        }
    }

    fn split(pairs: Vec<ParallelPair>) -> DatasetSplit {
        DatasetSplit { name: SplitName::Test, pairs }
    }

    #[test]
    fn single_pair() {
        let s = compute_stats(&split(vec![pair(10, 4)]), &CellTokenCounter).unwrap();
        assert_eq!(s.sample_count, 1);
        assert_eq!(s.braille_string, MeanMedian { mean: 10.0, median: 10.0 });
        assert_eq!(s.chinese_string, MeanMedian { mean: 4.0, median: 4.0 });
    }

    #[test]
    fn even_count_median() {
        let s = compute_stats(&split(vec![pair(5, 1), pair(15, 3)]), &CellTokenCounter).unwrap();
        assert_eq!(s.braille_string, MeanMedian { mean: 10.0, median: 10.0 });
        assert_eq!(s.chinese_token, MeanMedian { mean: 2.0, median: 2.0 });
    }

    #[test]
    fn spaces_count_as_string_not_token() {
        let p = ParallelPair {
            braille: "⠁⠂ ⠄".into(),
            chinese: "你好".into(),
            sentence_index: 0,
        };
        let s = compute_stats(&split(vec![p]), &CellTokenCounter).unwrap();
        assert_eq!(s.braille_string.mean, 4.0);
        assert_eq!(s.braille_token.mean, 3.0);
    }

    #[test]
    fn empty_split() {
        assert!(matches!(compute_stats(&split(vec![]), &CellTokenCounter), Err(Error::EmptySplit)));
    }

    #[test]
    fn table_layout() {
        let s = compute_stats(&split(vec![pair(145, 74)]), &CellTokenCounter).unwrap();
        let table = render_stats_table(&[s]);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].contains("Braille Len. (Mean/Median)"));
        assert!(lines[3].starts_with("Test"));
        assert!(lines[3].contains("145/145"));
        assert!(lines[3].contains("74/74"));
    }
}
