//! Corpus BLEU over character tokens, with per-sentence diagnostics.

use std::collections::HashMap;
use std::hash::Hash;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decode::character_accuracy;
use crate::error::{self, Error, Result};
use crate::transcode::is_hanzi;

pub const DEFAULT_MAX_N: usize = 4;

fn is_cjk(ch: char) -> bool {
    is_hanzi(ch) || matches!(ch as u32, 0x3000..=0x303F | 0xFF00..=0xFFEF)
}

/// One token per CJK character; other characters form whitespace-delimited
/// runs, each run one token.
pub fn tokenize_chinese(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut run = String::new();
    for ch in text.chars() {
        if is_cjk(ch) || ch.is_whitespace() {
            if !run.is_empty() {
                out.push(std::mem::take(&mut run));
            }
            if !ch.is_whitespace() {
                out.push(ch.to_string());
            }
        } else {
            run.push(ch);
        }
    }
    if !run.is_empty() {
        out.push(run);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BleuReport {
    pub max_n: usize,
    /// Modified precision per order. `None` when no candidate has an n-gram
    /// of that order; such orders are left out of the geometric mean.
    pub precisions: Vec<Option<f64>>,
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
    pub brevity_penalty: f64,
    /// 0 to 100.
    pub score: f64,
    pub candidate_length: u64,
    pub reference_length: u64,
}

#[derive(Clone, Debug, Default)]
struct Counts {
    matches: Vec<u64>,
    totals: Vec<u64>,
    c: u64,
    r: u64,
}

impl Counts {
    fn add(mut self, other: Counts) -> Counts {
        if self.matches.is_empty() {
            return other;
        }
        for (a, b) in self.matches.iter_mut().zip(other.matches) {
            *a += b;
        }
        for (a, b) in self.totals.iter_mut().zip(other.totals) {
            *a += b;
        }
        self.c += other.c;
        self.r += other.r;
        self
    }
}

fn ngram_counts<T: Eq + Hash>(tokens: &[T], n: usize) -> HashMap<&[T], u64> {
    let mut m = HashMap::new();
    for w in tokens.windows(n) {
        *m.entry(w).or_insert(0) += 1;
    }
    m
}

fn pair_counts<T: Eq + Hash>(cand: &[T], reference: &[T], max_n: usize) -> Counts {
    let mut counts = Counts {
        matches: vec![0; max_n],
        totals: vec![0; max_n],
        c: cand.len() as u64,
        r: reference.len() as u64,
    };
    for n in 1..=max_n {
        let cc = ngram_counts(cand, n);
        let rc = ngram_counts(reference, n);
        counts.totals[n - 1] = cc.values().sum();
        counts.matches[n - 1] = cc.iter().map(|(g, &k)| k.min(rc.get(g).copied().unwrap_or(0))).sum();
    }
    counts
}

fn brevity_penalty(c: u64, r: u64) -> f64 {
    if c >= r {
        1.0
    } else if c == 0 {
        0.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    }
}

fn report(counts: Counts, max_n: usize) -> BleuReport {
    let Counts { matches, totals, c, r } = counts;
    let bp = brevity_penalty(c, r);
    let precisions: Vec<Option<f64>> = matches
        .iter()
        .zip(&totals)
        .map(|(&m, &t)| match (t, c) {
            (0, 0) => Some(0.0),
            (0, _) => None,
            _ => Some(m as f64 / t as f64),
        })
        .collect();
    let score = if c == 0 && r == 0 {
        100.0
    } else {
        let used: Vec<f64> = precisions.iter().flatten().copied().collect();
        if used.contains(&0.0) {
            0.0
        } else {
            let w = 1.0 / used.len() as f64;
            100.0 * bp * used.iter().map(|p| w * p.ln()).sum::<f64>().exp()
        }
    };
    BleuReport {
        max_n,
        precisions,
        matches,
        totals,
        brevity_penalty: if c == 0 && r == 0 { 1.0 } else { bp },
        score,
        candidate_length: c,
        reference_length: r,
    }
}

fn check_max_n(max_n: usize) -> Result<()> {
    if max_n == 0 {
        return Err(Error::InvalidArgument("max-n must be at least 1".into()));
    }
    Ok(())
}

/// Corpus-level BLEU with clipped n-gram counts summed over all pairs,
/// uniform weights and no smoothing: any zero precision gives 0.
pub fn bleu<T, C, R>(candidates: &[C], references: &[R], max_n: usize) -> Result<BleuReport>
where
    T: Eq + Hash + Sync,
    C: AsRef<[T]> + Sync,
    R: AsRef<[T]> + Sync,
{
    check_max_n(max_n)?;
    if candidates.len() != references.len() {
        return Err(Error::PairedInput { left: candidates.len(), right: references.len() });
    }
    let counts = candidates
        .par_iter()
        .zip(references.par_iter())
        .map(|(c, r)| pair_counts(c.as_ref(), r.as_ref(), max_n))
        .reduce(Counts::default, Counts::add);
    let counts = if counts.matches.is_empty() {
        Counts { matches: vec![0; max_n], totals: vec![0; max_n], c: 0, r: 0 }
    } else {
        counts
    };
    Ok(report(counts, max_n))
}

/// Sentence BLEU with add-one smoothing on orders 2 and up, for ranking
/// individual sentences. 0 to 100.
pub fn sentence_bleu_smoothed<T: Eq + Hash>(candidate: &[T], reference: &[T], max_n: usize) -> f64 {
    let counts = pair_counts(candidate, reference, max_n);
    if counts.c == 0 {
        return if counts.r == 0 { 100.0 } else { 0.0 };
    }
    if counts.matches[0] == 0 {
        return 0.0;
    }
    let log_sum: f64 = (0..max_n)
        .map(|i| {
            let (m, t) = (counts.matches[i] as f64, counts.totals[i] as f64);
            if i == 0 { (m / t).ln() } else { ((m + 1.0) / (t + 1.0)).ln() }
        })
        .sum();
    100.0 * brevity_penalty(counts.c, counts.r) * (log_sum / max_n as f64).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SentenceScore {
    /// Zero-based line number.
    pub line: usize,
    pub bleu: f64,
    pub accuracy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub corpus: BleuReport,
    /// Mean exact-position character accuracy over sentences.
    pub mean_accuracy: f64,
    pub sentences: Vec<SentenceScore>,
}

fn split_lines(text: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    lines
}

/// Scores line-aligned hypothesis and reference texts.
pub fn evaluate_split(hypotheses: &str, references: &str, max_n: usize) -> Result<Evaluation> {
    check_max_n(max_n)?;
    let hyp = split_lines(hypotheses);
    let refs = split_lines(references);
    if hyp.len() != refs.len() {
        return Err(Error::PairedInput { left: hyp.len(), right: refs.len() });
    }
    let hyp_tok: Vec<Vec<String>> = hyp.par_iter().map(|l| tokenize_chinese(l)).collect();
    let ref_tok: Vec<Vec<String>> = refs.par_iter().map(|l| tokenize_chinese(l)).collect();
    let corpus = bleu(&hyp_tok, &ref_tok, max_n)?;
    let sentences: Vec<SentenceScore> = (0..hyp.len())
        .into_par_iter()
        .map(|i| SentenceScore {
            line: i,
            bleu: sentence_bleu_smoothed(&hyp_tok[i], &ref_tok[i], max_n),
            accuracy: character_accuracy(&strip_ws(hyp[i]), &strip_ws(refs[i])),
        })
        .collect();
    let mean_accuracy = if sentences.is_empty() {
        0.0
    } else {
        sentences.iter().map(|s| s.accuracy).sum::<f64>() / sentences.len() as f64
    };
    Ok(Evaluation { corpus, mean_accuracy, sentences })
}

fn strip_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

pub fn evaluate_files(hypotheses: &Path, references: &Path, max_n: usize) -> Result<Evaluation> {
    let h = error::read_to_string(hypotheses)?;
    let r = error::read_to_string(references)?;
    evaluate_split(&h, &r, max_n)
}
