//! Parallel braille/Chinese corpus construction.
//!
//! Sentences are transcoded independently (in parallel), split 8:1:1 by a
//! seeded shuffle and written as `braille<TAB>chinese` lines or JSON lines.

mod ingest;
mod split;
mod stats;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use ingest::{format_sentences, ingest_sentences, Sentence};
pub use split::{split_dataset, split_indices, DatasetSplit, SplitName, SplitRatios, MIN_SPLIT_PAIRS};
pub use stats::{compute_stats, render_stats_table, CellTokenCounter, MeanMedian, SplitStats, TokenCounter};

use crate::braille::BrailleScheme;
use crate::error::{Error, Result};
use crate::transcode::{transcribe, Lexicon, TonePolicy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelPair {
    pub braille: String,
    #[serde(rename = "text")]
    pub chinese: String,
    #[serde(rename = "idx")]
    pub sentence_index: u64,
}

/// Pairs plus the counters a build reports.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorpusBuild {
    pub pairs: Vec<ParallelPair>,
    pub counts: BuildCounts,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildCounts {
    pub sentences: usize,
    pub pairs: usize,
    pub skipped_unknown_character: usize,
    pub skipped_no_chinese: usize,
    pub dropped_characters: usize,
    pub syllables: usize,
    /// Syllables with tones 1-4, i.e. those that can carry a tone cell.
    pub tone_eligible_syllables: usize,
    pub retained_tones: usize,
}

/// Transcodes every sentence. Sentences containing a character the lexicon
/// does not know, or no Chinese at all, are skipped and counted; other
/// errors abort the build. Output order follows input order regardless of
/// how the work is scheduled.
pub fn build_parallel_corpus(
    sentences: &[Sentence],
    scheme: &BrailleScheme,
    lexicon: &Lexicon,
    policy: &TonePolicy,
) -> Result<CorpusBuild> {
    let results: Vec<_> = sentences
        .par_iter()
        .map(|s| transcribe(&s.text, scheme, lexicon, policy, s.index))
        .collect();

    let mut build = CorpusBuild::default();
    build.counts.sentences = sentences.len();
    for (sentence, result) in sentences.iter().zip(results) {
        let t = match result {
            Ok(t) => t,
            Err(Error::UnknownCharacter { ch, offset }) => {
                log::debug!("sentence {}: unknown character {ch:?} at {offset}, skipped", sentence.index);
                build.counts.skipped_unknown_character += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        build.counts.dropped_characters += t.dropped;
        if t.is_empty() {
            build.counts.skipped_no_chinese += 1;
            continue;
        }
        build.counts.syllables += t.syllables.len();
        build.counts.tone_eligible_syllables += t.syllables.iter().filter(|s| !s.syllable.tone.is_neutral()).count();
        build.counts.retained_tones += t.retained_tones();
        build.pairs.push(ParallelPair {
            braille: t.braille,
            chinese: t.text,
            sentence_index: sentence.index,
        });
    }
    build.counts.pairs = build.pairs.len();
    if build.counts.skipped_unknown_character > 0 {
        log::warn!(
            "skipped {} sentence(s) with characters missing from the lexicon",
            build.counts.skipped_unknown_character
        );
    }
    if build.counts.dropped_characters > 0 {
        log::info!("dropped {} non-Chinese character(s)", build.counts.dropped_characters);
    }
    Ok(build)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetFormat {
    #[default]
    Tsv,
    Jsonl,
}

impl DatasetFormat {
    pub fn extension(self) -> &'static str {
        match self {
            DatasetFormat::Tsv => "tsv",
            DatasetFormat::Jsonl => "jsonl",
        }
    }
}

impl std::fmt::Display for DatasetFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.extension())
    }
}

impl std::str::FromStr for DatasetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(DatasetFormat::Tsv),
            "jsonl" => Ok(DatasetFormat::Jsonl),
            other => Err(Error::InvalidArgument(format!("unknown dataset format {other:?}"))),
        }
    }
}

/// Serializes pairs: `braille<TAB>chinese` lines, or JSON objects with keys
/// `braille`, `text` and `idx`.
pub fn format_pairs(pairs: &[ParallelPair], format: DatasetFormat) -> Result<String> {
    let mut out = String::new();
    for p in pairs {
        match format {
            DatasetFormat::Tsv => {
                out.push_str(&p.braille);
                out.push('\t');
                out.push_str(&p.chinese);
            }
            DatasetFormat::Jsonl => out.push_str(&serde_json::to_string(p)?),
        }
        out.push('\n');
    }
    Ok(out)
}

/// Reads pairs from either dataset format. TSV lines carry no sentence id,
/// so the line position is used.
pub fn parse_pairs(source: &str, format: DatasetFormat) -> Result<Vec<ParallelPair>> {
    let mut out = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::CorpusParse { line: idx + 1, message };
        let pair = match format {
            DatasetFormat::Tsv => {
                let (braille, chinese) = line
                    .split_once('\t')
                    .ok_or_else(|| err("expected `braille<TAB>chinese`".into()))?;
                ParallelPair {
                    braille: braille.to_owned(),
                    chinese: chinese.to_owned(),
                    sentence_index: idx as u64,
                }
            }
            DatasetFormat::Jsonl => serde_json::from_str(line).map_err(|e| err(e.to_string()))?,
        };
        out.push(pair);
    }
    Ok(out)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}

/// Digest of an input or output file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

pub const DATASET_FORMAT_VERSION: u32 = 1;

/// Everything needed to regenerate a dataset directory byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub tool_version: String,
    pub format_version: u32,
    pub format: DatasetFormat,
    pub tone_policy: String,
    pub retain_probability: f64,
    pub tone_seed: u64,
    pub split_seed: u64,
    pub split_ratios: String,
    pub inputs: BTreeMap<String, FileDigest>,
    pub counts: BuildCounts,
    pub splits: BTreeMap<String, usize>,
    pub stats: Vec<SplitStats>,
    /// sha256 of each emitted data file, keyed by file name.
    pub outputs: BTreeMap<String, String>,
}

/// Options shared by every dataset variant written in one run.
#[derive(Clone, Debug)]
pub struct DatasetSpec<'a> {
    pub policy_name: String,
    pub policy: TonePolicy,
    pub split_seed: u64,
    pub ratios: SplitRatios,
    pub format: DatasetFormat,
    pub inputs: &'a BTreeMap<String, FileDigest>,
}

/// Builds, splits and writes one dataset variant into `out_dir`:
/// `train`, `valid`, `test` data files, `stats.txt` and `manifest.json`.
pub fn write_dataset(
    sentences: &[Sentence],
    scheme: &BrailleScheme,
    lexicon: &Lexicon,
    spec: &DatasetSpec<'_>,
    out_dir: &Path,
) -> Result<(DatasetManifest, [DatasetSplit; 3])> {
    let build = build_parallel_corpus(sentences, scheme, lexicon, &spec.policy)?;
    let splits = split_dataset(&build.pairs, spec.ratios, spec.split_seed)?;
    fs::create_dir_all(out_dir).map_err(|e| Error::file(out_dir, e))?;

    let mut outputs = BTreeMap::new();
    let mut sizes = BTreeMap::new();
    let mut stats = Vec::new();
    for split in &splits {
        let name = format!("{}.{}", split.name.file_stem(), spec.format.extension());
        let body = format_pairs(&split.pairs, spec.format)?;
        write_file(&out_dir.join(&name), body.as_bytes())?;
        outputs.insert(name, sha256_hex(body.as_bytes()));
        sizes.insert(split.name.file_stem().to_owned(), split.pairs.len());
        stats.push(compute_stats(split, &CellTokenCounter)?);
    }
    let table = render_stats_table(&stats);
    write_file(&out_dir.join("stats.txt"), table.as_bytes())?;
    outputs.insert("stats.txt".into(), sha256_hex(table.as_bytes()));

    let manifest = DatasetManifest {
        tool_version: crate::VERSION.to_owned(),
        format_version: DATASET_FORMAT_VERSION,
        format: spec.format,
        tone_policy: spec.policy_name.clone(),
        retain_probability: spec.policy.retain_probability,
        tone_seed: spec.policy.seed,
        split_seed: spec.split_seed,
        split_ratios: spec.ratios.to_string(),
        inputs: spec.inputs.clone(),
        counts: build.counts,
        splits: sizes,
        stats,
        outputs,
    };
    let json = serde_json::to_string_pretty(&manifest)? + "\n";
    write_file(&out_dir.join("manifest.json"), json.as_bytes())?;
    Ok((manifest, splits))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::file(path, e))
}
