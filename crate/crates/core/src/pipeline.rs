//! End-to-end run: dataset generation, LM training on the training split,
//! decoding of the test braille and BLEU against the test Chinese.
//!
//! Configuration is flat `key = value` text. Every artifact depends only on
//! the configuration and the input files, whose digests go in the manifest.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braille::BrailleScheme;
use crate::corpus::{
    format_sentences, ingest_sentences, sha256_hex, write_dataset, write_file, BuildCounts, DatasetFormat, DatasetSpec,
    FileDigest, Sentence, SplitRatios,
};
use crate::decode::{decode_braille, NgramModel};
use crate::error::{Error, Result};
use crate::eval::{evaluate_split, BleuReport, Evaluation, DEFAULT_MAX_N};
use crate::transcode::{Lexicon, TonePreset};

pub const PIPELINE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub scheme: PathBuf,
    pub lexicon: PathBuf,
    pub corpus: PathBuf,
    pub tone_policy: TonePreset,
    pub tone_seed: u64,
    pub split_seed: u64,
    pub split_ratios: SplitRatios,
    pub lm_order: usize,
    pub lm_k: f64,
    pub beam_width: usize,
    pub max_n: usize,
    pub format: DatasetFormat,
    /// Not part of the reproducible record; omitted from written artifacts.
    pub out_dir: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn new(scheme: impl Into<PathBuf>, lexicon: impl Into<PathBuf>, corpus: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            scheme: scheme.into(),
            lexicon: lexicon.into(),
            corpus: corpus.into(),
            tone_policy: TonePreset::TEN_PERCENT,
            tone_seed: 0,
            split_seed: 0,
            split_ratios: SplitRatios::EIGHT_ONE_ONE,
            lm_order: 2,
            lm_k: 0.01,
            beam_width: 8,
            max_n: DEFAULT_MAX_N,
            format: DatasetFormat::Tsv,
            out_dir: None,
        }
    }

    pub const KEYS: [&'static str; 13] = [
        "scheme",
        "lexicon",
        "corpus",
        "tone_policy",
        "tone_seed",
        "split_seed",
        "split_ratios",
        "lm_order",
        "lm_k",
        "beam_width",
        "max_n",
        "format",
        "out_dir",
    ];

    /// Sets one key from its text form, as a config line or a CLI override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad value {value:?} for {key}")))
        }
        match key {
            "scheme" => self.scheme = value.into(),
            "lexicon" => self.lexicon = value.into(),
            "corpus" => self.corpus = value.into(),
            "tone_policy" => self.tone_policy = value.parse()?,
            "tone_seed" => self.tone_seed = num(key, value)?,
            "split_seed" => self.split_seed = num(key, value)?,
            "split_ratios" => self.split_ratios = value.parse()?,
            "lm_order" => self.lm_order = num(key, value)?,
            "lm_k" => self.lm_k = num(key, value)?,
            "beam_width" => self.beam_width = num(key, value)?,
            "max_n" => self.max_n = num(key, value)?,
            "format" => self.format = value.parse()?,
            "out_dir" => self.out_dir = Some(value.into()),
            other => return Err(Error::InvalidArgument(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Parses config text. `#` starts a comment line; `scheme`, `lexicon` and
    /// `corpus` are required, other keys default.
    pub fn parse(source: &str) -> Result<Self> {
        let mut config = PipelineConfig::new("", "", "");
        let mut seen = BTreeMap::new();
        for (idx, raw) in source.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::Config { line: idx + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(first) = seen.insert(key.to_owned(), idx + 1) {
                return Err(bad(format!("duplicate key {key:?}, first set on line {first}")));
            }
            config.set(key, value).map_err(|e| bad(e.to_string()))?;
        }
        for key in ["scheme", "lexicon", "corpus"] {
            if !seen.contains_key(key) {
                return Err(Error::Config { line: 0, message: format!("missing required key {key:?}") });
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&crate::error::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        NgramModel::train(["x"], self.lm_order, self.lm_k)?;
        if self.beam_width == 0 || self.max_n == 0 {
            return Err(Error::InvalidArgument("beam_width and max_n must be positive".into()));
        }
        Ok(())
    }

    /// Config text without `out_dir`, as recorded in artifacts.
    pub fn to_record(&self) -> String {
        let mut c = self.clone();
        c.out_dir = None;
        c.to_string()
    }
}

impl fmt::Display for PipelineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scheme = {}", self.scheme.display())?;
        writeln!(f, "lexicon = {}", self.lexicon.display())?;
        writeln!(f, "corpus = {}", self.corpus.display())?;
        writeln!(f, "tone_policy = {}", self.tone_policy)?;
        writeln!(f, "tone_seed = {}", self.tone_seed)?;
        writeln!(f, "split_seed = {}", self.split_seed)?;
        writeln!(f, "split_ratios = {}", self.split_ratios)?;
        writeln!(f, "lm_order = {}", self.lm_order)?;
        writeln!(f, "lm_k = {}", self.lm_k)?;
        writeln!(f, "beam_width = {}", self.beam_width)?;
        writeln!(f, "max_n = {}", self.max_n)?;
        writeln!(f, "format = {}", self.format)?;
        if let Some(out) = &self.out_dir {
            writeln!(f, "out_dir = {}", out.display())?;
        }
        Ok(())
    }
}

/// Parsed and digested inputs.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub scheme: BrailleScheme,
    pub lexicon: Lexicon,
    pub sentences: Vec<Sentence>,
    pub digests: BTreeMap<String, FileDigest>,
}

/// Reads a UTF-8 input file together with its digest.
pub fn read_input(path: &Path) -> Result<(String, FileDigest)> {
    let bytes = fs::read(path).map_err(|e| Error::file(path, e))?;
    let digest = FileDigest { path: path.display().to_string(), sha256: sha256_hex(&bytes) };
    let text = String::from_utf8(bytes)
        .map_err(|e| Error::file(path, std::io::Error::new(std::io::ErrorKind::InvalidData, e)))?;
    Ok((text, digest))
}

/// Reads and parses every input before anything runs.
pub fn load_inputs(config: &PipelineConfig) -> Result<Inputs> {
    let stage = |e| Error::Stage { stage: "load", error: Box::new(e) };
    let (lex_src, lex_digest) = read_input(&config.lexicon).map_err(stage)?;
    let (scheme_src, scheme_digest) = read_input(&config.scheme).map_err(stage)?;
    let (corpus_src, corpus_digest) = read_input(&config.corpus).map_err(stage)?;
    let lexicon = Lexicon::parse(&lex_src).map_err(stage)?;
    let scheme = BrailleScheme::load(&scheme_src, lexicon.inventory()).map_err(stage)?;
    let sentences = ingest_sentences(&corpus_src).map_err(stage)?;
    let digests = BTreeMap::from([
        ("corpus".to_owned(), corpus_digest),
        ("lexicon".to_owned(), lex_digest),
        ("scheme".to_owned(), scheme_digest),
    ]);
    Ok(Inputs { scheme, lexicon, sentences, digests })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LmSummary {
    pub order: usize,
    pub k: f64,
    pub vocab_size: usize,
    pub training_sentences: usize,
    pub test_perplexity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineManifest {
    pub tool_version: String,
    pub format_version: u32,
    /// Config text without `out_dir`.
    pub config: String,
    pub tone_seed: u64,
    pub split_seed: u64,
    pub inputs: BTreeMap<String, FileDigest>,
    pub counts: BuildCounts,
    pub splits: BTreeMap<String, usize>,
    pub lm: LmSummary,
    pub bleu: BleuReport,
    pub mean_accuracy: f64,
    /// sha256 of every artifact, keyed by path relative to the output directory.
    pub outputs: BTreeMap<String, String>,
}

impl PipelineManifest {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&crate::error::read_to_string(path)?)?)
    }

    pub fn pipeline_config(&self) -> Result<PipelineConfig> {
        PipelineConfig::parse(&self.config)
    }

    /// Fails unless every input file still has its recorded digest.
    pub fn verify_inputs(&self) -> Result<()> {
        for d in self.inputs.values() {
            let bytes = fs::read(&d.path).map_err(|e| Error::file(&d.path, e))?;
            let actual = sha256_hex(&bytes);
            if actual != d.sha256 {
                return Err(Error::DigestMismatch { path: d.path.clone().into(), expected: d.sha256.clone(), actual });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub manifest: PipelineManifest,
    pub evaluation: Evaluation,
}

/// Runs every stage, writing into `out_dir`:
/// `pipeline.conf`, `dataset/` (splits, stats, dataset manifest), `model.lm`,
/// `hypotheses.txt`, `references.txt`, `eval.json` and `manifest.json`.
pub fn run_pipeline(config: &PipelineConfig, out_dir: &Path) -> Result<PipelineReport> {
    config.validate()?;
    let inputs = load_inputs(config)?;
    run_with_inputs(config, &inputs, out_dir)
}

pub fn run_with_inputs(config: &PipelineConfig, inputs: &Inputs, out_dir: &Path) -> Result<PipelineReport> {
    fn at<T>(stage: &'static str, r: Result<T>) -> Result<T> {
        r.map_err(|e| Error::Stage { stage, error: Box::new(e) })
    }
    fn emit(out_dir: &Path, outputs: &mut BTreeMap<String, String>, name: &str, body: &[u8]) -> Result<()> {
        write_file(&out_dir.join(name), body)?;
        outputs.insert(name.to_owned(), sha256_hex(body));
        Ok(())
    }
    let mut outputs = BTreeMap::new();

    at("setup", fs::create_dir_all(out_dir).map_err(|e| Error::file(out_dir, e)))?;
    let record = config.to_record();
    at("setup", emit(out_dir, &mut outputs, "pipeline.conf", record.as_bytes()))?;

    // gen-dataset
    let policy = config.tone_policy.with_seed(config.tone_seed);
    let spec = DatasetSpec {
        policy_name: config.tone_policy.to_string(),
        policy,
        split_seed: config.split_seed,
        ratios: config.split_ratios,
        format: config.format,
        inputs: &inputs.digests,
    };
    let dataset_dir = out_dir.join("dataset");
    let (dataset, [train, _valid, test]) =
        at("gen-dataset", write_dataset(&inputs.sentences, &inputs.scheme, &inputs.lexicon, &spec, &dataset_dir))?;
    for (name, digest) in &dataset.outputs {
        outputs.insert(format!("dataset/{name}"), digest.clone());
    }
    let dataset_manifest = at("gen-dataset", crate::error::read_to_string(&dataset_dir.join("manifest.json")))?;
    outputs.insert("dataset/manifest.json".into(), sha256_hex(dataset_manifest.as_bytes()));

    // train-lm
    let model = at(
        "train-lm",
        NgramModel::train(train.pairs.iter().map(|p| p.chinese.as_str()), config.lm_order, config.lm_k),
    )?;
    at("train-lm", emit(out_dir, &mut outputs, "model.lm", model.to_text().as_bytes()))?;

    // decode
    let decoded: Vec<String> = at(
        "decode",
        test.pairs
            .par_iter()
            .map(|p| {
                decode_braille(&p.braille, &inputs.scheme, inputs.lexicon.homophones(), &model, config.beam_width)
                    .map(|d| d.text)
            })
            .collect::<Result<Vec<_>>>(),
    )?;
    let mut hyp_text = String::new();
    let mut ref_text = String::new();
    for (h, p) in decoded.iter().zip(&test.pairs) {
        let _ = writeln!(hyp_text, "{h}");
        let _ = writeln!(ref_text, "{}", p.chinese);
    }
    at("decode", emit(out_dir, &mut outputs, "hypotheses.txt", hyp_text.as_bytes()))?;
    at("decode", emit(out_dir, &mut outputs, "references.txt", ref_text.as_bytes()))?;

    // eval
    let evaluation = at("eval", evaluate_split(&hyp_text, &ref_text, config.max_n))?;
    let eval_json = at("eval", serde_json::to_string_pretty(&evaluation).map_err(Error::from))? + "\n";
    at("eval", emit(out_dir, &mut outputs, "eval.json", eval_json.as_bytes()))?;

    let manifest = PipelineManifest {
        tool_version: crate::VERSION.to_owned(),
        format_version: PIPELINE_FORMAT_VERSION,
        config: record,
        tone_seed: config.tone_seed,
        split_seed: config.split_seed,
        inputs: inputs.digests.clone(),
        counts: dataset.counts,
        splits: dataset.splits.clone(),
        lm: LmSummary {
            order: model.order(),
            k: model.smoothing(),
            vocab_size: model.vocab_size(),
            training_sentences: train.pairs.len(),
            test_perplexity: model.perplexity(test.pairs.iter().map(|p| p.chinese.as_str())),
        },
        bleu: evaluation.corpus.clone(),
        mean_accuracy: evaluation.mean_accuracy,
        outputs,
    };
    let json = at("manifest", serde_json::to_string_pretty(&manifest).map_err(Error::from))? + "\n";
    at("manifest", write_file(&out_dir.join("manifest.json"), json.as_bytes()))?;
    Ok(PipelineReport { manifest, evaluation })
}

/// Re-runs a recorded pipeline after checking its input digests.
pub fn replay(manifest: &PipelineManifest, out_dir: &Path) -> Result<PipelineReport> {
    manifest.verify_inputs().map_err(|e| Error::Stage { stage: "load", error: Box::new(e) })?;
    run_pipeline(&manifest.pipeline_config()?, out_dir)
}

/// Writes `sentences` as a corpus file; convenience for toy runs.
pub fn write_corpus(path: &Path, sentences: &[Sentence]) -> Result<()> {
    write_file(path, format_sentences(sentences).as_bytes())
}
