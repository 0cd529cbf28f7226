use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use zhbraille::braille::BrailleScheme;
use zhbraille::corpus::{
    compute_stats, ingest_sentences, parse_pairs, render_stats_table, write_dataset, CellTokenCounter, DatasetFormat,
    DatasetSplit, DatasetSpec, SplitName, SplitRatios, DATASET_FORMAT_VERSION,
};
use zhbraille::decode::{decode_braille, NgramModel, MODEL_FORMAT_VERSION};
use zhbraille::eval::evaluate_files;
use zhbraille::pipeline::{read_input, replay, run_pipeline, PipelineConfig, PipelineManifest, PIPELINE_FORMAT_VERSION};
use zhbraille::synth::{generate, ToyConfig};
use zhbraille::{transcribe, Lexicon, TonePreset};

mod exit;

fn version() -> &'static str {
    format!(
        "{} (dataset format {DATASET_FORMAT_VERSION}, model format {MODEL_FORMAT_VERSION}, pipeline format {PIPELINE_FORMAT_VERSION})",
        zhbraille::VERSION
    )
    .leak()
}

#[derive(Parser)]
#[command(name = "zhbraille", version = version(), about = "Chinese braille transcoding, corpus synthesis, decoding and BLEU")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Tables {
    /// Braille scheme table.
    #[arg(long, default_value = "data/scheme.tsv")]
    scheme: PathBuf,
    /// Pronunciation lexicon.
    #[arg(long, default_value = "data/lexicon.tsv")]
    lexicon: PathBuf,
}

impl Tables {
    fn load(&self) -> anyhow::Result<(BrailleScheme, Lexicon, BTreeMap<String, zhbraille::corpus::FileDigest>)> {
        let (lex_src, lex_digest) = read_input(&self.lexicon)?;
        let lexicon = Lexicon::parse(&lex_src).with_context(|| format!("lexicon {}", self.lexicon.display()))?;
        let (scheme_src, scheme_digest) = read_input(&self.scheme)?;
        let scheme = BrailleScheme::load(&scheme_src, lexicon.inventory())
            .with_context(|| format!("scheme {}", self.scheme.display()))?;
        let digests = BTreeMap::from([("lexicon".to_owned(), lex_digest), ("scheme".to_owned(), scheme_digest)]);
        Ok((scheme, lexicon, digests))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Transcode Chinese text to braille.
    Transcode {
        #[command(flatten)]
        tables: Tables,
        /// Sentence to transcode; otherwise lines are read from --input or stdin.
        #[arg(long, conflicts_with = "input")]
        text: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// full, none, 10per or p=<probability>.
        #[arg(long, default_value = "full")]
        tone_policy: TonePreset,
        #[arg(long, default_value_t = 0)]
        tone_seed: u64,
        /// Index of the first sentence; later lines count up from it.
        #[arg(long, default_value_t = 0)]
        sentence_index: u64,
    },
    /// Build train/valid/test braille-Chinese datasets from a sentence corpus.
    GenDataset {
        #[command(flatten)]
        tables: Tables,
        /// Corpus with `id<TAB>sentence` lines.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// full, none, 10per, p=<probability>, or `all` for the three
        /// standard variants in subdirectories.
        #[arg(long, default_value = "all")]
        tone_policy: String,
        #[arg(long, default_value_t = 0)]
        tone_seed: u64,
        #[arg(long, default_value_t = 0)]
        split_seed: u64,
        #[arg(long, default_value = "8:1:1")]
        ratios: SplitRatios,
        #[arg(long, default_value = "tsv")]
        format: DatasetFormat,
    },
    /// Print the statistics table of a dataset directory.
    Stats {
        dataset: PathBuf,
        #[arg(long, default_value = "tsv")]
        format: DatasetFormat,
        #[arg(long)]
        json: bool,
    },
    /// Train a character n-gram model on Chinese text.
    TrainLm {
        /// Dataset file (.tsv or .jsonl, Chinese side used) or plain text lines.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 0.01)]
        k: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode braille lines back to Chinese.
    Decode {
        #[command(flatten)]
        tables: Tables,
        #[arg(long)]
        model: PathBuf,
        /// Dataset file (.tsv or .jsonl, braille side used) or braille lines.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        beam: usize,
        /// Hypotheses file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corpus BLEU of line-aligned hypotheses against references.
    Eval {
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long = "ref", value_name = "FILE")]
        reference: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run gen-dataset, train-lm, decode and eval in one go.
    Pipeline {
        #[arg(long, conflicts_with = "manifest", required_unless_present = "manifest")]
        config: Option<PathBuf>,
        /// Re-run a recorded pipeline manifest after checking input digests.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Override one config key, as key=value. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Output directory; overrides the config's out_dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic homophonous lexicon and corpus for desk-scale runs.
    Synth {
        #[arg(long, default_value = "data/scheme.tsv")]
        scheme: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        sentences: usize,
        #[arg(long, default_value_t = 24)]
        bases: usize,
    },
}

/// Lines of a dataset file's chosen side, or raw lines for other files.
fn read_side(path: &Path, braille: bool) -> anyhow::Result<Vec<String>> {
    let (text, _) = read_input(path)?;
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("tsv") => Some(DatasetFormat::Tsv),
        Some("jsonl") => Some(DatasetFormat::Jsonl),
        _ => None,
    };
    Ok(match format {
        Some(f) => parse_pairs(&text, f)
            .with_context(|| format!("{}", path.display()))?
            .into_iter()
            .map(|p| if braille { p.braille } else { p.chinese })
            .collect(),
        None => text.lines().map(str::to_owned).collect(),
    })
}

fn write_output(path: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Transcode { tables, text, input, tone_policy, tone_seed, sentence_index } => {
            let (scheme, lexicon, _) = tables.load()?;
            let policy = tone_policy.with_seed(tone_seed);
            let lines: Vec<String> = match (text, input) {
                (Some(t), _) => vec![t],
                (None, Some(path)) => read_side(&path, false)?,
                (None, None) => io::stdin().lines().collect::<io::Result<_>>()?,
            };
            let mut out = String::new();
            for (i, line) in lines.iter().enumerate() {
                let t = transcribe(line, &scheme, &lexicon, &policy, sentence_index + i as u64)
                    .with_context(|| format!("transcode: line {}", i + 1))?;
                out.push_str(&t.braille);
                out.push('\n');
            }
            write_output(None, &out)
        }
        Command::GenDataset { tables, corpus, out, tone_policy, tone_seed, split_seed, ratios, format } => {
            let (scheme, lexicon, mut digests) = tables.load()?;
            let (corpus_src, corpus_digest) = read_input(&corpus)?;
            let sentences = ingest_sentences(&corpus_src).with_context(|| format!("corpus {}", corpus.display()))?;
            digests.insert("corpus".into(), corpus_digest);
            let variants: Vec<(TonePreset, PathBuf)> = if tone_policy == "all" {
                [TonePreset::Full, TonePreset::None, TonePreset::TEN_PERCENT]
                    .into_iter()
                    .map(|p| (p, out.join(p.dataset_name())))
                    .collect()
            } else {
                vec![(tone_policy.parse()?, out.clone())]
            };
            for (preset, dir) in variants {
                let spec = DatasetSpec {
                    policy_name: preset.to_string(),
                    policy: preset.with_seed(tone_seed),
                    split_seed,
                    ratios,
                    format,
                    inputs: &digests,
                };
                let (manifest, _) = write_dataset(&sentences, &scheme, &lexicon, &spec, &dir)
                    .with_context(|| format!("gen-dataset: {}", dir.display()))?;
                eprintln!(
                    "{}: {} pairs (train {}, valid {}, test {}), {} of {} tones kept",
                    dir.display(),
                    manifest.counts.pairs,
                    manifest.splits["train"],
                    manifest.splits["valid"],
                    manifest.splits["test"],
                    manifest.counts.retained_tones,
                    manifest.counts.tone_eligible_syllables,
                );
            }
            Ok(())
        }
        Command::Stats { dataset, format, json } => {
            let mut rows = Vec::new();
            for name in SplitName::ALL {
                let path = dataset.join(format!("{}.{}", name.file_stem(), format.extension()));
                let (text, _) = read_input(&path)?;
                let pairs = parse_pairs(&text, format).with_context(|| format!("{}", path.display()))?;
                let split = DatasetSplit { name, pairs };
                rows.push(compute_stats(&split, &CellTokenCounter).with_context(|| format!("{}", path.display()))?);
            }
            let body = if json { serde_json::to_string_pretty(&rows)? + "\n" } else { render_stats_table(&rows) };
            write_output(None, &body)
        }
        Command::TrainLm { input, order, k, out } => {
            let lines = read_side(&input, false)?;
            let model = NgramModel::train(lines.iter().map(String::as_str), order, k).context("train-lm")?;
            fs::write(&out, model.to_text()).with_context(|| format!("writing {}", out.display()))?;
            eprintln!("trained order-{order} model on {} sentences, |V| = {}", lines.len(), model.vocab_size());
            Ok(())
        }
        Command::Decode { tables, model, input, beam, out } => {
            let (scheme, lexicon, _) = tables.load()?;
            let (model_src, _) = read_input(&model)?;
            let lm = NgramModel::from_text(&model_src).with_context(|| format!("model {}", model.display()))?;
            let mut body = String::new();
            for (i, line) in read_side(&input, true)?.iter().enumerate() {
                let d = decode_braille(line, &scheme, lexicon.homophones(), &lm, beam)
                    .with_context(|| format!("decode: {} line {}", input.display(), i + 1))?;
                body.push_str(&d.text);
                body.push('\n');
            }
            write_output(out.as_deref(), &body)
        }
        Command::Eval { hyp, reference, max_n, json } => {
            let e = evaluate_files(&hyp, &reference, max_n).context("eval")?;
            if json {
                write_output(None, &(serde_json::to_string_pretty(&e)? + "\n"))
            } else {
                let p: Vec<String> = e
                    .corpus
                    .precisions
                    .iter()
                    .map(|p| p.map_or("-".to_owned(), |v| format!("{:.4}", v)))
                    .collect();
                write_output(
                    None,
                    &format!(
                        "BLEU = {:.2} (p = {}, BP = {:.4}, hyp_len = {}, ref_len = {}, char_acc = {:.4})\n",
                        e.corpus.score,
                        p.join("/"),
                        e.corpus.brevity_penalty,
                        e.corpus.candidate_length,
                        e.corpus.reference_length,
                        e.mean_accuracy
                    ),
                )
            }
        }
        Command::Pipeline { config, manifest, overrides, out } => {
            let report = if let Some(path) = manifest {
                if !overrides.is_empty() {
                    bail!(zhbraille::Error::InvalidArgument("--set cannot be combined with --manifest".into()));
                }
                let m = PipelineManifest::load(&path).with_context(|| format!("manifest {}", path.display()))?;
                let Some(dir) = out else {
                    bail!(zhbraille::Error::InvalidArgument("--out is required with --manifest".into()));
                };
                replay(&m, &dir)?
            } else {
                let path = config.expect("clap requires --config or --manifest");
                let mut cfg = PipelineConfig::load(&path).with_context(|| format!("config {}", path.display()))?;
                for kv in &overrides {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| zhbraille::Error::InvalidArgument(format!("--set expects KEY=VALUE, got {kv:?}")))?;
                    cfg.set(k.trim(), v.trim())?;
                }
                cfg.validate()?;
                let Some(dir) = out.or_else(|| cfg.out_dir.clone()) else {
                    bail!(zhbraille::Error::InvalidArgument("no output directory: pass --out or set out_dir".into()));
                };
                run_pipeline(&cfg, &dir)?
            };
            println!(
                "BLEU = {:.2}, char_acc = {:.4}, test sentences = {}",
                report.manifest.bleu.score, report.manifest.mean_accuracy, report.manifest.splits["test"]
            );
            Ok(())
        }
        Command::Synth { scheme, out, seed, sentences, bases } => {
            let (src, _) = read_input(&scheme)?;
            let scheme = BrailleScheme::parse(&src).with_context(|| format!("scheme {}", scheme.display()))?;
            let toy = generate(&scheme, &ToyConfig { seed, sentences, bases, ..ToyConfig::default() })?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            fs::write(out.join("lexicon.tsv"), &toy.lexicon_tsv)?;
            fs::write(out.join("corpus.txt"), toy.corpus_text())?;
            eprintln!("wrote {} sentences and {} characters to {}", sentences, toy.lexicon.char_count(), out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::code(&e))
        }
    }
}
