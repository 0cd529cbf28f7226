//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zhbraille::braille::{is_braille_char, parse_braille_syllables, BrailleCell};
use zhbraille::corpus::{sha256_hex, split_indices, SplitRatios};
use zhbraille::decode::{decode, Lattice, NgramModel, Token};
use zhbraille::eval::bleu;
use zhbraille::pipeline::{run_pipeline, PipelineConfig};
use zhbraille::synth::{generate, ToyConfig};
use zhbraille::{count_retained_tones, BrailleScheme, Lexicon, TonePolicy, TonePreset};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn shipped() -> (BrailleScheme, Lexicon) {
    let lexicon = Lexicon::parse(&fs::read_to_string(data("lexicon.tsv")).unwrap()).unwrap();
    let scheme = BrailleScheme::load(&fs::read_to_string(data("scheme.tsv")).unwrap(), lexicon.inventory()).unwrap();
    (scheme, lexicon)
}

fn braille_bijection() -> Outcome {
    for bits in 0u8..64 {
        let cell = BrailleCell::from_bits(bits).ok_or(format!("no cell for bits {bits}"))?;
        let ch = cell.to_char();
        check(ch as u32 == 0x2800 + bits as u32, format!("cell {bits} -> {ch:?}"))?;
        let back = BrailleCell::from_char(ch).map_err(|e| e.to_string())?;
        check(back == cell, format!("{ch:?} does not round-trip"))?;
        check(is_braille_char(ch), format!("{ch:?} not recognised"))?;
    }
    check(BrailleCell::from_char('\u{2840}').is_err(), "8-dot pattern accepted")?;
    check(BrailleCell::from_char('a').is_err(), "letter accepted")?;
    Ok("64/64 cells round-trip".into())
}

fn encoding_inverse() -> Outcome {
    let (scheme, lexicon) = shipped();
    let start = Instant::now();
    let mut checked = 0;
    let mut homographs = 0;
    for s in lexicon.inventory().syllables() {
        for include_tone in [true, false] {
            let cells = scheme.encode(s, include_tone).map_err(|e| format!("{s}: {e}"))?;
            let text: String = cells.cells().map(|c| c.to_char()).collect();
            let groups = parse_braille_syllables(&text, &scheme).map_err(|e| format!("{s}: {e}"))?;
            check(groups.len() == 1, format!("{s} parses as {} syllables", groups.len()))?;
            let cands = scheme.candidates(&groups[0].cells);
            check(cands.contains(&s), format!("{s} not recovered from {text}"))?;
            if include_tone && !s.tone.is_neutral() {
                check(cands.iter().all(|c| c.tone == s.tone), format!("{s}: tone not recovered"))?;
                homographs += usize::from(cands.len() > 1);
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed.as_secs_f64() < 1.0, format!("sweep took {elapsed:?}"))?;
    Ok(format!(
        "{checked} encodings over {} bases in {:.0?}; {homographs} toned syllables share cells with another base through shared finals",
        lexicon.inventory().len(),
        elapsed
    ))
}

fn tone_statistics() -> Outcome {
    let (scheme, lexicon) = shipped();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let chars = lexicon.characters();
    let sentences: Vec<String> = (0..1500)
        .map(|_| (0..rng.random_range(6..=12)).map(|_| chars[rng.random_range(0..chars.len())]).collect())
        .collect();
    let mut results = BTreeMap::new();
    for (name, policy) in [
        ("full", TonePolicy::full_tone(42)),
        ("10per", TonePolicy::ten_percent(42)),
        ("none", TonePolicy::no_tone(42)),
    ] {
        let (mut kept, mut total, mut eligible) = (0, 0, 0);
        for (i, s) in sentences.iter().enumerate() {
            let t = zhbraille::transcribe(s, &scheme, &lexicon, &policy, i as u64).map_err(|e| e.to_string())?;
            let (k, n) = count_retained_tones(&t.braille, &scheme).map_err(|e| e.to_string())?;
            check(k == t.retained_tones(), "re-parsed tone count differs")?;
            kept += k;
            total += n;
            eligible += t.syllables.iter().filter(|s| !s.syllable.tone.is_neutral()).count();
        }
        results.insert(name, (kept, eligible, total));
    }
    let (k10, e10, n10) = results["10per"];
    check(n10 >= 10_000, format!("only {n10} syllables"))?;
    let frac = k10 as f64 / e10 as f64;
    check((0.09..=0.11).contains(&frac), format!("10per fraction {frac:.4}"))?;
    let (kf, ef, _) = results["full"];
    check(kf == ef, format!("full kept {kf} of {ef}"))?;
    check(results["none"].0 == 0, "none kept tones")?;
    Ok(format!("{n10} syllables; 10per keeps {frac:.4}; full {kf}/{ef}; none 0"))
}

fn digest_split(n: usize, seed: u64) -> Result<(String, [usize; 3]), String> {
    let parts = split_indices(n, SplitRatios::EIGHT_ONE_ONE, seed).map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    for p in &parts {
        for i in p {
            bytes.extend_from_slice(&(*i as u64).to_le_bytes());
        }
        bytes.push(0xff);
    }
    let mut all: Vec<usize> = parts.iter().flatten().copied().collect();
    all.sort_unstable();
    check(all == (0..n).collect::<Vec<_>>(), "not a partition")?;
    Ok((sha256_hex(&bytes), [parts[0].len(), parts[1].len(), parts[2].len()]))
}

fn split_sizes() -> Outcome {
    let (d1, big) = digest_split(656_340, 17)?;
    let (d2, _) = digest_split(656_340, 17)?;
    check(big == [525_072, 65_634, 65_634], format!("{big:?}"))?;
    check(d1 == d2, "digest differs between runs")?;
    let (s1, small) = digest_split(10, 17)?;
    let (s2, _) = digest_split(10, 17)?;
    check(small == [8, 1, 1], format!("{small:?}"))?;
    check(s1 == s2, "small digest differs")?;
    Ok(format!("{big:?}, {small:?}, digest {}", &d1[..12]))
}

/// Textbook corpus BLEU by linear scans.
fn bleu_oracle(cands: &[Vec<u8>], refs: &[Vec<u8>]) -> f64 {
    let grams = |s: &[u8], n: usize| -> Vec<Vec<u8>> {
        if s.len() < n {
            vec![]
        } else {
            (0..=s.len() - n).map(|i| s[i..i + n].to_vec()).collect()
        }
    };
    let (mut m, mut t) = ([0f64; 4], [0f64; 4]);
    let (mut c, mut r) = (0f64, 0f64);
    for (cand, reference) in cands.iter().zip(refs) {
        c += cand.len() as f64;
        r += reference.len() as f64;
        for n in 1..=4 {
            let cg = grams(cand, n);
            let mut rg = grams(reference, n);
            t[n - 1] += cg.len() as f64;
            for g in cg {
                if let Some(pos) = rg.iter().position(|x| *x == g) {
                    rg.swap_remove(pos);
                    m[n - 1] += 1.0;
                }
            }
        }
    }
    let used: Vec<f64> = (0..4).filter(|&i| t[i] > 0.0).map(|i| m[i] / t[i]).collect();
    if used.contains(&0.0) {
        return 0.0;
    }
    let bp = if c >= r { 1.0 } else { (1.0 - r / c).exp() };
    100.0 * bp * (used.iter().map(|p| p.ln()).sum::<f64>() / used.len() as f64).exp()
}

fn bleu_criterion() -> Outcome {
    let corpus: Vec<Vec<u8>> = vec![vec![1, 2, 3, 4, 5], vec![6, 7, 8], vec![9]];
    let id = bleu(&corpus, &corpus, 4).map_err(|e| e.to_string())?.score;
    check(id == 100.0, format!("identity {id}"))?;
    let other: Vec<Vec<u8>> = corpus.iter().map(|s| s.iter().map(|x| x + 100).collect()).collect();
    let disjoint = bleu(&other, &corpus, 4).map_err(|e| e.to_string())?.score;
    check(disjoint == 0.0, format!("disjoint {disjoint}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst: f64 = 0.0;
    let mut nonzero = 0;
    let (mut all_c, mut all_r) = (Vec::new(), Vec::new());
    for _ in 0..50 {
        let r: Vec<u8> = (0..rng.random_range(1..=10)).map(|_| rng.random_range(0..4)).collect();
        let mut c: Vec<u8> = r.iter().map(|&x| if rng.random_bool(0.2) { rng.random_range(0..4) } else { x }).collect();
        c.truncate(rng.random_range(1..=10));
        let got = bleu(std::slice::from_ref(&c), std::slice::from_ref(&r), 4).map_err(|e| e.to_string())?.score;
        let want = bleu_oracle(std::slice::from_ref(&c), std::slice::from_ref(&r));
        worst = worst.max((got - want).abs());
        nonzero += usize::from(want > 0.0);
        all_c.push(c);
        all_r.push(r);
    }
    let corpus_diff = (bleu(&all_c, &all_r, 4).map_err(|e| e.to_string())?.score - bleu_oracle(&all_c, &all_r)).abs();
    worst = worst.max(corpus_diff);
    check(worst < 1e-9, format!("max deviation {worst:e}"))?;
    Ok(format!("identity 100, disjoint 0, 50 pairs ({nonzero} nonzero) + corpus within {worst:.1e}"))
}

fn exhaustive(lattice: &Lattice, model: &NgramModel) -> (String, f64) {
    fn walk(
        lattice: &Lattice,
        model: &NgramModel,
        ctx: &mut Vec<Token>,
        path: &mut String,
        score: f64,
        best: &mut Option<(String, f64)>,
    ) {
        let i = ctx.len();
        if i == lattice.len() {
            let total = score + model.log_prob(ctx, Token::Eos);
            let better = match best {
                None => true,
                Some((p, s)) => total > *s || (total == *s && path.as_str() < p.as_str()),
            };
            if better {
                *best = Some((path.clone(), total));
            }
            return;
        }
        for c in lattice.position(i) {
            let step = model.log_prob(ctx, Token::Char(c.ch)) + c.emission.ln();
            ctx.push(Token::Char(c.ch));
            path.push(c.ch);
            walk(lattice, model, ctx, path, score + step, best);
            path.pop();
            ctx.pop();
        }
    }
    let mut best = None;
    walk(lattice, model, &mut Vec::new(), &mut String::new(), 0.0, &mut best);
    best.expect("non-empty lattice")
}

fn decoder_optimality() -> Outcome {
    const POOL: &[char] = &['天', '地', '人', '和', '日', '月', '山', '水', '风', '云'];
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    let mut paths = 0u128;
    for case in 0..100 {
        let train: Vec<String> = (0..40)
            .map(|_| (0..rng.random_range(1..10)).map(|_| POOL[rng.random_range(0..8)]).collect())
            .collect();
        let order = 1 + case % 3;
        let model = NgramModel::train(train.iter().map(String::as_str), order, 0.05).map_err(|e| e.to_string())?;
        let lattice = Lattice::from_weights((0..rng.random_range(1..=8)).map(|_| {
            (0..rng.random_range(1..=6))
                .map(|_| (POOL[rng.random_range(0..POOL.len())], rng.random_range(1.0..50.0f64).floor()))
                .collect::<Vec<_>>()
        }))
        .map_err(|e| e.to_string())?;
        paths += lattice.path_count();
        let width = lattice.path_count() as usize;
        let got = decode(&lattice, &model, width).map_err(|e| e.to_string())?;
        let (text, score) = exhaustive(&lattice, &model);
        check(got.text == text, format!("case {case}: beam {} vs exhaustive {text}", got.text))?;
        check((got.score - score).abs() < 1e-9, format!("case {case}: score {} vs {score}", got.score))?;
    }
    Ok(format!("100 lattices (orders 1-3, {paths} paths total) match exhaustive argmax"))
}

fn toy_inputs(dir: &Path) -> PipelineConfig {
    let scheme_src = fs::read_to_string(data("scheme.tsv")).unwrap();
    let toy = generate(&BrailleScheme::parse(&scheme_src).unwrap(), &ToyConfig { sentences: 500, ..ToyConfig::default() })
        .unwrap();
    fs::write(dir.join("scheme.tsv"), &scheme_src).unwrap();
    fs::write(dir.join("lexicon.tsv"), &toy.lexicon_tsv).unwrap();
    fs::write(dir.join("corpus.txt"), toy.corpus_text()).unwrap();
    PipelineConfig::new(dir.join("scheme.tsv"), dir.join("lexicon.tsv"), dir.join("corpus.txt"))
}

fn context_resolves_ambiguity() -> Outcome {
    let start = Instant::now();
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut config = toy_inputs(tmp.path());
    let mut acc = BTreeMap::new();
    for (name, preset, order) in [
        ("full/bigram", TonePreset::Full, 2),
        ("10per/bigram", TonePreset::TEN_PERCENT, 2),
        ("none/bigram", TonePreset::None, 2),
        ("none/unigram", TonePreset::None, 1),
    ] {
        config.tone_policy = preset;
        config.lm_order = order;
        let report = run_pipeline(&config, &tmp.path().join(name.replace('/', "-"))).map_err(|e| e.to_string())?;
        acc.insert(name, (report.evaluation.mean_accuracy, report.manifest.bleu.score));
    }
    let a = |k: &str| acc[k].0;
    check(a("full/bigram") >= a("10per/bigram"), "full < 10per")?;
    check(a("10per/bigram") >= a("none/bigram"), "10per < none")?;
    check(a("none/bigram") >= a("none/unigram"), "bigram < unigram under none")?;
    check(acc["none/bigram"].1 < 100.0, "no-tone BLEU is 100; lexicon not ambiguous")?;
    check(start.elapsed().as_secs() < 300, "over 5 minutes")?;
    Ok(acc.iter().map(|(k, (a, b))| format!("{k} acc {a:.4} BLEU {b:.2}")).collect::<Vec<_>>().join("; "))
}

fn tree(dir: &Path, prefix: &str, out: &mut BTreeMap<String, Vec<u8>>) {
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = format!("{prefix}{}", path.file_name().unwrap().to_string_lossy());
        if path.is_dir() {
            tree(&path, &format!("{name}/"), out);
        } else {
            out.insert(name, fs::read(&path).unwrap());
        }
    }
}

fn pipeline_reproducibility() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = toy_inputs(tmp.path());
    let conf = tmp.path().join("run.conf");
    fs::write(&conf, config.to_string()).map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_zhbraille");
    let run = |args: &[&str]| -> Result<(), String> {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        check(out.status.success(), String::from_utf8_lossy(&out.stderr).into_owned())
    };
    let first = tmp.path().join("first");
    run(&["pipeline", "--config", conf.to_str().unwrap(), "--out", first.to_str().unwrap()])?;
    let manifest = first.join("manifest.json");
    let mut trees = Vec::new();
    for name in ["replay-a", "replay-b"] {
        let dir = tmp.path().join(name);
        run(&["pipeline", "--manifest", manifest.to_str().unwrap(), "--out", dir.to_str().unwrap()])?;
        let mut t = BTreeMap::new();
        tree(&dir, "", &mut t);
        trees.push(t);
    }
    let mut original = BTreeMap::new();
    tree(&first, "", &mut original);
    check(trees[0] == trees[1], "replays differ")?;
    check(trees[0] == original, "replay differs from original run")?;
    Ok(format!("{} artifacts byte-identical across original and two replays", original.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("unicode braille bijection", braille_bijection),
        ("encoding inverse over shipped inventory", encoding_inverse),
        ("tone policy statistics", tone_statistics),
        ("split sizes and determinism", split_sizes),
        ("BLEU oracle", bleu_criterion),
        ("decoder optimality", decoder_optimality),
        ("context resolves ambiguity", context_resolves_ambiguity),
        ("pipeline reproducibility", pipeline_reproducibility),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{:.1?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why} [{:.1?}]", start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
