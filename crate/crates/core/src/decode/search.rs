//! Beam search over a lattice under an n-gram model.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::lattice::Lattice;
use super::ngram::{NgramModel, TokenId, BOS, EOS};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    pub text: String,
    /// Natural-log score: LM log-probabilities of every character and the
    /// end token, plus log emission probabilities.
    pub score: f64,
}

#[derive(Clone)]
struct Hyp {
    path: Vec<char>,
    history: Vec<TokenId>,
    score: f64,
}

/// Higher score first; equal scores fall back to the lexicographically
/// smaller path.
fn rank(a: &Hyp, b: &Hyp) -> Ordering {
    b.score.partial_cmp(&a.score).unwrap_or(Ordering::Equal).then_with(|| a.path.cmp(&b.path))
}

fn shift(history: &[TokenId], next: TokenId) -> Vec<TokenId> {
    let mut h = history.to_vec();
    if !h.is_empty() {
        h.remove(0);
        h.push(next);
    }
    h
}

/// Best path found by beam search with widths 1 through `beam_width`.
/// Hypotheses sharing an LM state are merged before pruning. Plain beam
/// search can lose score as the beam widens, so every narrower width is
/// also tried and the best result kept; this stops early once a width runs
/// without pruning, since that result is exact.
pub fn decode(lattice: &Lattice, model: &NgramModel, beam_width: usize) -> Result<Decoded> {
    if beam_width == 0 {
        return Err(Error::InvalidArgument("beam width must be at least 1".into()));
    }
    let mut best: Option<Hyp> = None;
    for width in 1..=beam_width {
        let (hyp, pruned) = beam_search(lattice, model, width)?;
        if best.as_ref().map_or(true, |b| rank(&hyp, b) == Ordering::Less) {
            best = Some(hyp);
        }
        if !pruned {
            break;
        }
    }
    let best = best.expect("at least one width is searched");
    Ok(Decoded {
        text: best.path.into_iter().collect(),
        score: best.score,
    })
}

/// One beam pass. Also reports whether any hypothesis was pruned.
fn beam_search(lattice: &Lattice, model: &NgramModel, width: usize) -> Result<(Hyp, bool)> {
    let mut pruned = false;
    let mut beam = vec![Hyp {
        path: Vec::with_capacity(lattice.len()),
        history: vec![BOS; model.order() - 1],
        score: 0.0,
    }];
    for (position, cands) in lattice.positions().enumerate() {
        if cands.is_empty() {
            return Err(Error::UndecodablePosition { position });
        }
        let mut merged: HashMap<Vec<TokenId>, Hyp> = HashMap::new();
        for hyp in &beam {
            for cand in cands {
                let id = model.char_id(cand.ch);
                let step = model.prob_ids(&hyp.history, id).ln() + cand.emission.ln();
                let mut path = hyp.path.clone();
                path.push(cand.ch);
                let next = Hyp {
                    history: shift(&hyp.history, id),
                    path,
                    score: hyp.score + step,
                };
                match merged.get_mut(&next.history) {
                    Some(best) if rank(&next, best) != Ordering::Less => {}
                    Some(best) => *best = next,
                    None => {
                        merged.insert(next.history.clone(), next);
                    }
                }
            }
        }
        beam = merged.into_values().collect();
        beam.sort_by(rank);
        pruned |= beam.len() > width;
        beam.truncate(width);
    }
    for hyp in &mut beam {
        hyp.score += model.prob_ids(&hyp.history, EOS).ln();
    }
    let best = beam.into_iter().min_by(rank).expect("beam is never empty");
    Ok((best, pruned))
}

/// Exact-position match rate: characters equal at the same index, divided by
/// the longer length. Two empty strings match fully.
pub fn character_accuracy(hypothesis: &str, reference: &str) -> f64 {
    let h: Vec<char> = hypothesis.chars().collect();
    let r: Vec<char> = reference.chars().collect();
    let longest = h.len().max(r.len());
    if longest == 0 {
        return 1.0;
    }
    let same = h.iter().zip(&r).filter(|(a, b)| a == b).count();
    same as f64 / longest as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decode::Token;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Scores every path directly from the public probability API.
    fn exhaustive(lattice: &Lattice, model: &NgramModel) -> (String, f64) {
        let mut best: Option<(String, f64)> = None;
        let n = lattice.len();
        let mut idx = vec![0usize; n];
        loop {
            let mut ctx: Vec<Token> = Vec::new();
            let mut score = 0.0;
            let mut text = String::new();
            for (i, &j) in idx.iter().enumerate() {
                let c = lattice.position(i)[j];
                score += model.log_prob(&ctx, Token::Char(c.ch)) + c.emission.ln();
                ctx.push(Token::Char(c.ch));
                text.push(c.ch);
            }
            score += model.log_prob(&ctx, Token::Eos);
            let better = match &best {
                None => true,
                Some((t, s)) => score > *s || (score == *s && text < *t),
            };
            if better {
                best = Some((text, score));
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return best.unwrap();
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < lattice.position(i).len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    const ALPHABET: &[char] = &['甲', '乙', '丙', '丁', '戊', '己', '庚', '辛', '壬', '癸'];

    fn random_case(rng: &mut ChaCha8Rng, order: usize) -> (Lattice, NgramModel) {
        let sentences: Vec<String> = (0..30)
            .map(|_| (0..rng.random_range(1..8)).map(|_| ALPHABET[rng.random_range(0..7)]).collect())
            .collect();
        let model = NgramModel::train(sentences.iter().map(String::as_str), order, 0.1).unwrap();
        let len = rng.random_range(1..=6);
        let positions: Vec<Vec<(char, f64)>> = (0..len)
            .map(|_| {
                (0..rng.random_range(1..=5))
                    .map(|_| (ALPHABET[rng.random_range(0..ALPHABET.len())], rng.random_range(1.0..20.0)))
                    .collect()
            })
            .collect();
        (Lattice::from_weights(positions).unwrap(), model)
    }

    #[test]
    fn wide_beam_matches_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for order in 1..=3 {
            for _ in 0..60 {
                let (lattice, model) = random_case(&mut rng, order);
                let (text, score) = exhaustive(&lattice, &model);
                let got = decode(&lattice, &model, 64).unwrap();
                assert_eq!(got.text, text);
                assert!((got.score - score).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bigram_beam_of_max_width_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let (lattice, model) = random_case(&mut rng, 2);
            let width = lattice.positions().map(<[_]>::len).max().unwrap();
            let (text, _) = exhaustive(&lattice, &model);
            assert_eq!(decode(&lattice, &model, width).unwrap().text, text);
        }
    }

    #[test]
    fn score_does_not_drop_as_beam_widens() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut violations = 0;
        for _ in 0..400 {
            let (lattice, model) = random_case(&mut rng, 3);
            let mut prev = f64::NEG_INFINITY;
            for b in 1..=8 {
                let s = decode(&lattice, &model, b).unwrap().score;
                if s < prev - 1e-12 {
                    violations += 1;
                }
                prev = prev.max(s);
            }
        }
        assert_eq!(violations, 0);
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let model = NgramModel::train(["甲乙"], 1, 1.0).unwrap();
        let lattice = Lattice::from_weights(vec![vec![('乙', 1.0), ('甲', 1.0)]]).unwrap();
        // 甲 and 乙 have equal unigram probability and equal emission.
        let got = decode(&lattice, &model, 1).unwrap();
        assert_eq!(got.text, "乙");
    }

    #[test]
    fn zero_beam_rejected() {
        let model = NgramModel::train(["甲"], 2, 0.1).unwrap();
        let lattice = Lattice::from_weights(vec![vec![('甲', 1.0)]]).unwrap();
        assert!(matches!(decode(&lattice, &model, 0), Err(Error::InvalidArgument(_))));
        let empty = decode(&Lattice::default(), &model, 1).unwrap();
        assert_eq!(empty.text, "");
    }

    #[test]
    fn accuracy() {
        assert_eq!(character_accuracy("AB", "AC"), 0.5);
        assert_eq!(character_accuracy("", ""), 1.0);
        assert_eq!(character_accuracy("ABC", "AB"), 2.0 / 3.0);
        assert_eq!(character_accuracy("", "AB"), 0.0);
    }
}
