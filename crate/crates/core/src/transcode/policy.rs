use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Probability that a syllable keeps its tone cell, plus the seed that keys
/// every retention draw.
///
/// Draw `j` of sentence `i` is word `j` of ChaCha8 stream `i` under key
/// `seed`, so each decision depends only on `(seed, i, j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TonePolicy {
    pub retain_probability: f64,
    pub seed: u64,
}

impl TonePolicy {
    pub fn new(retain_probability: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&retain_probability) {
            return Err(Error::InvalidArgument(format!(
                "tone retention probability {retain_probability} is outside [0, 1]"
            )));
        }
        Ok(TonePolicy { retain_probability, seed })
    }

    pub fn full_tone(seed: u64) -> Self {
        TonePolicy { retain_probability: 1.0, seed }
    }

    pub fn no_tone(seed: u64) -> Self {
        TonePolicy { retain_probability: 0.0, seed }
    }

    /// Real-world setting: nine tones in ten are dropped.
    pub fn ten_percent(seed: u64) -> Self {
        TonePolicy { retain_probability: 0.1, seed }
    }

    /// Sequential draws for one sentence, starting at syllable 0.
    pub fn draws(&self, sentence_index: u64) -> ToneDraws {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sentence_index);
        ToneDraws { rng }
    }

    /// The draw for one syllable, computed without replaying the ones before it.
    pub fn draw(&self, sentence_index: u64, syllable_index: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sentence_index);
        rng.set_word_pos(u128::from(syllable_index) * 2);
        unit_interval(rng.next_u64())
    }

    pub fn retains(&self, draw: f64) -> bool {
        draw < self.retain_probability
    }
}

fn unit_interval(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub struct ToneDraws {
    rng: ChaCha8Rng,
}

impl Iterator for ToneDraws {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(unit_interval(self.rng.next_u64()))
    }
}

/// The three dataset variants, or any other retention probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TonePreset {
    Full,
    None,
    Probability(f64),
}

impl TonePreset {
    pub const TEN_PERCENT: TonePreset = TonePreset::Probability(0.1);

    pub fn probability(self) -> f64 {
        match self {
            TonePreset::Full => 1.0,
            TonePreset::None => 0.0,
            TonePreset::Probability(p) => p,
        }
    }

    pub fn with_seed(self, seed: u64) -> TonePolicy {
        TonePolicy {
            retain_probability: self.probability(),
            seed,
        }
    }

    /// Directory-friendly name: `full-tone`, `no-tone`, `10per-tone`.
    pub fn dataset_name(self) -> String {
        match self {
            TonePreset::Full => "full-tone".into(),
            TonePreset::None => "no-tone".into(),
            TonePreset::Probability(p) => format!("{}per-tone", p * 100.0),
        }
    }
}

impl FromStr for TonePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let preset = match s.trim() {
            "full" | "full-tone" => TonePreset::Full,
            "none" | "no-tone" => TonePreset::None,
            "10per" | "10per-tone" | "ten-percent" => TonePreset::TEN_PERCENT,
            other => {
                let p = other
                    .strip_prefix("p=")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown tone policy {other:?}")))?;
                TonePolicy::new(p, 0)?;
                TonePreset::Probability(p)
            }
        };
        Ok(preset)
    }
}

impl fmt::Display for TonePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TonePreset::Full => f.write_str("full"),
            TonePreset::None => f.write_str("none"),
            TonePreset::Probability(p) => write!(f, "p={p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_access_matches_sequential() {
        let policy = TonePolicy::ten_percent(42);
        for sentence in [0u64, 1, 7, 1 << 40] {
            let seq: Vec<f64> = policy.draws(sentence).take(50).collect();
            for (j, d) in seq.iter().enumerate() {
                assert_eq!(*d, policy.draw(sentence, j as u64));
                assert!((0.0..1.0).contains(d));
            }
        }
    }

    #[test]
    fn streams_and_seeds_differ() {
        let a: Vec<f64> = TonePolicy::ten_percent(1).draws(0).take(8).collect();
        let b: Vec<f64> = TonePolicy::ten_percent(1).draws(1).take(8).collect();
        let c: Vec<f64> = TonePolicy::ten_percent(2).draws(0).take(8).collect();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn extremes() {
        let full = TonePolicy::full_tone(0);
        let none = TonePolicy::no_tone(0);
        for d in full.draws(3).take(1000) {
            assert!(full.retains(d));
            assert!(!none.retains(d));
        }
        assert!(full.retains(0.999_999_999));
        assert!(!none.retains(0.0));
    }

    #[test]
    fn preset_parsing() {
        assert_eq!("full".parse::<TonePreset>().unwrap(), TonePreset::Full);
        assert_eq!("none".parse::<TonePreset>().unwrap(), TonePreset::None);
        assert_eq!("p=0.1".parse::<TonePreset>().unwrap(), TonePreset::TEN_PERCENT);
        assert_eq!("p=0.25".parse::<TonePreset>().unwrap().probability(), 0.25);
        assert!("p=1.5".parse::<TonePreset>().is_err());
        assert!("sometimes".parse::<TonePreset>().is_err());
        assert_eq!(TonePreset::TEN_PERCENT.dataset_name(), "10per-tone");
        assert_eq!(TonePreset::TEN_PERCENT.to_string(), "p=0.1");
        assert!(TonePolicy::new(-0.1, 0).is_err());
    }
}
