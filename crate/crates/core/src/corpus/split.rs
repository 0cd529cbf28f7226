use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ParallelPair;
use crate::error::{Error, Result};

pub const MIN_SPLIT_PAIRS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitName {
    Training,
    Validation,
    Test,
}

impl SplitName {
    pub const ALL: [SplitName; 3] = [SplitName::Training, SplitName::Validation, SplitName::Test];

    /// Dataset file stem: `train`, `valid`, `test`.
    pub fn file_stem(self) -> &'static str {
        match self {
            SplitName::Training => "train",
            SplitName::Validation => "valid",
            SplitName::Test => "test",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SplitName::Training => "Training",
            SplitName::Validation => "Validation",
            SplitName::Test => "Test",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: u32,
    pub valid: u32,
    pub test: u32,
}

impl SplitRatios {
    pub const EIGHT_ONE_ONE: SplitRatios = SplitRatios {
        train: 8,
        valid: 1,
        test: 1,
    };

    pub fn new(train: u32, valid: u32, test: u32) -> Result<Self> {
        if train == 0 || valid == 0 || test == 0 {
            return Err(Error::InvalidArgument(format!("split ratios must be positive, got {train}:{valid}:{test}")));
        }
        Ok(SplitRatios { train, valid, test })
    }

    /// `(train, valid, test)` sizes for `n` items: the first two are rounded
    /// to nearest (halves up), the test split takes the remainder.
    pub fn sizes(&self, n: usize) -> (usize, usize, usize) {
        let total = u128::from(self.train + self.valid + self.test);
        let round = |part: u32| ((2 * n as u128 * u128::from(part) + total) / (2 * total)) as usize;
        let train = round(self.train).min(n);
        let valid = round(self.valid).min(n - train);
        (train, valid, n - train - valid)
    }
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios::EIGHT_ONE_ONE
    }
}

impl FromStr for SplitRatios {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<u32> = s
            .split(':')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| Error::InvalidArgument(format!("split ratios {s:?} are not of the form a:b:c")))?;
        match parts.as_slice() {
            &[a, b, c] => SplitRatios::new(a, b, c),
            _ => Err(Error::InvalidArgument(format!("split ratios {s:?} are not of the form a:b:c"))),
        }
    }
}

impl fmt::Display for SplitRatios {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.train, self.valid, self.test)
    }
}

/// Partitions positions `0..n` by a seeded uniform shuffle followed by
/// contiguous assignment. Each part is returned in ascending order.
pub fn split_indices(n: usize, ratios: SplitRatios, seed: u64) -> Result<[Vec<usize>; 3]> {
    if n < MIN_SPLIT_PAIRS {
        return Err(Error::InsufficientData(format!(
            "need at least {MIN_SPLIT_PAIRS} pairs to split, got {n}"
        )));
    }
    let (train_n, valid_n, _) = ratios.sizes(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut train = order[..train_n].to_vec();
    let mut valid = order[train_n..train_n + valid_n].to_vec();
    let mut test = order[train_n + valid_n..].to_vec();
    train.sort_unstable();
    valid.sort_unstable();
    test.sort_unstable();
    Ok([train, valid, test])
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSplit {
    pub name: SplitName,
    pub pairs: Vec<ParallelPair>,
}

/// Splits pairs into training, validation and test sets. Pairs keep their
/// corpus order within each split.
pub fn split_dataset(pairs: &[ParallelPair], ratios: SplitRatios, seed: u64) -> Result<[DatasetSplit; 3]> {
    let parts = split_indices(pairs.len(), ratios, seed)?;
    let [train, valid, test] = parts.map(|idx| idx.into_iter().map(|i| pairs[i].clone()).collect::<Vec<_>>());
    Ok([
        DatasetSplit { name: SplitName::Training, pairs: train },
        DatasetSplit { name: SplitName::Validation, pairs: valid },
        DatasetSplit { name: SplitName::Test, pairs: test },
    ])
}
