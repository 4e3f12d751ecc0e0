//! Dataset filtering, concatenation and seeded splitting.

use std::collections::HashMap;

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conll::{Dataset, TaggedSentence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DedupReport {
    pub removed: usize,
    /// Removed duplicates whose tags differed from the kept copy.
    pub tag_conflicts: usize,
}

/// Keep the first sentence for every distinct token-surface sequence.
pub fn deduplicate(ds: &Dataset) -> (Dataset, DedupReport) {
    let mut first: HashMap<Vec<&str>, usize> = HashMap::new();
    let mut report = DedupReport::default();
    let mut keep = Vec::with_capacity(ds.len());
    for (i, sentence) in ds.sentences().iter().enumerate() {
        let key: Vec<&str> = sentence.surfaces().collect();
        match first.get(&key) {
            Some(&j) => {
                report.removed += 1;
                if ds.sentences()[j].tags() != sentence.tags() {
                    report.tag_conflicts += 1;
                }
                keep.push(false);
            }
            None => {
                first.insert(key, i);
                keep.push(true);
            }
        }
    }
    let out = ds
        .entries()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|((s, p), _)| (s.clone(), p.clone()))
        .collect();
    (out, report)
}

/// Remove sentences whose tags are all `O`.
pub fn drop_all_outside(ds: &Dataset) -> Dataset {
    ds.entries()
        .filter(|(s, _)| !s.is_all_outside())
        .map(|(s, p)| (s.clone(), p.clone()))
        .collect()
}

pub fn concat(a: &Dataset, b: &Dataset) -> Dataset {
    a.entries()
        .chain(b.entries())
        .map(|(s, p)| (s.clone(), p.clone()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub dev: f64,
    pub test: f64,
}

impl SplitRatios {
    pub fn new(train: f64, dev: f64, test: f64) -> Result<Self> {
        let all = [train, dev, test];
        if all.iter().any(|r| !r.is_finite() || *r <= 0.0) {
            return Err(Error::InvalidRatios(format!("{all:?}: every ratio must be positive")));
        }
        let sum: f64 = all.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidRatios(format!("{all:?} sums to {sum}, not 1")));
        }
        Ok(SplitRatios { train, dev, test })
    }

    /// Parse `r1,r2,r3`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidRatios(format!("{s:?}: {e}")))?;
        match parts.as_slice() {
            [a, b, c] => Self::new(*a, *b, *c),
            _ => Err(Error::InvalidRatios(format!("{s:?}: expected three values"))),
        }
    }

    /// `(train, dev, test)` sizes for `n` sentences. Dev and test are
    /// rounded to the nearest integer; train takes what is left.
    pub fn sizes(&self, n: usize) -> (usize, usize, usize) {
        let dev = ((n as f64) * self.dev).round() as usize;
        let dev = dev.min(n);
        let test = (((n as f64) * self.test).round() as usize).min(n - dev);
        (n - dev - test, dev, test)
    }
}

/// Uniform integer in `0..bound` by rejection sampling on 64-bit draws.
fn below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}

/// Fisher–Yates permutation of `0..n` driven by ChaCha8 seeded from `seed`
/// through `SeedableRng::seed_from_u64`.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = below(&mut rng, i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    perm
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Dataset,
    pub dev: Dataset,
    pub test: Dataset,
}

/// Shuffle with [`permutation`] and cut into train/dev/test in that order.
pub fn split(ds: &Dataset, ratios: SplitRatios, seed: u64) -> Split {
    let (n_train, n_dev, _) = ratios.sizes(ds.len());
    let perm = permutation(ds.len(), seed);
    let entries: Vec<(&TaggedSentence, &Option<std::sync::Arc<str>>)> = ds.entries().collect();
    let take = |idx: &[usize]| -> Dataset {
        idx.iter()
            .map(|&i| (entries[i].0.clone(), entries[i].1.clone()))
            .collect()
    };
    Split {
        train: take(&perm[..n_train]),
        dev: take(&perm[n_train..n_train + n_dev]),
        test: take(&perm[n_train + n_dev..]),
    }
}
