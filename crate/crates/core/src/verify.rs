//! Oracle-backed verification of an index against its text.

use crate::index::Index;
use crate::pattern::CutMode;
use crate::query::QueryOptions;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// All 1-based starting positions of `p` in `s`, by direct scan.
pub fn naive_locate(s: &[u32], p: &[u32]) -> Vec<u64> {
    if p.is_empty() || p.len() > s.len() {
        return Vec::new();
    }
    s.windows(p.len())
        .enumerate()
        .filter(|(_, w)| *w == p)
        .map(|(i, _)| i as u64 + 1)
        .collect()
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub patterns: usize,
    pub max_m: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            patterns: 1000,
            max_m: 64,
            seed: 0,
        }
    }
}

/// Planted substrings of `text` alternating with uniformly random strings
/// over `[0, sigma)`, with lengths uniform in `[1, min(max_m, n)]`.
pub fn sample_patterns(text: &[u32], sigma: u32, cfg: &VerifyConfig) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = text.len();
    let top = cfg.max_m.min(n).max(1);
    (0..cfg.patterns)
        .map(|i| {
            let m = rng.random_range(1..=top);
            if i % 2 == 0 {
                let s = rng.random_range(0..=n - m);
                text[s..s + m].to_vec()
            } else {
                (0..m).map(|_| rng.random_range(0..sigma.max(1))).collect()
            }
        })
        .collect()
}

/// Largest cut set allowed for a length-`m` pattern.
pub fn cut_ceiling(m: usize) -> usize {
    let x = m + 2;
    512 * (usize::BITS - (x - 1).leading_zeros()) as usize
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub patterns: usize,
    /// locate (default options) differs from the naive scan.
    pub locate_mismatches: usize,
    /// count differs from the naive occurrence count.
    pub count_mismatches: usize,
    /// mcut and exhaustive cuts give different locate output.
    pub cut_mismatches: usize,
    /// Duplicates removed by locate's dedup over all runs.
    pub duplicates: u64,
    pub max_cut_set: usize,
    /// Patterns whose mcut cut set exceeds `512 ceil(log2(m+2))`.
    pub cut_ceiling_violations: usize,
    pub total_occurrences: u64,
    /// Up to a few failing patterns, for diagnostics.
    pub failures: Vec<Vec<u32>>,
}

impl VerifyReport {
    pub fn mismatches(&self) -> usize {
        self.locate_mismatches + self.count_mismatches + self.cut_mismatches
    }

    pub fn passed(&self) -> bool {
        self.mismatches() == 0 && self.duplicates == 0
    }

    fn merge(mut self, o: VerifyReport) -> VerifyReport {
        self.patterns += o.patterns;
        self.locate_mismatches += o.locate_mismatches;
        self.count_mismatches += o.count_mismatches;
        self.cut_mismatches += o.cut_mismatches;
        self.duplicates += o.duplicates;
        self.max_cut_set = self.max_cut_set.max(o.max_cut_set);
        self.cut_ceiling_violations += o.cut_ceiling_violations;
        self.total_occurrences += o.total_occurrences;
        self.failures.extend(o.failures);
        self.failures.truncate(5);
        self
    }
}

/// Checks one pattern against the oracle in every query mode.
pub fn check_pattern(index: &Index, text: &[u32], p: &[u32]) -> VerifyReport {
    let want = naive_locate(text, p);
    let mut r = VerifyReport {
        patterns: 1,
        total_occurrences: want.len() as u64,
        ..Default::default()
    };
    let exhaustive = QueryOptions {
        cuts: CutMode::Exhaustive,
        use_trie: false,
        early_reject: false,
    };
    let fast = index.locate_with(p, &QueryOptions::default());
    let slow = index.locate_with(p, &exhaustive);
    let count = index.count(p);
    match (&fast, &slow) {
        (Ok(f), Ok(s)) => {
            r.duplicates = f.duplicates + s.duplicates;
            if f.positions != want {
                r.locate_mismatches = 1;
            }
            if f.positions != s.positions || s.positions != want {
                r.cut_mismatches = 1;
            }
        }
        _ => {
            r.locate_mismatches = 1;
            r.cut_mismatches = 1;
        }
    }
    if count.ok() != Some(want.len() as u64) {
        r.count_mismatches = 1;
    }
    if p.len() >= 2 {
        let cuts = index.cut_set(p, CutMode::Mcut).len();
        r.max_cut_set = cuts;
        if cuts > cut_ceiling(p.len()) {
            r.cut_ceiling_violations = 1;
        }
    }
    if r.mismatches() > 0 {
        r.failures.push(p.to_vec());
    }
    r
}

/// Runs [`check_pattern`] over sampled patterns in parallel.
pub fn verify(index: &Index, text: &[u32], cfg: &VerifyConfig) -> VerifyReport {
    let patterns = sample_patterns(text, index.header().sigma, cfg);
    verify_patterns(index, text, &patterns)
}

pub fn verify_patterns(index: &Index, text: &[u32], patterns: &[Vec<u32>]) -> VerifyReport {
    patterns
        .par_iter()
        .map(|p| check_pattern(index, text, p))
        .reduce(VerifyReport::default, VerifyReport::merge)
}
