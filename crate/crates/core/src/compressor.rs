//! Restricted block compression.
//!
//! Odd levels run-length encode maximal runs of equal active symbols; even
//! levels cut the string at local minima of a random ranking and collapse
//! every block of length at least 2. A symbol is active at level `k` iff its
//! expansion is no longer than `ℓ_k = (4/3)^(ceil(k/2) - 1)`.

use crate::error::{Error, Result};
use crate::levels::{self, Threshold};
use crate::measures::{self, Ratio};
use crate::rlslp::{Rlslp, Rule, SymbolId};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};

/// Stream ids carved out of the master seed.
pub(crate) const STREAM_FINGERPRINT: u64 = 1 << 32;

/// Interns block and run rules so that equal content maps to one symbol.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    sigma: u32,
    rules: Vec<Rule>,
    exp_len: Vec<u64>,
    blocks: HashMap<Vec<SymbolId>, SymbolId>,
    runs: HashMap<(SymbolId, u64), SymbolId>,
}

impl SymbolTable {
    pub fn new(sigma: u32) -> Self {
        SymbolTable {
            sigma,
            exp_len: vec![1; sigma as usize],
            ..Default::default()
        }
    }

    /// Rebuilds the lookup maps of an existing grammar.
    pub fn from_grammar(g: &Rlslp) -> Self {
        let mut t = SymbolTable::new(g.sigma());
        for rule in g.rules() {
            match rule {
                Rule::Block(c) => {
                    t.block(c);
                }
                Rule::Run { base, count } => {
                    t.run(*base, *count);
                }
            }
        }
        t
    }

    pub fn len_of(&self, a: SymbolId) -> u64 {
        self.exp_len[a.index()]
    }

    pub fn num_symbols(&self) -> usize {
        self.exp_len.len()
    }

    pub fn lookup_block(&self, children: &[SymbolId]) -> Option<SymbolId> {
        self.blocks.get(children).copied()
    }

    pub fn lookup_run(&self, base: SymbolId, count: u64) -> Option<SymbolId> {
        self.runs.get(&(base, count)).copied()
    }

    fn push(&mut self, rule: Rule, len: u64) -> SymbolId {
        let id = SymbolId(self.exp_len.len() as u32);
        self.rules.push(rule);
        self.exp_len.push(len);
        id
    }

    pub fn block(&mut self, children: &[SymbolId]) -> SymbolId {
        if let Some(&id) = self.blocks.get(children) {
            return id;
        }
        let len = children.iter().map(|c| self.exp_len[c.index()]).sum();
        let id = self.push(Rule::Block(children.to_vec()), len);
        self.blocks.insert(children.to_vec(), id);
        id
    }

    pub fn run(&mut self, base: SymbolId, count: u64) -> SymbolId {
        if let Some(&id) = self.runs.get(&(base, count)) {
            return id;
        }
        let len = self.exp_len[base.index()] * count;
        let id = self.push(Rule::Run { base, count }, len);
        self.runs.insert((base, count), id);
        id
    }

    fn into_grammar(self, start: SymbolId) -> Rlslp {
        Rlslp::from_parts_unchecked(self.sigma, self.rules, start, self.exp_len)
    }
}

/// Ranks of the active symbols for every block-parsing level. Paused and
/// unknown symbols rank 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PermTable {
    levels: Vec<HashMap<SymbolId, u32>>,
}

impl PermTable {
    pub fn rank(&self, level: usize, a: SymbolId) -> u32 {
        self.levels
            .get(level)
            .and_then(|m| m.get(&a))
            .copied()
            .unwrap_or(0)
    }

    pub fn level(&self, level: usize) -> Option<&HashMap<SymbolId, u32>> {
        self.levels.get(level)
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn total_entries(&self) -> usize {
        self.levels.iter().map(HashMap::len).sum()
    }

    /// Entries of a level sorted by symbol id.
    pub fn sorted_level(&self, level: usize) -> Vec<(SymbolId, u32)> {
        let mut v: Vec<_> = self
            .levels
            .get(level)
            .map(|m| m.iter().map(|(&a, &r)| (a, r)).collect())
            .unwrap_or_default();
        v.sort_unstable();
        v
    }

    pub fn from_levels(levels: Vec<HashMap<SymbolId, u32>>) -> Self {
        PermTable { levels }
    }

    fn set_level(&mut self, level: usize, ranks: HashMap<SymbolId, u32>) {
        if self.levels.len() <= level {
            self.levels.resize_with(level + 1, HashMap::new);
        }
        self.levels[level] = ranks;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeightMode {
    /// Stop after `λ = 2 floor(log_{4/3}(n/δ))` levels and wrap the rest in
    /// a start rule.
    Capped,
    /// Run until a single symbol remains.
    Uncapped,
}

#[derive(Clone, Debug)]
pub struct CompressorConfig {
    pub seed: u64,
    pub height: HeightMode,
    /// Total number of attempts, including the first.
    pub attempts: u32,
    /// Accept an attempt once `g <= threshold_factor * bound_term`.
    pub threshold_factor: f64,
    /// Keep every level string for inspection.
    pub retain_levels: bool,
}

impl Default for CompressorConfig {
    fn default() -> Self {
        CompressorConfig {
            seed: 0,
            height: HeightMode::Capped,
            attempts: 5,
            threshold_factor: 32.0,
            retain_levels: false,
        }
    }
}

/// Per-level sizes of a compression run, plus the level strings themselves
/// when they were retained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelTrace {
    pub n: u64,
    /// `|S_k|` for `k = 0..=last`.
    pub sizes: Vec<u64>,
    pub levels: Option<Vec<Vec<SymbolId>>>,
    pub kappa: usize,
    pub lambda: Option<usize>,
}

impl LevelTrace {
    /// Index of the last generated level.
    pub fn last_level(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn level(&self, k: usize) -> Result<&[SymbolId]> {
        self.levels
            .as_ref()
            .and_then(|l| l.get(k))
            .map(Vec::as_slice)
            .ok_or(Error::LevelNotRetained(k))
    }

    /// `B_k`: prefix sums of expansion lengths over `S_k`, starting at 0.
    pub fn phrase_boundaries(&self, g: &Rlslp, k: usize) -> Result<Vec<u64>> {
        let level = self.level(k)?;
        let mut out = Vec::with_capacity(level.len() + 1);
        let mut acc = 0u64;
        out.push(0);
        for &a in level {
            acc += g.len_of(a);
            out.push(acc);
        }
        Ok(out)
    }

    /// `|S_k| < 1 + 4n / ℓ_{k+1}` for every level, checked exactly.
    pub fn size_violations(&self) -> Vec<usize> {
        let n = self.n as u128;
        self.sizes
            .iter()
            .enumerate()
            .filter(|&(k, &s)| {
                // (|S_k| - 1) * ℓ_{k+1} < 4n
                let t = Threshold::for_level(k + 1);
                s > 0 && t.cmp_scaled(s as u128 - 1, 4 * n) != std::cmp::Ordering::Less
            })
            .map(|(k, _)| k)
            .collect()
    }

    pub fn total_size(&self) -> u64 {
        self.sizes.iter().sum()
    }
}

/// Output of [`compress`].
#[derive(Clone, Debug)]
pub struct Compressed {
    pub grammar: Rlslp,
    pub perms: PermTable,
    pub trace: LevelTrace,
    /// Attempt index that produced the kept grammar (0-based).
    pub attempt: u32,
    pub attempts_made: u32,
    /// Set when no attempt met the size threshold.
    pub over_threshold: bool,
    pub delta: Ratio,
    pub bound_term: f64,
}

/// `rle` step: collapses maximal runs (length >= 2) of equal active symbols.
pub fn rle_level(
    input: &[SymbolId],
    active: impl Fn(SymbolId) -> bool,
    table: &mut SymbolTable,
) -> Vec<SymbolId> {
    let mut out = Vec::with_capacity(input.len());
    let mut i = 0;
    while i < input.len() {
        let a = input[i];
        let mut j = i + 1;
        if active(a) {
            while j < input.len() && input[j] == a {
                j += 1;
            }
        }
        if j - i >= 2 {
            out.push(table.run(a, (j - i) as u64));
        } else {
            out.push(a);
        }
        i = j;
    }
    out
}

/// Block boundaries of a block-parsing step: `cut[i]` is true when a boundary
/// follows `input[i]`.
pub fn block_boundaries(
    input: &[SymbolId],
    rank: impl Fn(SymbolId) -> u32,
    active: impl Fn(SymbolId) -> bool,
) -> Vec<bool> {
    let n = input.len();
    let mut cut = vec![true; n];
    for i in 0..n.saturating_sub(1) {
        let (a, b) = (input[i], input[i + 1]);
        if !active(a) || !active(b) {
            continue;
        }
        let local_min = i > 0 && {
            let r = rank(a);
            rank(input[i - 1]) > r && r < rank(b)
        };
        cut[i] = local_min;
    }
    cut
}

/// `bc` step: cuts after paused symbols, before paused symbols and after
/// local minima of `rank`, then collapses blocks of length >= 2.
pub fn bc_level(
    input: &[SymbolId],
    rank: impl Fn(SymbolId) -> u32,
    active: impl Fn(SymbolId) -> bool,
    table: &mut SymbolTable,
) -> Vec<SymbolId> {
    let cut = block_boundaries(input, rank, active);
    let mut out = Vec::with_capacity(input.len());
    let mut start = 0;
    for i in 0..input.len() {
        if cut[i] {
            let block = &input[start..=i];
            if block.len() == 1 {
                out.push(block[0]);
            } else {
                out.push(table.block(block));
            }
            start = i + 1;
        }
    }
    out
}

/// Uniform random ranking of `symbols` in which every paused symbol ranks
/// below every active one. Only active ranks are returned; they occupy
/// `[p+1 ..= p+a]` where `p` is the number of paused symbols.
pub fn sample_permutation(
    symbols: &[SymbolId],
    active: impl Fn(SymbolId) -> bool,
    rng: &mut ChaCha8Rng,
) -> HashMap<SymbolId, u32> {
    let mut act: Vec<SymbolId> = symbols.iter().copied().filter(|&a| active(a)).collect();
    let paused = symbols.len() - act.len();
    act.shuffle(rng);
    act.into_iter()
        .enumerate()
        .map(|(i, a)| (a, (paused + i + 1) as u32))
        .collect()
}

fn distinct_sorted(level: &[SymbolId]) -> Vec<SymbolId> {
    let mut v: Vec<SymbolId> = level.iter().copied().collect::<HashSet<_>>().into_iter().collect();
    v.sort_unstable();
    v
}

struct Attempt {
    grammar: Rlslp,
    perms: PermTable,
    trace: LevelTrace,
}

fn compress_once(
    text: &[u32],
    sigma: u32,
    lambda: Option<usize>,
    kappa: usize,
    rng: &mut ChaCha8Rng,
    retain: bool,
) -> Attempt {
    let mut table = SymbolTable::new(sigma);
    let mut perms = PermTable::default();
    let mut level: Vec<SymbolId> = text.iter().map(|&c| SymbolId(c)).collect();
    let mut sizes = vec![level.len() as u64];
    let mut kept = retain.then(|| vec![level.clone()]);
    let max_level = lambda.unwrap_or(kappa);
    let mut k = 1;
    while level.len() > 1 && k <= max_level {
        let ell = Threshold::for_level(k).floor();
        let symbols = distinct_sorted(&level);
        let active: HashSet<SymbolId> = symbols
            .iter()
            .copied()
            .filter(|a| table.len_of(*a) <= ell)
            .collect();
        let is_active = |a: SymbolId| active.contains(&a);
        let next = if k % 2 == 1 {
            rle_level(&level, is_active, &mut table)
        } else {
            let ranks = sample_permutation(&symbols, is_active, rng);
            let next = bc_level(
                &level,
                |a| ranks.get(&a).copied().unwrap_or(0),
                is_active,
                &mut table,
            );
            perms.set_level(k, ranks);
            next
        };
        level = next;
        sizes.push(level.len() as u64);
        if let Some(kept) = kept.as_mut() {
            kept.push(level.clone());
        }
        k += 1;
    }
    let start = if level.len() == 1 {
        level[0]
    } else {
        table.block(&level)
    };
    let grammar = table.into_grammar(start);
    Attempt {
        grammar,
        perms,
        trace: LevelTrace {
            n: text.len() as u64,
            sizes,
            levels: kept,
            kappa,
            lambda,
        },
    }
}

/// Compresses `text` over `[0..sigma)` into an RLSLP.
pub fn compress(text: &[u32], sigma: u32, cfg: &CompressorConfig) -> Result<Compressed> {
    if text.is_empty() {
        return Err(Error::invalid("cannot compress an empty text"));
    }
    if let Some(&c) = text.iter().find(|&&c| c >= sigma) {
        return Err(Error::invalid(format!("character {c} outside alphabet of size {sigma}")));
    }
    let profile = measures::substring_complexity(text);
    compress_with_profile(text, sigma, &profile, cfg)
}

/// As [`compress`], reusing an already computed complexity profile.
pub fn compress_with_profile(
    text: &[u32],
    sigma: u32,
    profile: &measures::ComplexityProfile,
    cfg: &CompressorConfig,
) -> Result<Compressed> {
    if text.is_empty() {
        return Err(Error::invalid("cannot compress an empty text"));
    }
    let n = text.len() as u64;
    let kappa = levels::kappa(n);
    let lambda = match cfg.height {
        HeightMode::Capped => Some(levels::lambda(n, profile.delta.num, profile.delta.den)),
        HeightMode::Uncapped => None,
    };
    let bound = measures::profile_bound_term(profile);
    let budget = cfg.attempts.max(1);
    let mut best: Option<(usize, u32, Attempt)> = None;
    let mut made = 0;
    let mut accepted = false;
    for attempt in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(attempt as u64);
        let a = compress_once(text, sigma, lambda, kappa, &mut rng, cfg.retain_levels);
        made += 1;
        let g = a.grammar.size();
        if best.as_ref().is_none_or(|(bg, _, _)| g < *bg) {
            best = Some((g, attempt, a));
        }
        if g as f64 <= cfg.threshold_factor * bound {
            accepted = true;
            break;
        }
    }
    let (_, attempt, a) = best.expect("at least one attempt");
    Ok(Compressed {
        grammar: a.grammar,
        perms: a.perms,
        trace: a.trace,
        attempt,
        attempts_made: made,
        over_threshold: !accepted,
        delta: profile.delta,
        bound_term: bound,
    })
}
