//! Locating and counting pattern occurrences.
//!
//! An occurrence crossing a border of some rule is primary and is found on
//! the grid by splitting the pattern at a cut; every other occurrence is a
//! copy of one inside a smaller symbol and is reached by propagating
//! occurrences upward through the grammar tree.

use crate::error::{Error, Result};
use crate::grid::{GridPoint, PointKind};
use crate::index::Index;
use crate::pattern::{self, candidate_cuts, parse_pattern, window_height, CutMode, CutSet, PatternParse};
use crate::rlslp::{Rule, SymbolId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryOptions {
    pub cuts: CutMode,
    /// Reject short absent patterns with the short trie.
    pub use_trie: bool,
    /// Reject patterns whose parse has a foreign entry away from its edges.
    pub early_reject: bool,
}

impl Default for QueryOptions {
    fn default() -> Self {
        QueryOptions {
            cuts: CutMode::Mcut,
            use_trie: true,
            early_reject: true,
        }
    }
}

/// An occurrence at 0-based `offset` inside `exp(symbol)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccurrenceSeed {
    pub symbol: SymbolId,
    pub offset: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimaryHit {
    pub point: GridPoint,
    pub q: u64,
    pub seed: OccurrenceSeed,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocateReport {
    /// 1-based, sorted, distinct.
    pub positions: Vec<u64>,
    /// Positions removed by the final dedup.
    pub duplicates: u64,
    pub cuts: usize,
    pub primary: usize,
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

impl Index {
    fn in_alphabet(&self, p: &[u32]) -> bool {
        p.iter().all(|&c| c < self.header.sigma)
    }

    /// Parses `p` as far as its cut windows need.
    pub fn parse(&self, p: &[u32]) -> PatternParse {
        let max = (self.header.text_levels as usize).min(window_height(p.len() as u64));
        parse_pattern(p, self.header.sigma, &self.table, &self.perms, max)
    }

    pub fn cut_set(&self, p: &[u32], mode: CutMode) -> CutSet {
        candidate_cuts(&self.parse(p), mode)
    }

    /// Shared early exits. `Ok(true)` means the pattern is known absent.
    fn prefilter(&self, p: &[u32], opts: &QueryOptions) -> Result<bool> {
        if p.is_empty() {
            return Err(Error::invalid("empty pattern"));
        }
        if !self.in_alphabet(p) || p.len() as u64 > self.header.n {
            return Ok(true);
        }
        if opts.use_trie && p.len() <= self.short_trie.depth() && !self.short_trie.contains(p) {
            return Ok(true);
        }
        Ok(false)
    }

    /// Grid hits for every cut in `cuts`, one per primary occurrence.
    pub fn primary_occurrences(&self, p: &[u32], cuts: &CutSet) -> Vec<PrimaryHit> {
        let m = p.len() as u64;
        let rev: Vec<u32> = p.iter().rev().copied().collect();
        let g = &self.grammar;
        let mut out = Vec::new();
        for &q in &cuts.cuts {
            let xr = self.grid.x_axis.prefix_range(g, &rev[(m - q) as usize..]);
            if xr.is_empty() {
                continue;
            }
            let yr = self.grid.y_axis.prefix_range(g, &p[q as usize..]);
            if yr.is_empty() {
                continue;
            }
            self.grid.range_report(xr, yr, &mut |pt| match pt.kind {
                PointKind::Block => {
                    if let Some(offset) = pt.offset.checked_sub(q) {
                        out.push(PrimaryHit {
                            point: *pt,
                            q,
                            seed: OccurrenceSeed {
                                symbol: pt.parent,
                                offset,
                            },
                        });
                    }
                }
                PointKind::Run { count, base_len } => {
                    let need = ceil_div(m - q, base_len);
                    for j in 0..count.saturating_sub(need) {
                        out.push(PrimaryHit {
                            point: *pt,
                            q,
                            seed: OccurrenceSeed {
                                symbol: pt.parent,
                                offset: (1 + j) * base_len - q,
                            },
                        });
                    }
                }
            });
        }
        out
    }

    /// Text positions (1-based, unsorted) of every copy of the seeds.
    pub fn secondary_expand(&self, seeds: impl IntoIterator<Item = OccurrenceSeed>) -> Vec<u64> {
        let g = &self.grammar;
        let start = g.start();
        let mut out = Vec::new();
        let mut stack: Vec<OccurrenceSeed> = seeds.into_iter().collect();
        while let Some(OccurrenceSeed { symbol, offset }) = stack.pop() {
            if symbol == start {
                out.push(offset + 1);
                continue;
            }
            for occ in &self.occurrences[symbol.index()] {
                match g.rule(occ.parent) {
                    Some(Rule::Run { base, count }) if *base == symbol && occ.offset == 0 => {
                        let bl = g.len_of(symbol);
                        for j in 0..*count {
                            stack.push(OccurrenceSeed {
                                symbol: occ.parent,
                                offset: offset + j * bl,
                            });
                        }
                    }
                    _ => stack.push(OccurrenceSeed {
                        symbol: occ.parent,
                        offset: occ.offset + offset,
                    }),
                }
            }
        }
        out
    }

    /// Every position of character `c`.
    pub fn locate_single_char(&self, c: u32) -> Vec<u64> {
        if c >= self.header.sigma {
            return Vec::new();
        }
        let mut v = self.secondary_expand([OccurrenceSeed {
            symbol: SymbolId(c),
            offset: 0,
        }]);
        v.sort_unstable();
        v
    }

    pub fn locate_with(&self, p: &[u32], opts: &QueryOptions) -> Result<LocateReport> {
        if self.prefilter(p, opts)? {
            return Ok(LocateReport::default());
        }
        let (mut positions, cuts, primary) = if p.len() == 1 {
            (self.locate_single_char(p[0]), 0, 0)
        } else {
            let parse = self.parse(p);
            if opts.early_reject && pattern::early_reject(&parse) {
                return Ok(LocateReport::default());
            }
            let cuts = candidate_cuts(&parse, opts.cuts);
            let hits = self.primary_occurrences(p, &cuts);
            let primary = hits.len();
            let pos = self.secondary_expand(hits.into_iter().map(|h| h.seed));
            (pos, cuts.len(), primary)
        };
        positions.sort_unstable();
        let before = positions.len();
        positions.dedup();
        let duplicates = (before - positions.len()) as u64;
        self.add_duplicates(duplicates);
        Ok(LocateReport {
            positions,
            duplicates,
            cuts,
            primary,
        })
    }

    /// Sorted 1-based starting positions of `p`.
    pub fn locate(&self, p: &[u32]) -> Result<Vec<u64>> {
        Ok(self.locate_with(p, &QueryOptions::default())?.positions)
    }

    pub fn count_with(&self, p: &[u32], opts: &QueryOptions) -> Result<u64> {
        if self.prefilter(p, opts)? {
            return Ok(0);
        }
        if p.len() == 1 {
            return Ok(self.weights.get(SymbolId(p[0])));
        }
        let parse = self.parse(p);
        if opts.early_reject && pattern::early_reject(&parse) {
            return Ok(0);
        }
        let cuts = candidate_cuts(&parse, opts.cuts);
        let m = p.len() as u64;
        let rev: Vec<u32> = p.iter().rev().copied().collect();
        let g = &self.grammar;
        let mut total = 0u64;
        for &q in &cuts.cuts {
            let xr = self.grid.x_axis.prefix_range(g, &rev[(m - q) as usize..]);
            if xr.is_empty() {
                continue;
            }
            let yr = self.grid.y_axis.prefix_range(g, &p[q as usize..]);
            if yr.is_empty() {
                continue;
            }
            total += self.grid.range_weight_sum(xr, yr);
            for pt in self.grid.run_points_in(xr, yr) {
                if let PointKind::Run { count, base_len } = pt.kind {
                    total += pt.weight * count.saturating_sub(ceil_div(m - q, base_len));
                }
            }
        }
        Ok(total)
    }

    pub fn count(&self, p: &[u32]) -> Result<u64> {
        self.count_with(p, &QueryOptions::default())
    }

    pub fn exists(&self, p: &[u32]) -> Result<bool> {
        Ok(self.count(p)? > 0)
    }

    /// [`Index::locate`] on a raw query, encoded with the index alphabet.
    pub fn locate_bytes(&self, p: &[u8], opts: &QueryOptions) -> Result<Vec<u64>> {
        match self.encode_query(p)? {
            Some(enc) => Ok(self.locate_with(&enc, opts)?.positions),
            None => Ok(Vec::new()),
        }
    }

    pub fn count_bytes(&self, p: &[u8], opts: &QueryOptions) -> Result<u64> {
        match self.encode_query(p)? {
            Some(enc) => self.count_with(&enc, opts),
            None => Ok(0),
        }
    }

    fn encode_query(&self, p: &[u8]) -> Result<Option<Vec<u32>>> {
        let enc = self.alphabet.encode(p);
        if p.is_empty() || enc.as_ref().is_some_and(Vec::is_empty) {
            return Err(Error::invalid("empty pattern"));
        }
        Ok(enc)
    }
}
