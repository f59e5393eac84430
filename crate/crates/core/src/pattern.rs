//! Parsing a query pattern with the text's stored rankings, and the
//! candidate cut positions derived from the parse.

use crate::compressor::{block_boundaries, PermTable, SymbolTable};
use crate::levels::Threshold;
use crate::rlslp::SymbolId;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    Known(SymbolId),
    /// A block or run of the pattern with no grammar symbol.
    Foreign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParsedEntry {
    pub entry: Entry,
    /// 0-based offset in the pattern.
    pub offset: u64,
    pub len: u64,
}

impl ParsedEntry {
    pub fn symbol(&self) -> Option<SymbolId> {
        match self.entry {
            Entry::Known(a) => Some(a),
            Entry::Foreign => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternParse {
    pub m: u64,
    /// `levels[k]` is the level-k string of the pattern; level 0 holds its
    /// characters.
    pub levels: Vec<Vec<ParsedEntry>>,
}

impl PatternParse {
    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn total_entries(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Boundaries of level `k` as 0-based positions `q'`: a boundary sits
    /// between `P[q']` and `P[q'+1]`.
    pub fn boundaries(&self, k: usize) -> Vec<u64> {
        let lvl = &self.levels[k];
        lvl[..lvl.len().saturating_sub(1)]
            .iter()
            .map(|e| e.offset + e.len - 1)
            .collect()
    }

    /// Known symbols of level `k`, or `None` when the level has a foreign
    /// entry.
    pub fn known_symbols(&self, k: usize) -> Option<Vec<SymbolId>> {
        self.levels[k].iter().map(ParsedEntry::symbol).collect()
    }
}

/// First level whose edge windows cover every boundary of a length-`m`
/// pattern: the smallest `k` with `2 α_{k+1} >= m - 1`.
pub fn window_height(m: u64) -> usize {
    let mut k = 0;
    while 2 * Threshold::for_level(k + 1).alpha() < m.saturating_sub(1) {
        k += 1;
    }
    k
}

/// Stand-in ids for foreign entries: unique per position and never equal to
/// a grammar symbol.
fn sentinel(i: usize) -> SymbolId {
    SymbolId(u32::MAX - i as u32)
}

/// Parses `p` level by level with the stored rankings, up to `max_level` or
/// until a single entry remains. Characters outside `[0, sigma)` become
/// foreign entries at level 0.
pub fn parse_pattern(
    p: &[u32],
    sigma: u32,
    table: &SymbolTable,
    perms: &PermTable,
    max_level: usize,
) -> PatternParse {
    let mut level: Vec<ParsedEntry> = p
        .iter()
        .enumerate()
        .map(|(i, &c)| ParsedEntry {
            entry: if c < sigma {
                Entry::Known(SymbolId(c))
            } else {
                Entry::Foreign
            },
            offset: i as u64,
            len: 1,
        })
        .collect();
    let mut levels = vec![level.clone()];
    let num = table.num_symbols() as u32;
    let mut k = 1;
    while level.len() > 1 && k <= max_level {
        let ell = Threshold::for_level(k).floor();
        let ids: Vec<SymbolId> = level
            .iter()
            .enumerate()
            .map(|(i, e)| e.symbol().unwrap_or_else(|| sentinel(i)))
            .collect();
        let active = |a: SymbolId| a.0 < num && table.len_of(a) <= ell;
        let mut next = Vec::with_capacity(level.len());
        if k % 2 == 1 {
            let mut i = 0;
            while i < level.len() {
                let a = ids[i];
                let mut j = i + 1;
                if active(a) {
                    while j < level.len() && ids[j] == a {
                        j += 1;
                    }
                }
                if j - i >= 2 {
                    let entry = match table.lookup_run(a, (j - i) as u64) {
                        Some(r) => Entry::Known(r),
                        None => Entry::Foreign,
                    };
                    next.push(merge(&level[i..j], entry));
                } else {
                    next.push(level[i]);
                }
                i = j;
            }
        } else {
            let cut = block_boundaries(&ids, |a| perms.rank(k, a), active);
            let mut start = 0;
            for i in 0..level.len() {
                if cut[i] {
                    if i == start {
                        next.push(level[i]);
                    } else {
                        let entry = match table.lookup_block(&ids[start..=i]) {
                            Some(b) => Entry::Known(b),
                            None => Entry::Foreign,
                        };
                        next.push(merge(&level[start..=i], entry));
                    }
                    start = i + 1;
                }
            }
        }
        level = next;
        levels.push(level.clone());
        k += 1;
    }
    PatternParse {
        m: p.len() as u64,
        levels,
    }
}

fn merge(span: &[ParsedEntry], entry: Entry) -> ParsedEntry {
    let first = span[0];
    let last = span[span.len() - 1];
    ParsedEntry {
        entry,
        offset: first.offset,
        len: last.offset + last.len - first.offset,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CutMode {
    #[default]
    Mcut,
    Exhaustive,
}

impl std::str::FromStr for CutMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mcut" => Ok(CutMode::Mcut),
            "exhaustive" => Ok(CutMode::Exhaustive),
            other => Err(format!("unknown cut mode `{other}` (expected mcut or exhaustive)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSet {
    /// Cut positions `q` in `[1, m-1]`, sorted; `P[..q]` is the left part.
    pub cuts: Vec<u64>,
    /// Window radius `α_{k+1}` used at each parse level `k`.
    pub alphas: Vec<u64>,
    pub mode: CutMode,
}

impl CutSet {
    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}

/// Cut positions to try for the pattern behind `parse`.
///
/// In mcut mode every level keeps its boundaries within `2α_{k+1}` of the
/// left end, those within `α_{k+1}` of the right end, and the leftmost
/// boundary in between.
pub fn candidate_cuts(parse: &PatternParse, mode: CutMode) -> CutSet {
    let m = parse.m;
    let alphas: Vec<u64> = (0..parse.levels.len())
        .map(|k| Threshold::for_level(k + 1).alpha())
        .collect();
    if mode == CutMode::Exhaustive {
        return CutSet {
            cuts: (1..m).collect(),
            alphas,
            mode,
        };
    }
    let mut set = BTreeSet::new();
    for (k, &alpha) in alphas.iter().enumerate() {
        let mut interior = None;
        for q in parse.boundaries(k) {
            if q < 2 * alpha || q + 1 + alpha >= m {
                set.insert(q + 1);
            } else if interior.is_none() {
                interior = Some(q);
            }
        }
        if let Some(q) = interior {
            set.insert(q + 1);
        }
    }
    CutSet {
        cuts: set.into_iter().collect(),
        alphas,
        mode,
    }
}

/// True when the parse proves the pattern absent from the text: a foreign
/// character, or a foreign entry both of whose boundaries lie strictly inside
/// the level's edge windows.
pub fn early_reject(parse: &PatternParse) -> bool {
    let m = parse.m;
    if parse.levels[0].iter().any(|e| e.entry == Entry::Foreign) {
        return true;
    }
    parse.levels.iter().enumerate().skip(1).any(|(k, lvl)| {
        let alpha = Threshold::for_level(k + 1).alpha();
        lvl.iter().any(|e| {
            e.entry == Entry::Foreign
                && e.offset >= 1
                && e.offset > 2 * alpha
                && e.offset + e.len - 1 + 1 + alpha < m
        })
    })
}
