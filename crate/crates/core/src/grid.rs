//! The two-dimensional grid of grammar borders.
//!
//! Every border between consecutive children of a block rule `A -> A_1..A_s`
//! contributes a point whose x coordinate is the reversed expansion of the
//! left child and whose y coordinate is the expansion of the remaining
//! children. A run rule `A -> A_1^s` contributes the single point
//! `(exp(A_1)^rev, exp(A_1)^(s-1))`. Both axes are sorted lexicographically,
//! and a compacted trie over each axis answers prefix-range queries with one
//! verifying extraction.

use crate::extract::{Backward, Forward};
use crate::rlslp::{Rlslp, Rule, SymbolId};
use crate::suffix::SubstringOrder;
use crate::tree::{GrammarTree, WeightTable};
use crate::wavelet::WaveletMatrix;
use std::cmp::Ordering;

/// An axis string, referenced through the grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxisHandle {
    /// `exp(symbol)` read right to left.
    Reversed(SymbolId),
    /// `exp(symbol)[offset..]`.
    Suffix { symbol: SymbolId, offset: u64 },
}

impl AxisHandle {
    pub fn len(&self, g: &Rlslp) -> u64 {
        match *self {
            AxisHandle::Reversed(a) => g.len_of(a),
            AxisHandle::Suffix { symbol, offset } => g.len_of(symbol) - offset,
        }
    }

    pub fn is_empty(&self, g: &Rlslp) -> bool {
        self.len(g) == 0
    }

    /// The first `l` characters of the axis string (fewer if it is shorter).
    pub fn prefix(&self, g: &Rlslp, l: usize) -> Vec<u32> {
        match *self {
            AxisHandle::Reversed(a) => Backward::new(g, a, g.len_of(a)).take(l).collect(),
            AxisHandle::Suffix { symbol, offset } => Forward::new(g, symbol, offset).take(l).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrieNode {
    /// String depth: LCP of the node's strings, or the full length at a leaf.
    pub depth: u64,
    pub lo: u32,
    pub hi: u32,
    pub first_child: u32,
    pub num_children: u32,
}

/// Compacted trie over a sorted list of distinct strings that stores only
/// branching characters. A lookup follows the query's characters at branch
/// depths and then checks a single candidate.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BlindTrie {
    pub nodes: Vec<TrieNode>,
    /// Branch key per child edge: `0` for a string ending at the parent's
    /// depth, `c + 1` for character `c`.
    pub child_keys: Vec<u32>,
    pub child_ids: Vec<u32>,
}

impl BlindTrie {
    /// `len(i)` is the length of string `i`, `lcp(i)` the LCP of strings
    /// `i-1` and `i`, and `char_at(i, d)` character `d` of string `i`.
    pub fn build(
        count: usize,
        len: impl Fn(usize) -> u64,
        lcp: impl Fn(usize) -> u64,
        char_at: impl Fn(usize, u64) -> u32,
    ) -> Self {
        if count == 0 {
            return BlindTrie::default();
        }
        struct Tmp {
            depth: u64,
            lo: u32,
            hi: u32,
            leaf: bool,
            children: Vec<u32>,
        }
        let mut tmp: Vec<Tmp> = Vec::with_capacity(2 * count);
        let leaf = |tmp: &mut Vec<Tmp>, i: usize| {
            tmp.push(Tmp {
                depth: len(i),
                lo: i as u32,
                hi: i as u32,
                leaf: true,
                children: Vec::new(),
            });
            tmp.len() as u32 - 1
        };
        let internal = |tmp: &mut Vec<Tmp>, depth: u64, child: u32| {
            let (lo, hi) = (tmp[child as usize].lo, tmp[child as usize].hi);
            tmp.push(Tmp {
                depth,
                lo,
                hi,
                leaf: false,
                children: vec![child],
            });
            tmp.len() as u32 - 1
        };
        let attach = |tmp: &mut Vec<Tmp>, parent: u32, child: u32| {
            let (lo, hi) = (tmp[child as usize].lo, tmp[child as usize].hi);
            let p = &mut tmp[parent as usize];
            p.children.push(child);
            p.lo = p.lo.min(lo);
            p.hi = p.hi.max(hi);
        };
        let first = leaf(&mut tmp, 0);
        let mut stack = vec![first];
        for i in 1..count {
            let l = lcp(i);
            loop {
                let top = *stack.last().unwrap();
                if tmp[top as usize].depth <= l {
                    break;
                }
                stack.pop();
                match stack.last() {
                    Some(&below) if tmp[below as usize].depth >= l => attach(&mut tmp, below, top),
                    _ => {
                        let u = internal(&mut tmp, l, top);
                        stack.push(u);
                        break;
                    }
                }
            }
            let top = *stack.last().unwrap();
            if tmp[top as usize].leaf {
                // the previous string is a prefix of this one
                stack.pop();
                let u = internal(&mut tmp, l, top);
                stack.push(u);
            }
            let v = leaf(&mut tmp, i);
            stack.push(v);
        }
        while stack.len() > 1 {
            let top = stack.pop().unwrap();
            let below = *stack.last().unwrap();
            attach(&mut tmp, below, top);
        }
        let root = stack[0];

        // Renumber in preorder so that the root is node 0.
        let mut trie = BlindTrie::default();
        let mut order = vec![root];
        let mut new_id = vec![u32::MAX; tmp.len()];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            new_id[v as usize] = head as u32;
            head += 1;
            order.extend(tmp[v as usize].children.iter().copied());
        }
        for &v in &order {
            let t = &tmp[v as usize];
            let first_child = trie.child_ids.len() as u32;
            let mut kids: Vec<(u32, u32)> = t
                .children
                .iter()
                .map(|&c| {
                    let lo = tmp[c as usize].lo as usize;
                    let key = if len(lo) == t.depth {
                        0
                    } else {
                        char_at(lo, t.depth) + 1
                    };
                    (key, new_id[c as usize])
                })
                .collect();
            kids.sort_unstable();
            for (k, c) in kids {
                trie.child_keys.push(k);
                trie.child_ids.push(c);
            }
            trie.nodes.push(TrieNode {
                depth: t.depth,
                lo: t.lo,
                hi: t.hi,
                first_child,
                num_children: t.children.len() as u32,
            });
        }
        trie
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The candidate node for `q`: the first node on `q`'s path with depth
    /// at least `|q|`, or `None` when the path leaves the trie.
    pub fn descend(&self, q: &[u32]) -> Option<&TrieNode> {
        let mut node = self.nodes.first()?;
        let m = q.len() as u64;
        while node.depth < m {
            if node.num_children == 0 {
                return None;
            }
            let key = q[node.depth as usize] + 1;
            let lo = node.first_child as usize;
            let hi = lo + node.num_children as usize;
            let pos = self.child_keys[lo..hi].binary_search(&key).ok()?;
            node = &self.nodes[self.child_ids[lo + pos] as usize];
        }
        Some(node)
    }
}

/// Inclusive rank interval; `lo > hi` means empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankRange {
    pub lo: u32,
    pub hi: u32,
}

impl RankRange {
    pub const EMPTY: RankRange = RankRange { lo: 1, hi: 0 };

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn contains(&self, r: u32) -> bool {
        self.lo <= r && r <= self.hi
    }
}

/// One sorted axis: distinct strings by rank plus the trie over them.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Axis {
    pub handles: Vec<AxisHandle>,
    pub trie: BlindTrie,
}

impl Axis {
    pub fn len(&self) -> usize {
        self.handles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.handles.is_empty()
    }

    /// Ranks of the axis strings having `q` as a prefix.
    pub fn prefix_range(&self, g: &Rlslp, q: &[u32]) -> RankRange {
        if self.handles.is_empty() {
            return RankRange::EMPTY;
        }
        let Some(node) = self.trie.descend(q) else {
            return RankRange::EMPTY;
        };
        if !q.is_empty() && self.handles[node.lo as usize].prefix(g, q.len()) != q {
            return RankRange::EMPTY;
        }
        RankRange {
            lo: node.lo,
            hi: node.hi,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Block,
    Run { count: u64, base_len: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub x: u32,
    pub y: u32,
    pub parent: SymbolId,
    /// Index of the right-hand child: the border sits before child `child`
    /// (block rules), or before the second copy (`1`, run rules).
    pub child: u32,
    /// Offset of the border inside `exp(parent)`.
    pub offset: u64,
    pub kind: PointKind,
    pub weight: u64,
}

#[derive(Clone, Debug)]
pub struct Grid {
    pub x_axis: Axis,
    pub y_axis: Axis,
    /// Block points sorted by `(x, y)`.
    pub block_points: Vec<GridPoint>,
    /// Run points sorted by `(x, y)`.
    pub run_points: Vec<GridPoint>,
    /// First block point with x rank `>= r`, for every `r` in `0..=|x_axis|`.
    x_start: Vec<u32>,
    matrix: WaveletMatrix,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.x_axis == other.x_axis
            && self.y_axis == other.y_axis
            && self.block_points == other.block_points
            && self.run_points == other.run_points
    }
}

impl Eq for Grid {}

/// A text position where each grammar symbol occurs.
fn occurrence_positions(g: &Rlslp, tree: &GrammarTree, text: &[u32]) -> Vec<u64> {
    let mut pos = vec![u64::MAX; g.num_symbols()];
    for (i, &c) in text.iter().enumerate() {
        if pos[c as usize] == u64::MAX {
            pos[c as usize] = i as u64;
        }
    }
    for (a, slot) in pos.iter_mut().enumerate().skip(g.sigma() as usize) {
        if let Some(s) = tree.internal_start(SymbolId(a as u32)) {
            *slot = s;
        }
    }
    pos
}

/// Sorts `items` (text substrings `(pos, len)`) with `order`, merges equal
/// strings and returns the distinct representatives plus each item's rank.
fn sort_axis(
    items: &[(usize, usize)],
    order: &SubstringOrder,
) -> (Vec<usize>, Vec<u32>) {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    idx.sort_by(|&a, &b| order.cmp(items[a], items[b]));
    let mut reps = Vec::new();
    let mut rank = vec![0u32; items.len()];
    for (k, &i) in idx.iter().enumerate() {
        if k == 0 || order.cmp(items[idx[k - 1]], items[i]) != Ordering::Equal {
            reps.push(i);
        }
        rank[i] = reps.len() as u32 - 1;
    }
    (reps, rank)
}

fn build_axis(
    text: &[u32],
    order: &SubstringOrder,
    items: &[(usize, usize)],
    handles: &[AxisHandle],
) -> (Axis, Vec<u32>) {
    let (reps, rank) = sort_axis(items, order);
    let trie = BlindTrie::build(
        reps.len(),
        |i| items[reps[i]].1 as u64,
        |i| order.lcp_sub(items[reps[i - 1]], items[reps[i]]) as u64,
        |i, d| text[items[reps[i]].0 + d as usize],
    );
    (
        Axis {
            handles: reps.iter().map(|&i| handles[i]).collect(),
            trie,
        },
        rank,
    )
}

impl Grid {
    /// Builds the grid of `g`, whose expansion is `text`.
    pub fn build(g: &Rlslp, tree: &GrammarTree, weights: &WeightTable, text: &[u32]) -> Self {
        let n = text.len();
        let pos = occurrence_positions(g, tree, text);
        let rev: Vec<u32> = text.iter().rev().copied().collect();

        // (parent, child, offset, kind, left symbol)
        let mut raw = Vec::new();
        for (r, rule) in g.rules().iter().enumerate() {
            let a = SymbolId(g.sigma() + r as u32);
            if weights.get(a) == 0 {
                continue;
            }
            match rule {
                Rule::Block(children) => {
                    let offs = g.child_offsets(a);
                    for i in 1..children.len() {
                        raw.push((a, i as u32, offs[i], PointKind::Block, children[i - 1]));
                    }
                }
                Rule::Run { base, count } => {
                    let bl = g.len_of(*base);
                    raw.push((
                        a,
                        1,
                        bl,
                        PointKind::Run {
                            count: *count,
                            base_len: bl,
                        },
                        *base,
                    ));
                }
            }
        }

        let x_items: Vec<(usize, usize)> = raw
            .iter()
            .map(|&(_, _, _, _, left)| {
                let (p, l) = (pos[left.index()] as usize, g.len_of(left) as usize);
                (n - p - l, l)
            })
            .collect();
        let x_handles: Vec<AxisHandle> = raw.iter().map(|r| AxisHandle::Reversed(r.4)).collect();
        let y_items: Vec<(usize, usize)> = raw
            .iter()
            .map(|&(a, _, off, _, _)| {
                let p = pos[a.index()] as usize + off as usize;
                (p, (g.len_of(a) - off) as usize)
            })
            .collect();
        let y_handles: Vec<AxisHandle> = raw
            .iter()
            .map(|&(a, _, off, _, _)| AxisHandle::Suffix { symbol: a, offset: off })
            .collect();

        let (x_axis, x_rank) = build_axis(&rev, &SubstringOrder::new(&rev), &x_items, &x_handles);
        let (y_axis, y_rank) = build_axis(text, &SubstringOrder::new(text), &y_items, &y_handles);

        let mut block_points = Vec::new();
        let mut run_points = Vec::new();
        for (i, &(parent, child, offset, kind, _)) in raw.iter().enumerate() {
            let p = GridPoint {
                x: x_rank[i],
                y: y_rank[i],
                parent,
                child,
                offset,
                kind,
                weight: weights.get(parent),
            };
            match kind {
                PointKind::Block => block_points.push(p),
                PointKind::Run { .. } => run_points.push(p),
            }
        }
        Self::from_parts(x_axis, y_axis, block_points, run_points)
    }

    /// Assembles a grid from its stored parts and rebuilds the range
    /// structure.
    pub fn from_parts(
        x_axis: Axis,
        y_axis: Axis,
        mut block_points: Vec<GridPoint>,
        mut run_points: Vec<GridPoint>,
    ) -> Self {
        let key = |p: &GridPoint| (p.x, p.y, p.parent, p.child);
        block_points.sort_unstable_by_key(key);
        run_points.sort_unstable_by_key(key);
        let nx = x_axis.len();
        let mut x_start = vec![0u32; nx + 1];
        let mut j = 0;
        for (r, slot) in x_start.iter_mut().enumerate() {
            while j < block_points.len() && (block_points[j].x as usize) < r {
                j += 1;
            }
            *slot = j as u32;
        }
        let ys: Vec<u32> = block_points.iter().map(|p| p.y).collect();
        let ws: Vec<u64> = block_points.iter().map(|p| p.weight).collect();
        let max_y = ys.iter().copied().max().unwrap_or(0);
        let matrix = WaveletMatrix::new(&ys, &ws, max_y);
        Grid {
            x_axis,
            y_axis,
            block_points,
            run_points,
            x_start,
            matrix,
        }
    }

    pub fn num_points(&self) -> usize {
        self.block_points.len() + self.run_points.len()
    }

    /// Block-point index range covering x ranks in `xr`.
    fn x_span(&self, xr: RankRange) -> (usize, usize) {
        if xr.is_empty() || self.x_start.len() <= 1 {
            return (0, 0);
        }
        let hi = (xr.hi as usize + 1).min(self.x_start.len() - 1);
        (
            self.x_start[(xr.lo as usize).min(hi)] as usize,
            self.x_start[hi] as usize,
        )
    }

    fn run_span(&self, xr: RankRange) -> &[GridPoint] {
        if xr.is_empty() {
            return &[];
        }
        let a = self.run_points.partition_point(|p| p.x < xr.lo);
        let b = self.run_points.partition_point(|p| p.x <= xr.hi);
        &self.run_points[a..b]
    }

    /// Every point (block and run) inside `xr × yr`.
    pub fn range_report(&self, xr: RankRange, yr: RankRange, f: &mut impl FnMut(&GridPoint)) {
        if xr.is_empty() || yr.is_empty() {
            return;
        }
        let (a, b) = self.x_span(xr);
        self.matrix
            .report(a, b, yr.lo, yr.hi, &mut |i| f(&self.block_points[i as usize]));
        for p in self.run_span(xr) {
            if yr.contains(p.y) {
                f(p);
            }
        }
    }

    /// Run points inside `xr × yr`.
    pub fn run_points_in(&self, xr: RankRange, yr: RankRange) -> impl Iterator<Item = &GridPoint> {
        let span = if yr.is_empty() { &[][..] } else { self.run_span(xr) };
        span.iter().filter(move |p| yr.contains(p.y))
    }

    /// Total weight of the block points inside `xr × yr`.
    pub fn range_weight_sum(&self, xr: RankRange, yr: RankRange) -> u64 {
        if xr.is_empty() || yr.is_empty() {
            return 0;
        }
        let (a, b) = self.x_span(xr);
        self.matrix.weight_sum(a, b, yr.lo, yr.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compressor::{compress, CompressorConfig};
    use crate::tree::{build_grammar_tree, symbol_weights};
    use rand::{Rng, SeedableRng};

    fn s(i: u32) -> SymbolId {
        SymbolId(i)
    }

    fn grid_of(g: &Rlslp) -> Grid {
        let text = g.expand(g.start()).unwrap();
        let (tree, _) = build_grammar_tree(g);
        Grid::build(g, &tree, &symbol_weights(g), &text)
    }

    fn strings(g: &Rlslp, axis: &Axis) -> Vec<Vec<u32>> {
        axis.handles.iter().map(|h| h.prefix(g, usize::MAX)).collect()
    }

    #[test]
    fn abab_points() {
        let g = Rlslp::new(
            2,
            vec![Rule::Block(vec![s(0), s(1)]), Rule::Block(vec![s(2), s(2)])],
            s(3),
        )
        .unwrap();
        let grid = grid_of(&g);
        assert!(grid.run_points.is_empty());
        let mut pts: Vec<(SymbolId, u32)> = grid.block_points.iter().map(|p| (p.parent, p.child)).collect();
        pts.sort();
        assert_eq!(pts, vec![(s(2), 1), (s(3), 1)]);
        // x strings: rev("a") = "a", rev("ab") = "ba"; y strings: "b", "ab"
        assert_eq!(strings(&g, &grid.x_axis), vec![vec![0], vec![1, 0]]);
        assert_eq!(strings(&g, &grid.y_axis), vec![vec![0, 1], vec![1]]);
    }

    #[test]
    fn run_point() {
        let g = Rlslp::new(1, vec![Rule::Run { base: s(0), count: 4 }], s(1)).unwrap();
        let grid = grid_of(&g);
        assert!(grid.block_points.is_empty());
        assert_eq!(grid.run_points.len(), 1);
        let p = grid.run_points[0];
        assert_eq!(p.kind, PointKind::Run { count: 4, base_len: 1 });
        assert_eq!(strings(&g, &grid.y_axis), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn blind_trie_by_hand() {
        // "ab", "abab", "b"
        let strs: Vec<Vec<u32>> = vec![vec![0, 1], vec![0, 1, 0, 1], vec![1]];
        let lcp = |i: usize| {
            strs[i - 1]
                .iter()
                .zip(&strs[i])
                .take_while(|(a, b)| a == b)
                .count() as u64
        };
        let t = BlindTrie::build(3, |i| strs[i].len() as u64, lcp, |i, d| strs[i][d as usize]);
        let range = |q: &[u32]| t.descend(q).map(|n| (n.lo, n.hi));
        assert_eq!(range(&[]), Some((0, 2)));
        assert_eq!(range(&[0, 1]), Some((0, 1)));
        assert_eq!(range(&[0]), Some((0, 1)));
        assert_eq!(range(&[0, 1, 0]), Some((1, 1)));
        assert_eq!(range(&[1]), Some((2, 2)));
        assert_eq!(range(&[1, 1]), None);
        assert_eq!(range(&[0, 0]), Some((0, 1)), "blind descent skips non-branching chars");
    }

    fn brute_range(strs: &[Vec<u32>], q: &[u32]) -> RankRange {
        let hits: Vec<u32> = (0..strs.len() as u32)
            .filter(|&i| strs[i as usize].starts_with(q))
            .collect();
        match (hits.first(), hits.last()) {
            (Some(&lo), Some(&hi)) => {
                assert_eq!(hits.len() as u32, hi - lo + 1, "prefix ranges are contiguous");
                RankRange { lo, hi }
            }
            _ => RankRange::EMPTY,
        }
    }

    fn norm(r: RankRange) -> Option<(u32, u32)> {
        (!r.is_empty()).then_some((r.lo, r.hi))
    }

    #[test]
    fn random_grammars_vs_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for round in 0..6 {
            let sigma = [2u32, 3, 4][round % 3];
            let unit: Vec<u32> = (0..80).map(|_| rng.random_range(0..sigma)).collect();
            let mut text = Vec::new();
            for _ in 0..10 {
                let mut u = unit.clone();
                for _ in 0..3 {
                    let k = rng.random_range(0..u.len());
                    u[k] = rng.random_range(0..sigma);
                }
                text.extend(u);
            }
            let c = compress(&text, sigma, &CompressorConfig { seed: round as u64, ..Default::default() }).unwrap();
            let g = c.grammar;
            let grid = grid_of(&g);
            assert!(grid.num_points() <= g.size());
            let xs = strings(&g, &grid.x_axis);
            let ys = strings(&g, &grid.y_axis);
            assert!(xs.windows(2).all(|w| w[0] < w[1]));
            assert!(ys.windows(2).all(|w| w[0] < w[1]));

            let all: Vec<GridPoint> = grid.block_points.iter().chain(&grid.run_points).copied().collect();
            for p in &all {
                let x = AxisHandle::Reversed(match g.rule(p.parent).unwrap() {
                    Rule::Block(ch) => ch[p.child as usize - 1],
                    Rule::Run { base, .. } => *base,
                });
                assert_eq!(xs[p.x as usize], x.prefix(&g, usize::MAX));
                let y = AxisHandle::Suffix { symbol: p.parent, offset: p.offset };
                assert_eq!(ys[p.y as usize], y.prefix(&g, usize::MAX));
            }

            for _ in 0..300 {
                let i = rng.random_range(0..text.len());
                let l = rng.random_range(0..12).min(text.len() - i);
                let mut q = text[i..i + l].to_vec();
                if rng.random_bool(0.3) {
                    q.push(rng.random_range(0..sigma));
                }
                assert_eq!(norm(grid.y_axis.prefix_range(&g, &q)), norm(brute_range(&ys, &q)));
                q.reverse();
                assert_eq!(norm(grid.x_axis.prefix_range(&g, &q)), norm(brute_range(&xs, &q)));
            }

            for _ in 0..300 {
                let (a, b) = (rng.random_range(0..=xs.len() as u32), rng.random_range(0..=xs.len() as u32));
                let (c, d) = (rng.random_range(0..=ys.len() as u32), rng.random_range(0..=ys.len() as u32));
                let xr = RankRange { lo: a.min(b), hi: a.max(b).saturating_sub(1).max(a.min(b)) };
                let yr = if rng.random_bool(0.1) {
                    RankRange::EMPTY
                } else {
                    RankRange { lo: c.min(d), hi: c.max(d) }
                };
                let mut expect: Vec<GridPoint> = all
                    .iter()
                    .filter(|p| xr.contains(p.x) && yr.contains(p.y))
                    .copied()
                    .collect();
                let mut got = Vec::new();
                grid.range_report(xr, yr, &mut |p| got.push(*p));
                let key = |p: &GridPoint| (p.parent, p.child);
                expect.sort_by_key(key);
                got.sort_by_key(key);
                assert_eq!(got, expect);
                let sum: u64 = expect
                    .iter()
                    .filter(|p| p.kind == PointKind::Block)
                    .map(|p| p.weight)
                    .sum();
                assert_eq!(grid.range_weight_sum(xr, yr), sum);
            }
            let full_x = RankRange { lo: 0, hi: xs.len() as u32 - 1 };
            let full_y = RankRange { lo: 0, hi: ys.len() as u32 - 1 };
            let mut n = 0;
            grid.range_report(full_x, full_y, &mut |_| n += 1);
            assert_eq!(n, grid.num_points());
            assert_eq!(grid.range_weight_sum(RankRange::EMPTY, full_y), 0);
        }
    }
}
