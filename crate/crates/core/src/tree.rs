//! Grammar tree, phrase partition and occurrence weights.
//!
//! The grammar tree is the parse tree with every non-leftmost occurrence of a
//! nonterminal pruned to a leaf. A run rule `A -> A_1^s` is split into the
//! children `A_1` and a remainder leaf standing for `A_1^{s-1}`.

use crate::rlslp::{Rlslp, Rule, SymbolId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeLabel {
    Symbol(SymbolId),
    /// The `A_1^{[count]}` leaf of a run rule.
    RunRemainder { base: SymbolId, count: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub label: NodeLabel,
    pub parent: Option<u32>,
    /// 0-based offset of the node's expansion in the text.
    pub start: u64,
    pub len: u64,
    pub internal: bool,
}

/// One grammar-tree node labeled `A`, seen from its parent: the parent's
/// symbol and the node's offset inside the parent's expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub parent: SymbolId,
    pub offset: u64,
}

#[derive(Clone, Debug)]
pub struct GrammarTree {
    pub nodes: Vec<TreeNode>,
    /// Per symbol: node id of its unique internal node (nonterminals only).
    pub internal: Vec<Option<u32>>,
    /// Per symbol: the leaves labeled with it.
    pub leaves: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhrasePartition {
    /// 1-based end positions of the phrases, strictly increasing, last = n.
    pub ends: Vec<u64>,
    /// Leaf node covering each phrase.
    pub leaf: Vec<u32>,
}

impl PhrasePartition {
    /// Index of the phrase containing 1-based position `pos`.
    pub fn phrase_of(&self, pos: u64) -> usize {
        self.ends.partition_point(|&e| e < pos)
    }
}

impl GrammarTree {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> u32 {
        0
    }

    /// Absolute start of the leftmost occurrence of nonterminal `a`.
    pub fn internal_start(&self, a: SymbolId) -> Option<u64> {
        self.internal[a.index()].map(|v| self.nodes[v as usize].start)
    }

    /// Every grammar-tree node labeled `a` (internal node first), as
    /// `(parent symbol, offset in parent)`. The root has no entry.
    pub fn occurrences_of(&self, a: SymbolId) -> Vec<Occurrence> {
        let mut out = Vec::new();
        let nodes = self.internal[a.index()]
            .into_iter()
            .chain(self.leaves[a.index()].iter().copied());
        for v in nodes {
            let node = &self.nodes[v as usize];
            if let Some(p) = node.parent {
                let parent = &self.nodes[p as usize];
                let NodeLabel::Symbol(ps) = parent.label else {
                    unreachable!("remainder leaves have no children")
                };
                out.push(Occurrence {
                    parent: ps,
                    offset: node.start - parent.start,
                });
            }
        }
        out
    }

    /// Occurrence lists for every symbol, in id order.
    pub fn occurrence_lists(&self) -> Vec<Vec<Occurrence>> {
        (0..self.internal.len())
            .map(|i| self.occurrences_of(SymbolId(i as u32)))
            .collect()
    }
}

/// Builds the grammar tree by a left-to-right preorder walk, expanding only
/// the first visit of each nonterminal.
pub fn build_grammar_tree(g: &Rlslp) -> (GrammarTree, PhrasePartition) {
    let num = g.num_symbols();
    let mut nodes: Vec<TreeNode> = Vec::with_capacity(g.size() + 1);
    let mut internal = vec![None; num];
    let mut leaves = vec![Vec::new(); num];
    let mut phrase_ends = Vec::new();
    let mut phrase_leaf = Vec::new();

    // (label, parent, start)
    let mut stack: Vec<(NodeLabel, Option<u32>, u64)> =
        vec![(NodeLabel::Symbol(g.start()), None, 0)];
    while let Some((label, parent, start)) = stack.pop() {
        let id = nodes.len() as u32;
        let (len, expand) = match label {
            NodeLabel::Symbol(a) => {
                let first = !g.is_terminal(a) && internal[a.index()].is_none();
                (g.len_of(a), first)
            }
            NodeLabel::RunRemainder { base, count } => (g.len_of(base) * count, false),
        };
        nodes.push(TreeNode {
            label,
            parent,
            start,
            len,
            internal: expand,
        });
        let NodeLabel::Symbol(a) = label else {
            phrase_ends.push(start + len);
            phrase_leaf.push(id);
            continue;
        };
        if !expand {
            leaves[a.index()].push(id);
            phrase_ends.push(start + len);
            phrase_leaf.push(id);
            continue;
        }
        internal[a.index()] = Some(id);
        match g.rule(a).expect("nonterminal") {
            Rule::Block(children) => {
                let offs = g.child_offsets(a);
                for (i, &c) in children.iter().enumerate().rev() {
                    stack.push((NodeLabel::Symbol(c), Some(id), start + offs[i]));
                }
            }
            Rule::Run { base, count } => {
                let bl = g.len_of(*base);
                stack.push((
                    NodeLabel::RunRemainder {
                        base: *base,
                        count: count - 1,
                    },
                    Some(id),
                    start + bl,
                ));
                stack.push((NodeLabel::Symbol(*base), Some(id), start));
            }
        }
    }
    (
        GrammarTree {
            nodes,
            internal,
            leaves,
        },
        PhrasePartition {
            ends: phrase_ends,
            leaf: phrase_leaf,
        },
    )
}

/// Per-symbol count of parse-tree nodes labeled with the symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    pub w: Vec<u64>,
}

impl WeightTable {
    pub fn get(&self, a: SymbolId) -> u64 {
        self.w[a.index()]
    }
}

/// Top-down weight propagation in decreasing id order.
pub fn symbol_weights(g: &Rlslp) -> WeightTable {
    let mut w = vec![0u64; g.num_symbols()];
    w[g.start().index()] = 1;
    for i in (g.sigma() as usize..g.num_symbols()).rev() {
        let wa = w[i];
        if wa == 0 {
            continue;
        }
        match g.rule(SymbolId(i as u32)).expect("nonterminal") {
            Rule::Block(children) => {
                for c in children {
                    w[c.index()] += wa;
                }
            }
            Rule::Run { base, count } => w[base.index()] += wa * count,
        }
    }
    WeightTable { w }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(i: u32) -> SymbolId {
        SymbolId(i)
    }

    fn abab() -> Rlslp {
        Rlslp::new(
            2,
            vec![Rule::Block(vec![s(0), s(1)]), Rule::Block(vec![s(2), s(2)])],
            s(3),
        )
        .unwrap()
    }

    #[test]
    fn single_block() {
        let g = Rlslp::new(2, vec![Rule::Block(vec![s(0), s(1)])], s(2)).unwrap();
        let (t, p) = build_grammar_tree(&g);
        assert_eq!(t.node_count(), g.size() + 1);
        assert!(t.nodes[0].internal);
        assert_eq!(p.ends, vec![1, 2]);
    }

    #[test]
    fn repeated_block_is_pruned() {
        let g = abab();
        let (t, p) = build_grammar_tree(&g);
        assert_eq!(t.node_count(), 5);
        assert_eq!(p.ends, vec![1, 2, 4]);
        let b_internal = t.internal[2].unwrap();
        assert_eq!(t.nodes[b_internal as usize].start, 0);
        assert_eq!(t.leaves[2].len(), 1);
        assert_eq!(t.nodes[t.leaves[2][0] as usize].start, 2);
        assert_eq!(
            t.occurrences_of(s(2)),
            vec![
                Occurrence { parent: s(3), offset: 0 },
                Occurrence { parent: s(3), offset: 2 }
            ]
        );
        assert_eq!(p.phrase_of(3), 2);
        assert_eq!(p.phrase_of(1), 0);
    }

    #[test]
    fn run_rule_split() {
        let g = Rlslp::new(1, vec![Rule::Run { base: s(0), count: 4 }], s(1)).unwrap();
        let (t, p) = build_grammar_tree(&g);
        assert_eq!(t.node_count(), 3);
        assert_eq!(p.ends, vec![1, 4]);
        assert_eq!(
            t.nodes[2].label,
            NodeLabel::RunRemainder { base: s(0), count: 3 }
        );
        let w = symbol_weights(&g);
        assert_eq!(w.w, vec![4, 1]);
    }

    #[test]
    fn weights_abab() {
        let w = symbol_weights(&abab());
        assert_eq!(w.w, vec![2, 2, 2, 1]);
    }
}
