//! Trie of every text substring up to a fixed length, used to reject short
//! absent patterns before touching the grammar.

use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ShortTrie {
    depth: usize,
    /// `(node, char) -> child`; node 0 is the root.
    children: HashMap<(u32, u32), u32>,
    nodes: u32,
}

impl ShortTrie {
    /// Inserts every length-`depth` window of `text` (and the shorter
    /// windows at its end).
    pub fn build(text: &[u32], depth: usize) -> Self {
        let mut t = ShortTrie {
            depth,
            children: HashMap::new(),
            nodes: 1,
        };
        for i in 0..text.len() {
            let mut v = 0u32;
            for &c in &text[i..(i + depth).min(text.len())] {
                v = match t.children.get(&(v, c)) {
                    Some(&u) => u,
                    None => {
                        let u = t.nodes;
                        t.nodes += 1;
                        t.children.insert((v, c), u);
                        u
                    }
                };
            }
        }
        t
    }

    /// Rebuilds from stored `(parent, char, child)` edges.
    pub fn from_edges(depth: usize, edges: impl IntoIterator<Item = (u32, u32, u32)>) -> Self {
        let children: HashMap<(u32, u32), u32> =
            edges.into_iter().map(|(p, c, u)| ((p, c), u)).collect();
        let nodes = children.len() as u32 + 1;
        ShortTrie {
            depth,
            children,
            nodes,
        }
    }

    /// Edges sorted by child id.
    pub fn edges(&self) -> Vec<(u32, u32, u32)> {
        let mut e: Vec<(u32, u32, u32)> = self.children.iter().map(|(&(p, c), &u)| (p, c, u)).collect();
        e.sort_unstable_by_key(|x| x.2);
        e
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn node_count(&self) -> usize {
        self.nodes as usize
    }

    /// Whether `p` occurs in the text; only meaningful for `|p| <= depth`.
    pub fn contains(&self, p: &[u32]) -> bool {
        debug_assert!(p.len() <= self.depth);
        let mut v = 0u32;
        for &c in p {
            match self.children.get(&(v, c)) {
                Some(&u) => v = u,
                None => return false,
            }
        }
        true
    }
}
