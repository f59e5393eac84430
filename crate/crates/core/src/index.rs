//! The self-index: grammar, stored rankings, grammar-tree occurrence lists,
//! weights, grid, fingerprints and the short-pattern trie.

use crate::alphabet::Alphabet;
use crate::compressor::{self, CompressorConfig, HeightMode, PermTable, SymbolTable, STREAM_FINGERPRINT};
use crate::error::{Error, Result};
use crate::extract::{FingerprintTable, Hasher};
use crate::grid::Grid;
use crate::measures::{self, Ratio};
use crate::rlslp::Rlslp;
use crate::tree::{build_grammar_tree, symbol_weights, Occurrence, WeightTable};
use crate::trie::ShortTrie;
use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Clone, Debug)]
pub struct IndexConfig {
    pub seed: u64,
    pub height: HeightMode,
    pub attempts: u32,
    pub threshold_factor: f64,
    /// Short-trie depth; defaults to `ceil(log2 g)`.
    pub trie_len: Option<usize>,
}

impl Default for IndexConfig {
    fn default() -> Self {
        let c = CompressorConfig::default();
        IndexConfig {
            seed: c.seed,
            height: c.height,
            attempts: c.attempts,
            threshold_factor: c.threshold_factor,
            trie_len: None,
        }
    }
}

impl IndexConfig {
    pub fn compressor(&self) -> CompressorConfig {
        CompressorConfig {
            seed: self.seed,
            height: self.height,
            attempts: self.attempts,
            threshold_factor: self.threshold_factor,
            retain_levels: false,
        }
    }
}

/// Build parameters and summary figures stored with the index.
#[derive(Clone, Debug, PartialEq)]
pub struct Header {
    pub n: u64,
    pub sigma: u32,
    pub seed: u64,
    pub capped: bool,
    pub delta: Ratio,
    pub grammar_size: u64,
    /// Index of the last parsing level.
    pub text_levels: u32,
    /// `|S_k|` per level.
    pub level_sizes: Vec<u64>,
    pub attempt: u32,
    pub attempts_made: u32,
    pub over_threshold: bool,
    pub bound_term: f64,
}

#[derive(Debug)]
pub struct Index {
    pub(crate) header: Header,
    pub(crate) alphabet: Alphabet,
    pub(crate) grammar: Rlslp,
    pub(crate) perms: PermTable,
    pub(crate) occurrences: Vec<Vec<Occurrence>>,
    pub(crate) weights: WeightTable,
    pub(crate) grid: Grid,
    pub(crate) fingerprints: FingerprintTable,
    pub(crate) short_trie: ShortTrie,
    pub(crate) table: SymbolTable,
    pub(crate) duplicates: AtomicU64,
}

impl PartialEq for Index {
    fn eq(&self, other: &Self) -> bool {
        self.header == other.header
            && self.alphabet == other.alphabet
            && self.grammar == other.grammar
            && self.perms == other.perms
            && self.occurrences == other.occurrences
            && self.weights == other.weights
            && self.grid == other.grid
            && self.fingerprints == other.fingerprints
            && self.short_trie == other.short_trie
    }
}

impl Index {
    /// Indexes `text` over the dense alphabet `[0, sigma)`.
    pub fn build(text: &[u32], sigma: u32, cfg: &IndexConfig) -> Result<Index> {
        Self::build_with_alphabet(text, Alphabet::Dense(sigma), cfg)
    }

    /// Indexes raw bytes.
    pub fn build_bytes(text: &[u8], cfg: &IndexConfig) -> Result<Index> {
        let (alphabet, encoded) = Alphabet::from_bytes(text);
        Self::build_with_alphabet(&encoded, alphabet, cfg)
    }

    /// Indexes the whitespace-separated tokens of `text`.
    pub fn build_tokens(text: &str, cfg: &IndexConfig) -> Result<Index> {
        let (alphabet, encoded) = Alphabet::from_tokens(text);
        Self::build_with_alphabet(&encoded, alphabet, cfg)
    }

    pub fn build_with_alphabet(text: &[u32], alphabet: Alphabet, cfg: &IndexConfig) -> Result<Index> {
        if text.is_empty() {
            return Err(Error::invalid("cannot index an empty text"));
        }
        let sigma = alphabet.size();
        let profile = measures::substring_complexity(text);
        let c = compressor::compress_with_profile(text, sigma, &profile, &cfg.compressor())?;
        let g = c.grammar;
        let (tree, _) = build_grammar_tree(&g);
        let weights = symbol_weights(&g);
        let grid = Grid::build(&g, &tree, &weights, text);
        let occurrences = tree.occurrence_lists();
        let fingerprints = FingerprintTable::new(&g, Hasher::from_seed(cfg.seed, STREAM_FINGERPRINT));
        let trie_len = cfg.trie_len.unwrap_or_else(|| default_trie_len(g.size())).max(1);
        let short_trie = ShortTrie::build(text, trie_len);
        let header = Header {
            n: text.len() as u64,
            sigma,
            seed: cfg.seed,
            capped: cfg.height == HeightMode::Capped,
            delta: c.delta,
            grammar_size: g.size() as u64,
            text_levels: c.trace.last_level() as u32,
            level_sizes: c.trace.sizes.clone(),
            attempt: c.attempt,
            attempts_made: c.attempts_made,
            over_threshold: c.over_threshold,
            bound_term: c.bound_term,
        };
        Ok(Self::assemble(
            header,
            alphabet,
            g,
            c.perms,
            occurrences,
            weights,
            grid,
            fingerprints,
            short_trie,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        header: Header,
        alphabet: Alphabet,
        grammar: Rlslp,
        perms: PermTable,
        occurrences: Vec<Vec<Occurrence>>,
        weights: WeightTable,
        grid: Grid,
        fingerprints: FingerprintTable,
        short_trie: ShortTrie,
    ) -> Index {
        let table = SymbolTable::from_grammar(&grammar);
        Index {
            header,
            alphabet,
            grammar,
            perms,
            occurrences,
            weights,
            grid,
            fingerprints,
            short_trie,
            table,
            duplicates: AtomicU64::new(0),
        }
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn grammar(&self) -> &Rlslp {
        &self.grammar
    }

    pub fn perms(&self) -> &PermTable {
        &self.perms
    }

    pub fn occurrences(&self) -> &[Vec<Occurrence>] {
        &self.occurrences
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn fingerprints(&self) -> &FingerprintTable {
        &self.fingerprints
    }

    pub fn short_trie(&self) -> &ShortTrie {
        &self.short_trie
    }

    pub fn text_len(&self) -> u64 {
        self.header.n
    }

    /// Total duplicates removed by locate's final dedup since the index was
    /// built or loaded. Nonzero means an occurrence was derived twice.
    pub fn duplicate_count(&self) -> u64 {
        self.duplicates.load(Ordering::Relaxed)
    }

    pub(crate) fn add_duplicates(&self, d: u64) {
        if d > 0 {
            self.duplicates.fetch_add(d, Ordering::Relaxed);
        }
    }

    /// The whole text, materialized through the grammar.
    pub fn text(&self) -> Vec<u32> {
        crate::extract::extract_prefix(&self.grammar, self.grammar.start(), self.header.n)
    }

    /// `S[i..=j]`, 1-based.
    pub fn extract(&self, i: u64, j: u64) -> Result<Vec<u32>> {
        crate::extract::extract_substring(&self.grammar, i, j)
    }

    pub fn fingerprint(&self, i: u64, j: u64) -> Result<crate::extract::Fingerprint> {
        self.fingerprints.substring(&self.grammar, i, j)
    }
}

/// `ceil(log2 g)`, at least 1.
pub fn default_trie_len(g: usize) -> usize {
    let g = g.max(2);
    (usize::BITS - (g - 1).leading_zeros()) as usize
}
