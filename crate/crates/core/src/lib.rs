pub mod alphabet;
pub mod bundle;
pub mod compressor;
pub mod corpus;
pub mod error;
pub mod extract;
pub mod grid;
pub mod index;
pub mod levels;
pub mod measures;
pub mod pattern;
pub mod query;
pub mod rlslp;
pub mod stats;
pub mod suffix;
pub mod tree;
pub mod trie;
pub mod verify;
pub mod wavelet;
