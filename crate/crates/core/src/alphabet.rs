//! Mapping between input bytes or tokens and the dense alphabet `[0, σ)`.

use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// Symbols are already dense ids; a pattern byte `b` maps to `b`.
    Dense(u32),
    /// Distinct input bytes, sorted; symbol `i` is `bytes[i]`.
    Bytes(Vec<u8>),
    /// Distinct whitespace-separated tokens, sorted.
    Tokens(Vec<String>),
}

impl Alphabet {
    /// Remaps raw bytes onto the distinct bytes they use.
    pub fn from_bytes(text: &[u8]) -> (Alphabet, Vec<u32>) {
        let mut present = [false; 256];
        for &b in text {
            present[b as usize] = true;
        }
        let bytes: Vec<u8> = (0..=255u8).filter(|&b| present[b as usize]).collect();
        let mut map = [0u32; 256];
        for (i, &b) in bytes.iter().enumerate() {
            map[b as usize] = i as u32;
        }
        let encoded = text.iter().map(|&b| map[b as usize]).collect();
        (Alphabet::Bytes(bytes), encoded)
    }

    /// Splits on whitespace and numbers the distinct tokens.
    pub fn from_tokens(text: &str) -> (Alphabet, Vec<u32>) {
        let tokens: Vec<String> = text
            .split_whitespace()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(str::to_owned)
            .collect();
        let a = Alphabet::Tokens(tokens);
        let encoded = text
            .split_whitespace()
            .map(|t| a.token_id(t).expect("token collected above"))
            .collect();
        (a, encoded)
    }

    fn token_id(&self, t: &str) -> Option<u32> {
        match self {
            Alphabet::Tokens(v) => v.binary_search_by(|x| x.as_str().cmp(t)).ok().map(|i| i as u32),
            _ => None,
        }
    }

    pub fn size(&self) -> u32 {
        match self {
            Alphabet::Dense(s) => *s,
            Alphabet::Bytes(b) => b.len() as u32,
            Alphabet::Tokens(t) => t.len() as u32,
        }
    }

    /// Encodes a query. `None` means some symbol of the query does not
    /// occur in the text, so the query has no occurrences.
    pub fn encode(&self, pattern: &[u8]) -> Option<Vec<u32>> {
        match self {
            Alphabet::Dense(s) => pattern
                .iter()
                .map(|&b| (u32::from(b) < *s).then_some(u32::from(b)))
                .collect(),
            Alphabet::Bytes(bytes) => pattern
                .iter()
                .map(|b| bytes.binary_search(b).ok().map(|i| i as u32))
                .collect(),
            Alphabet::Tokens(_) => {
                let s = std::str::from_utf8(pattern).ok()?;
                s.split_whitespace().map(|t| self.token_id(t)).collect()
            }
        }
    }

    /// Inverse of the encoding, for display and round trips.
    pub fn decode(&self, symbols: &[u32]) -> Vec<u8> {
        match self {
            Alphabet::Dense(_) => symbols.iter().map(|&c| c as u8).collect(),
            Alphabet::Bytes(bytes) => symbols.iter().map(|&c| bytes[c as usize]).collect(),
            Alphabet::Tokens(t) => symbols
                .iter()
                .map(|&c| t[c as usize].as_str())
                .collect::<Vec<_>>()
                .join(" ")
                .into_bytes(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bytes_round_trip() {
        let (a, enc) = Alphabet::from_bytes(b"abracadabra");
        assert_eq!(a.size(), 5);
        assert_eq!(&enc[..4], &[0, 1, 4, 0]);
        assert_eq!(a.decode(&enc), b"abracadabra");
        assert_eq!(a.encode(b"cad"), Some(vec![2, 0, 3]));
        assert_eq!(a.encode(b"zz"), None);
    }

    #[test]
    fn tokens() {
        let (a, enc) = Alphabet::from_tokens("the cat  saw the\ndog");
        assert_eq!(a.size(), 4);
        assert_eq!(enc, vec![3, 0, 2, 3, 1]);
        assert_eq!(a.encode(b"the dog"), Some(vec![3, 1]));
        assert_eq!(a.encode(b"the cow"), None);
        assert_eq!(a.decode(&[0, 1]), b"cat dog");
    }

    #[test]
    fn dense() {
        let a = Alphabet::Dense(3);
        assert_eq!(a.encode(&[0, 2]), Some(vec![0, 2]));
        assert_eq!(a.encode(&[3]), None);
    }
}
