//! Substring extraction from the grammar and Karp–Rabin fingerprints.
//!
//! Extraction walks the rule DAG with an explicit stack whose depth is the
//! grammar height; after the initial descent every character costs amortized
//! constant time.

use crate::error::{Error, Result};
use crate::rlslp::{Rlslp, Rule, SymbolId};

/// Mersenne prime `2^61 - 1`.
pub const MODULUS: u64 = (1 << 61) - 1;

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & MODULUS;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    r
}

/// Polynomial hash of a string: `Σ (c_i + 1) · b^(len-1-i) mod q`, plus
/// `b^len` so that fingerprints compose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub value: u64,
    pub len: u64,
    /// `b^len mod q`.
    pub shift: u64,
}

impl Fingerprint {
    pub const EMPTY: Fingerprint = Fingerprint {
        value: 0,
        len: 0,
        shift: 1,
    };

    /// Fingerprint of `self` followed by `other`.
    pub fn concat(self, other: Fingerprint) -> Fingerprint {
        Fingerprint {
            value: add_mod(mul_mod(self.value, other.shift), other.value),
            len: self.len + other.len,
            shift: mul_mod(self.shift, other.shift),
        }
    }

    /// Fingerprint of `self` repeated `k` times.
    pub fn repeat(self, k: u64) -> Fingerprint {
        let mut acc = Fingerprint::EMPTY;
        let mut sq = self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.concat(sq);
            }
            sq = sq.concat(sq);
            k >>= 1;
        }
        acc
    }
}

/// Hashes strings directly; the reference against which grammar-based
/// fingerprints are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hasher {
    pub base: u64,
}

impl Hasher {
    /// Draws a base uniformly from `[2, q-2]`.
    pub fn from_seed(seed: u64, stream: u64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Hasher {
            base: rng.random_range(2..=MODULUS - 2),
        }
    }

    pub fn char(&self, c: u32) -> Fingerprint {
        Fingerprint {
            value: c as u64 + 1,
            len: 1,
            shift: self.base,
        }
    }

    pub fn hash(&self, s: &[u32]) -> Fingerprint {
        let mut v = 0u64;
        for &c in s {
            v = add_mod(mul_mod(v, self.base), c as u64 + 1);
        }
        Fingerprint {
            value: v,
            len: s.len() as u64,
            shift: pow_mod(self.base, s.len() as u64),
        }
    }
}

/// Per-symbol fingerprint cache over a grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FingerprintTable {
    hasher: Hasher,
    symbol: Vec<Fingerprint>,
    /// Per block rule: fingerprints of child prefixes (`arity + 1` entries).
    prefix: Vec<Vec<Fingerprint>>,
}

impl FingerprintTable {
    pub fn new(g: &Rlslp, hasher: Hasher) -> Self {
        let mut symbol = Vec::with_capacity(g.num_symbols());
        for c in 0..g.sigma() {
            symbol.push(hasher.char(c));
        }
        let mut prefix = Vec::with_capacity(g.rules().len());
        for rule in g.rules() {
            match rule {
                Rule::Block(children) => {
                    let mut acc = Vec::with_capacity(children.len() + 1);
                    let mut f = Fingerprint::EMPTY;
                    acc.push(f);
                    for c in children {
                        f = f.concat(symbol[c.index()]);
                        acc.push(f);
                    }
                    symbol.push(f);
                    prefix.push(acc);
                }
                Rule::Run { base, count } => {
                    symbol.push(symbol[base.index()].repeat(*count));
                    prefix.push(Vec::new());
                }
            }
        }
        FingerprintTable {
            hasher,
            symbol,
            prefix,
        }
    }

    pub fn hasher(&self) -> Hasher {
        self.hasher
    }

    pub fn of_symbol(&self, a: SymbolId) -> Fingerprint {
        self.symbol[a.index()]
    }

    /// Fingerprint of `exp(a)[lo..hi)`.
    pub fn range(&self, g: &Rlslp, a: SymbolId, lo: u64, hi: u64) -> Fingerprint {
        debug_assert!(lo <= hi && hi <= g.len_of(a));
        if lo == hi {
            return Fingerprint::EMPTY;
        }
        if lo == 0 && hi == g.len_of(a) {
            return self.symbol[a.index()];
        }
        match g.rule(a) {
            None => self.symbol[a.index()],
            Some(Rule::Block(children)) => {
                let offs = g.child_offsets(a);
                let first = offs.partition_point(|&o| o <= lo) - 1;
                let last = offs.partition_point(|&o| o < hi) - 1;
                if first == last {
                    let c = children[first];
                    return self.range(g, c, lo - offs[first], hi - offs[first]);
                }
                let rule = a.index() - g.sigma() as usize;
                let left = self.range(g, children[first], lo - offs[first], offs[first + 1] - offs[first]);
                let pre = &self.prefix[rule];
                // full children first+1 .. last
                let mid = if first + 1 < last {
                    let whole = pre[last];
                    let head = pre[first + 1];
                    let len = whole.len - head.len;
                    let shift = pow_mod(self.hasher.base, len);
                    Fingerprint {
                        value: sub_mod(whole.value, mul_mod(head.value, shift)),
                        len,
                        shift,
                    }
                } else {
                    Fingerprint::EMPTY
                };
                let right = self.range(g, children[last], 0, hi - offs[last]);
                left.concat(mid).concat(right)
            }
            Some(Rule::Run { base, .. }) => {
                let bl = g.len_of(*base);
                let (first, last) = (lo / bl, (hi - 1) / bl);
                if first == last {
                    return self.range(g, *base, lo - first * bl, hi - first * bl);
                }
                let left = self.range(g, *base, lo - first * bl, bl);
                let mid = self.symbol[base.index()].repeat(last - first - 1);
                let right = self.range(g, *base, 0, hi - last * bl);
                left.concat(mid).concat(right)
            }
        }
    }

    /// Fingerprint of `S[i..=j]` (1-based, inclusive).
    pub fn substring(&self, g: &Rlslp, i: u64, j: u64) -> Result<Fingerprint> {
        check_range(g, i, j)?;
        Ok(self.range(g, g.start(), i - 1, j))
    }
}

fn check_range(g: &Rlslp, i: u64, j: u64) -> Result<()> {
    if i == 0 || i > j || j > g.text_len() {
        return Err(Error::invalid(format!(
            "range [{i}, {j}] outside [1, {}]",
            g.text_len()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    sym: SymbolId,
    idx: u64,
}

/// Characters of `exp(a)` from a given offset, left to right.
pub struct Forward<'g> {
    g: &'g Rlslp,
    stack: Vec<Frame>,
    leaf: Option<u32>,
    remaining: u64,
}

impl<'g> Forward<'g> {
    pub fn new(g: &'g Rlslp, a: SymbolId, from: u64) -> Self {
        let len = g.len_of(a);
        let mut it = Forward {
            g,
            stack: Vec::new(),
            leaf: None,
            remaining: len.saturating_sub(from),
        };
        if from < len {
            it.descend(a, from);
        }
        it
    }

    fn descend(&mut self, mut sym: SymbolId, mut off: u64) {
        loop {
            match self.g.rule(sym) {
                None => {
                    self.leaf = Some(sym.0);
                    return;
                }
                Some(Rule::Block(children)) => {
                    let offs = self.g.child_offsets(sym);
                    let i = offs.partition_point(|&o| o <= off) - 1;
                    self.stack.push(Frame { sym, idx: i as u64 });
                    off -= offs[i];
                    sym = children[i];
                }
                Some(Rule::Run { base, .. }) => {
                    let bl = self.g.len_of(*base);
                    let c = off / bl;
                    self.stack.push(Frame { sym, idx: c });
                    off -= c * bl;
                    sym = *base;
                }
            }
        }
    }

    fn advance(&mut self) {
        while let Some(top) = self.stack.last_mut() {
            let (count, child) = match self.g.rule(top.sym).expect("nonterminal frame") {
                Rule::Block(children) => (children.len() as u64, children.get(top.idx as usize + 1).copied()),
                Rule::Run { base, count } => (*count, Some(*base)),
            };
            if top.idx + 1 < count {
                top.idx += 1;
                let next = child.expect("next child");
                self.descend(next, 0);
                return;
            }
            self.stack.pop();
        }
        self.leaf = None;
    }
}

impl Iterator for Forward<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.remaining == 0 {
            return None;
        }
        let c = self.leaf?;
        self.remaining -= 1;
        if self.remaining > 0 {
            self.advance();
        }
        Some(c)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

/// Characters of `exp(a)[..end)` from right to left.
pub struct Backward<'g> {
    g: &'g Rlslp,
    stack: Vec<Frame>,
    leaf: Option<u32>,
    remaining: u64,
}

impl<'g> Backward<'g> {
    pub fn new(g: &'g Rlslp, a: SymbolId, end: u64) -> Self {
        let end = end.min(g.len_of(a));
        let mut it = Backward {
            g,
            stack: Vec::new(),
            leaf: None,
            remaining: end,
        };
        if end > 0 {
            it.descend(a, end - 1);
        }
        it
    }

    fn descend(&mut self, mut sym: SymbolId, mut off: u64) {
        loop {
            match self.g.rule(sym) {
                None => {
                    self.leaf = Some(sym.0);
                    return;
                }
                Some(Rule::Block(children)) => {
                    let offs = self.g.child_offsets(sym);
                    let i = offs.partition_point(|&o| o <= off) - 1;
                    self.stack.push(Frame { sym, idx: i as u64 });
                    off -= offs[i];
                    sym = children[i];
                }
                Some(Rule::Run { base, .. }) => {
                    let bl = self.g.len_of(*base);
                    let c = off / bl;
                    self.stack.push(Frame { sym, idx: c });
                    off -= c * bl;
                    sym = *base;
                }
            }
        }
    }

    fn advance(&mut self) {
        while let Some(top) = self.stack.last_mut() {
            if top.idx > 0 {
                top.idx -= 1;
                let next = match self.g.rule(top.sym).expect("nonterminal frame") {
                    Rule::Block(children) => children[top.idx as usize],
                    Rule::Run { base, .. } => *base,
                };
                let last = self.g.len_of(next) - 1;
                self.descend(next, last);
                return;
            }
            self.stack.pop();
        }
        self.leaf = None;
    }
}

impl Iterator for Backward<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.remaining == 0 {
            return None;
        }
        let c = self.leaf?;
        self.remaining -= 1;
        if self.remaining > 0 {
            self.advance();
        }
        Some(c)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

/// First `l` characters of `exp(a)` (fewer if the expansion is shorter).
pub fn extract_prefix(g: &Rlslp, a: SymbolId, l: u64) -> Vec<u32> {
    Forward::new(g, a, 0).take(l as usize).collect()
}

/// Last `l` characters of `exp(a)`, in text order.
pub fn extract_suffix(g: &Rlslp, a: SymbolId, l: u64) -> Vec<u32> {
    let mut v: Vec<u32> = Backward::new(g, a, g.len_of(a)).take(l as usize).collect();
    v.reverse();
    v
}

/// `S[i..=j]`, 1-based inclusive.
pub fn extract_substring(g: &Rlslp, i: u64, j: u64) -> Result<Vec<u32>> {
    check_range(g, i, j)?;
    Ok(Forward::new(g, g.start(), i - 1)
        .take((j - i + 1) as usize)
        .collect())
}
