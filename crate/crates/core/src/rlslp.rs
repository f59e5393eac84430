//! Run-length straight-line programs.
//!
//! Terminals occupy ids `[0..σ)`; nonterminal `σ + i` is defined by
//! `rules[i]`. Children always carry smaller ids than the symbol they
//! define, so the id order is a topological order of the grammar.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

impl SymbolId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `A -> A_1 A_2 ... A_s`, `s >= 2`.
    Block(Vec<SymbolId>),
    /// `A -> A_1^count`, `count >= 2`.
    Run { base: SymbolId, count: u64 },
}

impl Rule {
    /// Contribution to the grammar size; run rules count as 2.
    pub fn size(&self) -> usize {
        match self {
            Rule::Block(children) => children.len(),
            Rule::Run { .. } => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rlslp {
    sigma: u32,
    rules: Vec<Rule>,
    start: SymbolId,
    exp_len: Vec<u64>,
    /// Per rule: cumulative child offsets (`arity + 1` entries) for block
    /// rules, empty for run rules.
    offsets: Vec<Vec<u64>>,
}

/// A structural problem found by [`Rlslp::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ChildOrder { symbol: SymbolId, child: SymbolId },
    Arity { symbol: SymbolId, arity: usize },
    Multiplicity { symbol: SymbolId, count: u64 },
    Length { symbol: SymbolId, stored: u64, computed: u64 },
    StartLength { stored: u64, expected: u64 },
    UnknownStart(SymbolId),
}

/// A run rule whose expansion has a shorter period than its base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodViolation {
    pub symbol: SymbolId,
    pub base_len: u64,
    pub shortest_period: u64,
}

impl Rlslp {
    /// Builds a grammar and derives expansion lengths. Fails if the rules are
    /// not in topological order or a symbol id is out of range.
    pub fn new(sigma: u32, rules: Vec<Rule>, start: SymbolId) -> Result<Self> {
        let total = sigma as usize + rules.len();
        if start.index() >= total {
            return Err(Error::invalid(format!("start symbol {start} out of range")));
        }
        let mut exp_len = vec![1u64; sigma as usize];
        exp_len.reserve(rules.len());
        for (i, rule) in rules.iter().enumerate() {
            let id = sigma as usize + i;
            let len = match rule {
                Rule::Block(children) => {
                    let mut sum = 0u64;
                    for c in children {
                        if c.index() >= id {
                            return Err(Error::invalid(format!(
                                "rule #{id} references non-earlier symbol {c}"
                            )));
                        }
                        sum += exp_len[c.index()];
                    }
                    sum
                }
                Rule::Run { base, count } => {
                    if base.index() >= id {
                        return Err(Error::invalid(format!(
                            "rule #{id} references non-earlier symbol {base}"
                        )));
                    }
                    exp_len[base.index()] * count
                }
            };
            exp_len.push(len);
        }
        Ok(Self::from_parts_unchecked(sigma, rules, start, exp_len))
    }

    /// Assembles a grammar without checking anything. Used to exercise
    /// [`Rlslp::validate`] on deliberately broken inputs.
    pub fn from_parts_unchecked(
        sigma: u32,
        rules: Vec<Rule>,
        start: SymbolId,
        exp_len: Vec<u64>,
    ) -> Self {
        let offsets = rules
            .iter()
            .map(|r| match r {
                Rule::Block(children) => {
                    let mut acc = Vec::with_capacity(children.len() + 1);
                    let mut sum = 0u64;
                    acc.push(0);
                    for c in children {
                        sum += exp_len.get(c.index()).copied().unwrap_or(0);
                        acc.push(sum);
                    }
                    acc
                }
                Rule::Run { .. } => Vec::new(),
            })
            .collect();
        Rlslp {
            sigma,
            rules,
            start,
            exp_len,
            offsets,
        }
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn start(&self) -> SymbolId {
        self.start
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn num_symbols(&self) -> usize {
        self.sigma as usize + self.rules.len()
    }

    /// Length `n` of the generated text.
    pub fn text_len(&self) -> u64 {
        self.exp_len[self.start.index()]
    }

    #[inline]
    pub fn is_terminal(&self, a: SymbolId) -> bool {
        a.0 < self.sigma
    }

    #[inline]
    pub fn rule(&self, a: SymbolId) -> Option<&Rule> {
        if self.is_terminal(a) {
            None
        } else {
            self.rules.get(a.index() - self.sigma as usize)
        }
    }

    /// Cumulative child offsets of a block rule.
    #[inline]
    pub fn child_offsets(&self, a: SymbolId) -> &[u64] {
        &self.offsets[a.index() - self.sigma as usize]
    }

    #[inline]
    pub fn len_of(&self, a: SymbolId) -> u64 {
        self.exp_len[a.index()]
    }

    /// `|exp(a)|`.
    pub fn expansion_length(&self, a: SymbolId) -> Result<u64> {
        self.exp_len
            .get(a.index())
            .copied()
            .ok_or_else(|| Error::invalid(format!("unknown symbol {a}")))
    }

    /// Grammar size: block arities plus 2 per run rule.
    pub fn size(&self) -> usize {
        self.rules.iter().map(Rule::size).sum()
    }

    pub fn num_runs(&self) -> usize {
        self.rules
            .iter()
            .filter(|r| matches!(r, Rule::Run { .. }))
            .count()
    }

    /// Materializes `exp(a)`. Intended for tests and small inputs.
    pub fn expand(&self, a: SymbolId) -> Result<Vec<u32>> {
        let len = self.expansion_length(a)?;
        let mut out = Vec::with_capacity(len as usize);
        let mut stack = vec![a];
        while let Some(s) = stack.pop() {
            match self.rule(s) {
                None => out.push(s.0),
                Some(Rule::Block(children)) => stack.extend(children.iter().rev()),
                Some(Rule::Run { base, count }) => {
                    for _ in 0..*count {
                        stack.push(*base);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Checks id ordering, arity and multiplicity bounds, stored lengths and
    /// the start symbol. An empty result means the grammar is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let total = self.num_symbols();
        if self.start.index() >= total {
            out.push(Violation::UnknownStart(self.start));
            return out;
        }
        let mut computed = vec![1u64; self.sigma as usize];
        for (i, rule) in self.rules.iter().enumerate() {
            let symbol = SymbolId((self.sigma as usize + i) as u32);
            let mut bad_child = false;
            let mut check = |c: SymbolId, out: &mut Vec<Violation>| {
                if c.index() >= symbol.index() {
                    out.push(Violation::ChildOrder { symbol, child: c });
                    bad_child = true;
                }
            };
            let len = match rule {
                Rule::Block(children) => {
                    if children.len() < 2 {
                        out.push(Violation::Arity {
                            symbol,
                            arity: children.len(),
                        });
                    }
                    children.iter().for_each(|&c| check(c, &mut out));
                    if bad_child {
                        0
                    } else {
                        children.iter().map(|c| computed[c.index()]).sum()
                    }
                }
                Rule::Run { base, count } => {
                    if *count < 2 {
                        out.push(Violation::Multiplicity {
                            symbol,
                            count: *count,
                        });
                    }
                    check(*base, &mut out);
                    if bad_child {
                        0
                    } else {
                        computed[base.index()] * count
                    }
                }
            };
            computed.push(len);
        }
        for (i, (&stored, &comp)) in self.exp_len.iter().zip(&computed).enumerate() {
            if stored != comp {
                out.push(Violation::Length {
                    symbol: SymbolId(i as u32),
                    stored,
                    computed: comp,
                });
            }
        }
        if self.exp_len.len() != total {
            out.push(Violation::Length {
                symbol: SymbolId(self.exp_len.len() as u32),
                stored: 0,
                computed: 0,
            });
        }
        let stored = self.exp_len.get(self.start.index()).copied().unwrap_or(0);
        let expected = computed[self.start.index()];
        if stored != expected {
            out.push(Violation::StartLength { stored, expected });
        }
        out
    }
}

/// Length of the shortest period of `s`, via the failure function.
pub fn shortest_period(s: &[u32]) -> usize {
    if s.is_empty() {
        return 0;
    }
    let mut fail = vec![0usize; s.len()];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    s.len() - fail[s.len() - 1]
}

/// For every run rule `A -> A_1^s`, checks that the shortest period of
/// `exp(A)` equals `|exp(A_1)|`.
///
/// Because `|exp(A_1)|` is a period and `s >= 2`, the shortest period of
/// `exp(A)` is the primitive root length of `exp(A_1)`, so a single
/// failure-function pass over `exp(A_1)` decides it.
pub fn check_runlength_periods(g: &Rlslp) -> Vec<PeriodViolation> {
    let mut out = Vec::new();
    for (i, rule) in g.rules().iter().enumerate() {
        if let Rule::Run { base, .. } = rule {
            let symbol = SymbolId(g.sigma() + i as u32);
            let text = g.expand(*base).expect("valid base symbol");
            let base_len = text.len() as u64;
            let p = shortest_period(&text) as u64;
            let root = if base_len.is_multiple_of(p) { p } else { base_len };
            if root != base_len {
                out.push(PeriodViolation {
                    symbol,
                    base_len,
                    shortest_period: root,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(i: u32) -> SymbolId {
        SymbolId(i)
    }

    // a=0, b=1
    fn abab_grammar() -> Rlslp {
        // B -> a b (#2), A -> B B (#3)
        Rlslp::new(
            2,
            vec![Rule::Block(vec![s(0), s(1)]), Rule::Block(vec![s(2), s(2)])],
            s(3),
        )
        .unwrap()
    }

    #[test]
    fn expansion_lengths() {
        let g = Rlslp::new(
            3,
            vec![
                Rule::Block(vec![s(0), s(1)]),
                Rule::Run { base: s(3), count: 3 },
                Rule::Block(vec![s(2), s(3), s(3)]),
                Rule::Block(vec![s(2), s(5)]),
            ],
            s(6),
        )
        .unwrap();
        assert_eq!(g.expansion_length(s(0)).unwrap(), 1);
        assert_eq!(g.expansion_length(s(4)).unwrap(), 6);
        assert_eq!(g.expansion_length(s(5)).unwrap(), 5);
        assert_eq!(g.expansion_length(s(6)).unwrap(), 6);
        assert!(g.expansion_length(s(7)).is_err());
    }

    #[test]
    fn expand_run_and_block() {
        let g = Rlslp::new(
            2,
            vec![
                Rule::Block(vec![s(0), s(1)]),
                Rule::Run { base: s(2), count: 3 },
            ],
            s(3),
        )
        .unwrap();
        assert_eq!(g.expand(s(0)).unwrap(), vec![0]);
        assert_eq!(g.expand(s(3)).unwrap(), vec![0, 1, 0, 1, 0, 1]);
        assert_eq!(g.size(), 4);
    }

    #[test]
    fn new_rejects_forward_references() {
        assert!(Rlslp::new(2, vec![Rule::Block(vec![s(0), s(2)])], s(2)).is_err());
        assert!(Rlslp::new(2, vec![Rule::Block(vec![s(0), s(1)])], s(3)).is_err());
    }

    #[test]
    fn validate_reports() {
        assert!(abab_grammar().validate().is_empty());

        let bad_arity = Rlslp::new(2, vec![Rule::Block(vec![s(0)])], s(2)).unwrap();
        assert!(bad_arity
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::Arity { arity: 1, .. })));

        let bad_run = Rlslp::new(2, vec![Rule::Run { base: s(0), count: 1 }], s(2)).unwrap();
        assert!(bad_run
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::Multiplicity { count: 1, .. })));

        let bad_len = Rlslp::from_parts_unchecked(
            2,
            vec![Rule::Block(vec![s(0), s(1)])],
            s(2),
            vec![1, 1, 3],
        );
        let report = bad_len.validate();
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::Length { stored: 3, computed: 2, .. })));
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::StartLength { stored: 3, expected: 2 })));

        let bad_order = Rlslp::from_parts_unchecked(
            2,
            vec![Rule::Block(vec![s(0), s(2)])],
            s(2),
            vec![1, 1, 2],
        );
        assert!(bad_order
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::ChildOrder { .. })));
    }

    #[test]
    fn failure_function_periods() {
        assert_eq!(shortest_period(&[0, 1, 0, 1, 0, 1]), 2);
        assert_eq!(shortest_period(&[0; 6]), 1);
        assert_eq!(shortest_period(&[0, 1, 0, 1, 0, 1, 0, 1]), 2);
        assert_eq!(shortest_period(&[0, 1, 0]), 2);
        assert_eq!(shortest_period(&[0, 1, 2]), 3);
    }

    #[test]
    fn period_check_flags_non_primitive_base() {
        // (ab)^3
        let ok = Rlslp::new(
            2,
            vec![
                Rule::Block(vec![s(0), s(1)]),
                Rule::Run { base: s(2), count: 3 },
            ],
            s(3),
        )
        .unwrap();
        assert!(check_runlength_periods(&ok).is_empty());

        let unary = Rlslp::new(1, vec![Rule::Run { base: s(0), count: 6 }], s(1)).unwrap();
        assert!(check_runlength_periods(&unary).is_empty());

        // (abab)^2 has period 2, not 4
        let bad = Rlslp::new(
            2,
            vec![
                Rule::Block(vec![s(0), s(1)]),
                Rule::Block(vec![s(2), s(2)]),
                Rule::Run { base: s(3), count: 2 },
            ],
            s(4),
        )
        .unwrap();
        let v = check_runlength_periods(&bad);
        assert_eq!(
            v,
            vec![PeriodViolation {
                symbol: s(4),
                base_len: 4,
                shortest_period: 2
            }]
        );
        let oracle = shortest_period(&bad.expand(s(4)).unwrap());
        assert_eq!(oracle, 2);
    }
}
