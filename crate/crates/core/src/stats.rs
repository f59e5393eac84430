//! Size and complexity metrics of a text and its grammar.

use crate::index::{Index, IndexConfig};
use crate::levels::{self, Threshold};
use crate::measures::{fact_sum_check, profile_bound_term, substring_complexity};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt::Write;

#[derive(Clone, Debug, Serialize)]
pub struct LevelStat {
    pub k: usize,
    pub size: u64,
    /// `1 + 4n / ℓ_{k+1}`.
    pub bound: f64,
    /// `size < bound`, decided exactly.
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Stats {
    pub n: u64,
    pub sigma: u32,
    pub sigma_used: usize,
    pub delta_num: u64,
    pub delta_den: u64,
    pub delta: f64,
    pub delta_at: usize,
    /// `d[k]` for `k = 1..=n`.
    pub d: Vec<u64>,
    pub levels: Vec<LevelStat>,
    pub total_level_size: u64,
    /// `40n + κ`.
    pub total_level_bound: u64,
    pub grammar_size: u64,
    pub runs: usize,
    pub bound_term: f64,
    pub g_over_bound: f64,
    pub fact_lhs: f64,
    pub fact_rhs: f64,
    pub fact_holds: bool,
    pub capped: bool,
    pub attempts_made: u32,
}

impl Stats {
    pub fn from_index(index: &Index) -> Stats {
        let text = index.text();
        let h = index.header();
        let p = substring_complexity(&text);
        let fact = fact_sum_check(&p);
        let n = h.n;
        let levels: Vec<LevelStat> = h
            .level_sizes
            .iter()
            .enumerate()
            .map(|(k, &size)| {
                let t = Threshold::for_level(k + 1);
                LevelStat {
                    k,
                    size,
                    bound: 1.0 + 4.0 * n as f64 / t.as_f64(),
                    ok: size == 0
                        || t.cmp_scaled(size as u128 - 1, 4 * n as u128) == Ordering::Less,
                }
            })
            .collect();
        let bound_term = profile_bound_term(&p);
        Stats {
            n,
            sigma: h.sigma,
            sigma_used: p.sigma_used,
            delta_num: p.delta.num,
            delta_den: p.delta.den,
            delta: p.delta.as_f64(),
            delta_at: p.delta_at,
            d: p.d[1..].to_vec(),
            total_level_size: levels.iter().map(|l| l.size).sum(),
            total_level_bound: 40 * n + levels::kappa(n) as u64,
            levels,
            grammar_size: h.grammar_size,
            runs: index.grammar().num_runs(),
            bound_term,
            g_over_bound: h.grammar_size as f64 / bound_term,
            fact_lhs: fact.lhs.as_f64(),
            fact_rhs: fact.rhs,
            fact_holds: fact.holds(),
            capped: h.capped,
            attempts_made: h.attempts_made,
        }
    }

    /// Builds an index over raw bytes first.
    pub fn from_bytes(text: &[u8], cfg: &IndexConfig) -> crate::error::Result<Stats> {
        Ok(Stats::from_index(&Index::build_bytes(text, cfg)?))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }

    /// Long-format CSV: `section,key,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("section,key,value\n");
        let v = serde_json::to_value(self).expect("stats serialize");
        for (key, val) in v.as_object().unwrap() {
            if !val.is_array() {
                writeln!(s, "summary,{key},{val}").unwrap();
            }
        }
        for l in &self.levels {
            writeln!(s, "level_size,{},{}", l.k, l.size).unwrap();
            writeln!(s, "level_bound,{},{}", l.k, l.bound).unwrap();
            writeln!(s, "level_ok,{},{}", l.k, l.ok).unwrap();
        }
        for (i, d) in self.d.iter().enumerate() {
            writeln!(s, "d,{},{}", i + 1, d).unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn unary() {
        let s = Stats::from_bytes(&corpus::unary(256), &IndexConfig::default()).unwrap();
        assert_eq!(s.delta, 1.0);
        assert!(s.fact_lhs < 2.0);
        assert!(s.fact_holds);
    }

    #[test]
    fn thue_morse_levels() {
        let s = Stats::from_bytes(&corpus::thue_morse(12), &IndexConfig::default()).unwrap();
        assert!(s.levels.iter().all(|l| l.ok));
        assert!(s.total_level_size <= s.total_level_bound);
        let csv = s.to_csv();
        assert!(csv.contains("summary,n,4096"));
        assert!(s.to_json().contains("\"delta\""));
    }

    #[test]
    fn random_26() {
        let s = Stats::from_bytes(&corpus::random(4096, 26, 1), &IndexConfig::default()).unwrap();
        assert!(s.d[0] <= 26);
        assert!(s.grammar_size as f64 <= 64.0 * s.bound_term);
    }
}
