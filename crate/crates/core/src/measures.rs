//! Substring complexity, δ, and the size-bound terms it feeds.
//!
//! All logarithms are base 2.

use crate::suffix::{lcp_array, suffix_array};
use std::collections::HashSet;

/// An exact non-negative fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexityProfile {
    pub n: usize,
    pub sigma_used: usize,
    /// `d[k]` = number of distinct length-k substrings; `d[0]` is unused (1).
    pub d: Vec<u64>,
    pub delta: Ratio,
    /// Smallest `k` attaining δ.
    pub delta_at: usize,
}

impl ComplexityProfile {
    pub fn d(&self, k: usize) -> u64 {
        self.d.get(k).copied().unwrap_or(0)
    }
}

/// Computes `d_k` for every `k` from the suffix and LCP arrays: the suffix at
/// rank `r` contributes one new length-k substring for every
/// `lcp[r] < k <= |suffix|`.
pub fn substring_complexity(text: &[u32]) -> ComplexityProfile {
    let n = text.len();
    assert!(n >= 1, "substring complexity of an empty text");
    let sa = suffix_array(text);
    let lcp = lcp_array(text, &sa);
    let mut diff = vec![0i64; n + 2];
    for r in 0..n {
        let len = n - sa[r] as usize;
        let h = lcp[r] as usize;
        diff[h + 1] += 1;
        diff[len + 1] -= 1;
    }
    let mut d = vec![1u64; n + 1];
    let mut acc = 0i64;
    for (k, dk) in d.iter_mut().enumerate().skip(1) {
        acc += diff[k];
        *dk = acc as u64;
    }
    let mut delta = Ratio::new(d[1], 1);
    let mut delta_at = 1;
    for (k, &dk) in d.iter().enumerate().skip(2) {
        let r = Ratio::new(dk, k as u64);
        if r > delta {
            delta = r;
            delta_at = k;
        }
    }
    let sigma_used = text.iter().collect::<HashSet<_>>().len();
    ComplexityProfile {
        n,
        sigma_used,
        d,
        delta,
        delta_at,
    }
}

/// `δ · max(1, log(n log σ / (δ log n)))`.
pub fn delta_bound_term(n: f64, sigma: f64, delta: f64) -> f64 {
    let arg = n * sigma.log2() / (delta * n.log2());
    delta * arg.log2().max(1.0)
}

/// Bound term for a profile; `n` and `σ` are clamped to at least 2 so that
/// unary and single-character texts stay in the formula's domain.
pub fn profile_bound_term(p: &ComplexityProfile) -> f64 {
    delta_bound_term(
        (p.n as f64).max(2.0),
        (p.sigma_used as f64).max(2.0),
        p.delta.as_f64(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactSums {
    /// `Σ_{2^p <= n} d_{2^p} / 2^p`, as an exact fraction.
    pub lhs: Ratio,
    /// `5δ + δ log(n log σ / (δ log n))`.
    pub rhs: f64,
}

impl FactSums {
    pub fn holds(&self) -> bool {
        self.lhs.as_f64() <= self.rhs
    }
}

pub fn fact_sum_check(p: &ComplexityProfile) -> FactSums {
    let mut top = 0u32;
    while (1usize << (top + 1)) <= p.n {
        top += 1;
    }
    // common denominator 2^top
    let mut num: u128 = 0;
    for e in 0..=top {
        num += (p.d(1usize << e) as u128) << (top - e);
    }
    let den = 1u128 << top;
    let g = {
        let (mut a, mut b) = (num, den);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.max(1)
    };
    let lhs = Ratio {
        num: (num / g) as u64,
        den: (den / g) as u64,
    };
    let n = (p.n as f64).max(2.0);
    let sigma = (p.sigma_used as f64).max(2.0);
    let delta = p.delta.as_f64();
    let rhs = 5.0 * delta + delta * (n * sigma.log2() / (delta * n.log2())).log2();
    FactSums { lhs, rhs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bytes(s: &str) -> Vec<u32> {
        s.bytes().map(|b| b as u32).collect()
    }

    /// Brute-force distinct k-gram counts.
    fn brute(t: &[u32]) -> Vec<u64> {
        let mut d = vec![1u64];
        for k in 1..=t.len() {
            let set: HashSet<&[u32]> = t.windows(k).collect();
            d.push(set.len() as u64);
        }
        d
    }

    #[test]
    fn unary() {
        let p = substring_complexity(&bytes("aaaa"));
        assert_eq!(&p.d[1..], &[1, 1, 1, 1]);
        assert_eq!(p.delta, Ratio::new(1, 1));
    }

    #[test]
    fn abracadabra() {
        let t = bytes("abracadabra");
        let p = substring_complexity(&t);
        assert_eq!(p.d, brute(&t));
        assert_eq!(&p.d[1..5], &[5, 7, 7, 7]);
        assert_eq!(p.delta, Ratio::new(5, 1));
        assert_eq!(p.delta_at, 1);
        assert_eq!(p.sigma_used, 5);
        assert!(fact_sum_check(&p).holds());
    }

    #[test]
    fn abab() {
        let p = substring_complexity(&bytes("abab"));
        assert_eq!(&p.d[1..], &[2, 2, 2, 1]);
        assert_eq!(p.delta, Ratio::new(2, 1));
    }

    #[test]
    fn bound_term_values() {
        let v = delta_bound_term(2f64.powi(20), 2.0, 2f64.powi(10));
        let expected = 1024.0 * (1024.0f64 / 20.0).log2();
        assert!((v - expected).abs() < 1e-9);
        assert!((v / 1024.0 - 5.678).abs() < 1e-3);
        // argument below 2 clamps to δ
        assert_eq!(delta_bound_term(16.0, 2.0, 8.0), 8.0);
        let w = delta_bound_term(26.0, 26.0, 1.0);
        assert!(w.is_finite() && w > 0.0);
    }

    #[test]
    fn fact_on_unary() {
        let t = vec![0u32; 256];
        let f = fact_sum_check(&substring_complexity(&t));
        assert!(f.lhs.as_f64() < 2.0);
        assert!(f.holds());
    }

    #[test]
    fn fact_on_random_binary() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let t: Vec<u32> = (0..4096).map(|_| rng.random_range(0..2)).collect();
        let p = substring_complexity(&t);
        assert!(p.d[1] <= 2);
        let f = fact_sum_check(&p);
        assert!(f.holds(), "{f:?}");
    }

    proptest! {
        #[test]
        fn matches_brute_force(t in proptest::collection::vec(0u32..3, 1..120)) {
            let p = substring_complexity(&t);
            let d = brute(&t);
            prop_assert_eq!(&p.d, &d);
            prop_assert_eq!(p.d[t.len()], 1);
            prop_assert_eq!(p.d[1] as usize, p.sigma_used);
            for (k, &dk) in d.iter().enumerate().skip(1) {
                prop_assert!(Ratio::new(dk, k as u64) <= p.delta);
            }
            prop_assert_eq!(Ratio::new(d[p.delta_at], p.delta_at as u64), p.delta);
            prop_assert!(fact_sum_check(&p).holds());
        }
    }
}
