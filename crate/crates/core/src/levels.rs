//! Exact arithmetic on the level thresholds `(4/3)^e`.
//!
//! Every comparison against a threshold is done with big integers so that
//! symbols sitting exactly at the pause threshold are never misclassified.

use num_bigint::BigUint;
use std::cmp::Ordering;

/// Exponent `e = ceil(k/2) - 1` of the threshold used at level `k`.
pub fn exponent(level: usize) -> i64 {
    (level as i64 + 1) / 2 - 1
}

/// The threshold `ℓ = (4/3)^e` held as an exact fraction.
#[derive(Clone, Debug)]
pub struct Threshold {
    exponent: i64,
    num: BigUint,
    den: BigUint,
}

impl Threshold {
    pub fn with_exponent(exponent: i64) -> Self {
        let four = BigUint::from(4u32);
        let three = BigUint::from(3u32);
        let e = exponent.unsigned_abs() as u32;
        let (num, den) = if exponent >= 0 {
            (four.pow(e), three.pow(e))
        } else {
            (three.pow(e), four.pow(e))
        };
        Threshold { exponent, num, den }
    }

    /// Threshold `ℓ_k` of level `k`.
    pub fn for_level(level: usize) -> Self {
        Self::with_exponent(exponent(level))
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// `floor(c * ℓ)`, saturating at `u64::MAX`.
    pub fn floor_times(&self, c: u64) -> u64 {
        let v = (&self.num * BigUint::from(c)) / &self.den;
        u64::try_from(v).unwrap_or(u64::MAX)
    }

    /// `floor(ℓ)`; a length `len` is within the threshold iff `len <= floor(ℓ)`.
    pub fn floor(&self) -> u64 {
        self.floor_times(1)
    }

    /// Window radius `α = floor(8ℓ)`.
    pub fn alpha(&self) -> u64 {
        self.floor_times(8)
    }

    /// Compares `a * ℓ` with `b` exactly.
    pub fn cmp_scaled(&self, a: u128, b: u128) -> Ordering {
        let lhs = &self.num * BigUint::from(a);
        let rhs = &self.den * BigUint::from(b);
        lhs.cmp(&rhs)
    }

    pub fn as_f64(&self) -> f64 {
        (4.0f64 / 3.0).powi(self.exponent as i32)
    }
}

/// Number of levels after which an unrestricted run is guaranteed to reach a
/// single symbol: `2 * ceil(log_{4/3}(4n))`.
pub fn kappa(n: u64) -> usize {
    // smallest t with 4^t >= 4n * 3^t
    let four_n = BigUint::from(n) * 4u32;
    let mut t = 0u32;
    let mut p4 = BigUint::from(1u32);
    let mut p3 = BigUint::from(1u32);
    while p4 < &four_n * &p3 {
        p4 *= 4u32;
        p3 *= 3u32;
        t += 1;
    }
    2 * t as usize
}

/// Height cap `2 * floor(log_{4/3}(n / δ))` with `δ = delta_num / delta_den`.
pub fn lambda(n: u64, delta_num: u64, delta_den: u64) -> usize {
    assert!(delta_num > 0 && delta_den > 0);
    // largest t with 4^t * num <= n * den * 3^t
    let lhs_base = BigUint::from(delta_num);
    let rhs_base = BigUint::from(n) * BigUint::from(delta_den);
    if lhs_base > rhs_base {
        return 0;
    }
    let mut t = 0u32;
    let mut p4 = BigUint::from(4u32);
    let mut p3 = BigUint::from(3u32);
    while &p4 * &lhs_base <= &rhs_base * &p3 {
        t += 1;
        p4 *= 4u32;
        p3 *= 3u32;
    }
    2 * t as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_follow_ceil_half() {
        let got: Vec<i64> = (0..8).map(exponent).collect();
        assert_eq!(got, vec![-1, 0, 0, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn floors_are_exact() {
        // (4/3)^1 = 1.33, (4/3)^2 = 1.77, (4/3)^3 = 2.37, (4/3)^5 = 4.21
        let f: Vec<u64> = (0..6).map(|e| Threshold::with_exponent(e).floor()).collect();
        assert_eq!(f, vec![1, 1, 1, 2, 3, 4]);
        assert_eq!(Threshold::with_exponent(0).alpha(), 8);
        assert_eq!(Threshold::with_exponent(1).alpha(), 10);
        assert_eq!(Threshold::with_exponent(-1).floor(), 0);
        // large exponents stay exact: (4/3)^200 > 2^64
        assert_eq!(Threshold::with_exponent(200).floor(), u64::MAX);
    }

    #[test]
    fn kappa_and_lambda_match_float_formulas() {
        for n in [1u64, 2, 3, 10, 100, 1000, 65536, 1 << 40] {
            let expected = 2.0 * ((4.0 * n as f64).ln() / (4.0f64 / 3.0).ln()).ceil();
            assert_eq!(kappa(n) as f64, expected, "n={n}");
        }
        for (n, num, den) in [(1024u64, 1u64, 1u64), (11, 5, 1), (4096, 307, 1), (100, 7, 3)] {
            let x = n as f64 * den as f64 / num as f64;
            let expected = 2.0 * (x.ln() / (4.0f64 / 3.0).ln()).floor();
            assert_eq!(lambda(n, num, den) as f64, expected.max(0.0), "n={n}");
        }
        // exact boundary: n/δ = (4/3)^2 = 16/9
        assert_eq!(lambda(16, 9, 1), 4);
    }
}
