//! Wavelet matrix over a sequence of small integers, with per-level weight
//! prefix sums for weighted range counting.

/// Plain bit vector with constant-time rank.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RankBits {
    words: Vec<u64>,
    /// Ones before each word.
    cum: Vec<u32>,
    len: usize,
}

impl RankBits {
    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0u64);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (len % 64);
            }
            len += 1;
        }
        let mut cum = Vec::with_capacity(words.len() + 1);
        let mut acc = 0u32;
        for w in &words {
            cum.push(acc);
            acc += w.count_ones();
        }
        cum.push(acc);
        RankBits { words, cum, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Ones in `[0, i)`.
    pub fn rank1(&self, i: usize) -> usize {
        let (w, b) = (i / 64, i % 64);
        let mut r = self.cum[w] as usize;
        if b > 0 {
            r += (self.words[w] & ((1u64 << b) - 1)).count_ones() as usize;
        }
        r
    }

    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    pub fn ones(&self) -> usize {
        *self.cum.last().unwrap() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveletMatrix {
    len: usize,
    bits: usize,
    levels: Vec<RankBits>,
    zeros: Vec<usize>,
    /// `weights[l]` holds prefix sums of weights in level-`l` order;
    /// `weights[bits]` is the final order.
    weights: Vec<Vec<u64>>,
    /// Original index of each position in the final order.
    final_index: Vec<u32>,
}

impl WaveletMatrix {
    /// Values must be `< 2^bits` for the smallest `bits` covering
    /// `max_value`.
    pub fn new(values: &[u32], weights: &[u64], max_value: u32) -> Self {
        assert_eq!(values.len(), weights.len());
        let bits = (u32::BITS - max_value.leading_zeros()).max(1) as usize;
        let mut order: Vec<u32> = (0..values.len() as u32).collect();
        let mut levels = Vec::with_capacity(bits);
        let mut zeros = Vec::with_capacity(bits);
        let mut wsum = Vec::with_capacity(bits + 1);
        let prefix = |order: &[u32]| {
            let mut v = Vec::with_capacity(order.len() + 1);
            let mut acc = 0u64;
            v.push(0);
            for &i in order {
                acc += weights[i as usize];
                v.push(acc);
            }
            v
        };
        for l in 0..bits {
            let shift = bits - 1 - l;
            let bit = |i: u32| values[i as usize] >> shift & 1 == 1;
            levels.push(RankBits::from_bits(order.iter().map(|&i| bit(i))));
            wsum.push(prefix(&order));
            let (z, o): (Vec<u32>, Vec<u32>) = order.iter().partition(|&&i| !bit(i));
            zeros.push(z.len());
            order = z;
            order.extend(o);
        }
        wsum.push(prefix(&order));
        WaveletMatrix {
            len: values.len(),
            bits,
            levels,
            zeros,
            weights: wsum,
            final_index: order,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Calls `f` with the original index of every position in `[a, b)`
    /// whose value lies in `[lo, hi]`.
    pub fn report(&self, a: usize, b: usize, lo: u32, hi: u32, f: &mut impl FnMut(u32)) {
        if a >= b || lo > hi {
            return;
        }
        self.report_rec(0, a, b, 0, lo, hi, f);
    }

    #[allow(clippy::too_many_arguments)]
    fn report_rec(
        &self,
        l: usize,
        a: usize,
        b: usize,
        prefix: u64,
        lo: u32,
        hi: u32,
        f: &mut impl FnMut(u32),
    ) {
        if a >= b {
            return;
        }
        let span = self.bits - l;
        let node_lo = prefix << span;
        let node_hi = node_lo + (1u64 << span) - 1;
        if node_hi < lo as u64 || node_lo > hi as u64 {
            return;
        }
        if l == self.bits {
            for &i in &self.final_index[a..b] {
                f(i);
            }
            return;
        }
        let bv = &self.levels[l];
        let (a0, b0) = (bv.rank0(a), bv.rank0(b));
        self.report_rec(l + 1, a0, b0, prefix << 1, lo, hi, f);
        let z = self.zeros[l];
        let (a1, b1) = (z + a - a0, z + b - b0);
        self.report_rec(l + 1, a1, b1, prefix << 1 | 1, lo, hi, f);
    }

    /// Total weight of positions in `[a, b)` with value in `[lo, hi]`.
    pub fn weight_sum(&self, a: usize, b: usize, lo: u32, hi: u32) -> u64 {
        if a >= b || lo > hi {
            return 0;
        }
        self.sum_rec(0, a, b, 0, lo as u64, hi as u64)
    }

    fn sum_rec(&self, l: usize, a: usize, b: usize, prefix: u64, lo: u64, hi: u64) -> u64 {
        if a >= b {
            return 0;
        }
        let span = self.bits - l;
        let node_lo = prefix << span;
        let node_hi = node_lo + (1u64 << span) - 1;
        if node_hi < lo || node_lo > hi {
            return 0;
        }
        if lo <= node_lo && node_hi <= hi {
            return self.weights[l][b] - self.weights[l][a];
        }
        let bv = &self.levels[l];
        let (a0, b0) = (bv.rank0(a), bv.rank0(b));
        let z = self.zeros[l];
        self.sum_rec(l + 1, a0, b0, prefix << 1, lo, hi)
            + self.sum_rec(l + 1, z + a - a0, z + b - b0, prefix << 1 | 1, lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_bits() {
        let bits: Vec<bool> = (0..200).map(|i| i % 3 == 0).collect();
        let rb = RankBits::from_bits(bits.iter().copied());
        for i in 0..=200 {
            assert_eq!(rb.rank1(i), bits[..i].iter().filter(|&&b| b).count());
        }
        assert_eq!(rb.ones(), 67);
        assert!(rb.get(3) && !rb.get(4));
    }

    #[test]
    fn empty_matrix() {
        let wm = WaveletMatrix::new(&[], &[], 0);
        assert!(wm.is_empty());
        assert_eq!(wm.weight_sum(0, 0, 0, 5), 0);
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            vals in proptest::collection::vec((0u32..50, 0u64..1000), 0..300),
            queries in proptest::collection::vec((0usize..300, 0usize..300, 0u32..50, 0u32..50), 1..30),
        ) {
            let values: Vec<u32> = vals.iter().map(|v| v.0).collect();
            let weights: Vec<u64> = vals.iter().map(|v| v.1).collect();
            let wm = WaveletMatrix::new(&values, &weights, 49);
            let n = values.len();
            for (a, b, lo, hi) in queries {
                let (a, b) = (a.min(n), b.min(n));
                let expect: Vec<u32> = (a..b)
                    .filter(|&i| (lo..=hi).contains(&values[i]))
                    .map(|i| i as u32)
                    .collect();
                let mut got = Vec::new();
                wm.report(a, b, lo, hi, &mut |i| got.push(i));
                got.sort_unstable();
                prop_assert_eq!(&got, &expect);
                let sum: u64 = expect.iter().map(|&i| weights[i as usize]).sum();
                prop_assert_eq!(wm.weight_sum(a, b, lo, hi), sum);
            }
        }
    }
}
