//! Suffix array, LCP array and substring comparison over a text.

use std::cmp::Ordering;

/// Suffix array by prefix doubling.
pub fn suffix_array(text: &[u32]) -> Vec<u32> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<u64> = text.iter().map(|&c| c as u64).collect();
    let mut tmp = vec![0u64; n];
    let mut k = 1usize;
    loop {
        let key = |i: u32| -> (u64, u64) {
            let i = i as usize;
            let second = if i + k < n { rank[i + k] + 1 } else { 0 };
            (rank[i], second)
        };
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0] as usize] = 0;
        for w in 1..n {
            let bump = (key(sa[w - 1]) != key(sa[w])) as u64;
            tmp[sa[w] as usize] = tmp[sa[w - 1] as usize] + bump;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1] as usize] as usize == n - 1 {
            break;
        }
        k *= 2;
    }
    sa
}

/// Kasai's algorithm: `lcp[r]` is the LCP of suffixes `sa[r-1]` and `sa[r]`
/// (`lcp[0] = 0`).
pub fn lcp_array(text: &[u32], sa: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut rank = vec![0u32; n];
    for (r, &i) in sa.iter().enumerate() {
        rank[i as usize] = r as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r > 0 {
            let j = sa[r - 1] as usize;
            while i + h < n && j + h < n && text[i + h] == text[j + h] {
                h += 1;
            }
            lcp[r] = h as u32;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

const BLOCK: usize = 32;

/// Range-minimum over an array: sparse table on block minima plus a scan
/// inside the partial blocks.
struct BlockRmq {
    values: Vec<u32>,
    table: Vec<Vec<u32>>,
}

impl BlockRmq {
    fn new(values: Vec<u32>) -> Self {
        let blocks: Vec<u32> = values
            .chunks(BLOCK)
            .map(|c| c.iter().copied().min().unwrap_or(u32::MAX))
            .collect();
        let mut table = vec![blocks];
        let mut width = 1;
        while 2 * width <= table[0].len() {
            let prev = table.last().unwrap();
            let next: Vec<u32> = (0..prev.len() - width)
                .map(|i| prev[i].min(prev[i + width]))
                .collect();
            table.push(next);
            width *= 2;
        }
        BlockRmq { values, table }
    }

    /// Minimum over `values[lo..hi]`, `lo < hi`.
    fn min(&self, lo: usize, hi: usize) -> u32 {
        let bl = lo / BLOCK;
        let bh = (hi - 1) / BLOCK;
        if bl == bh || bl + 1 == bh {
            return self.values[lo..hi].iter().copied().min().unwrap();
        }
        let mut m = self.values[lo..(bl + 1) * BLOCK].iter().copied().min().unwrap();
        m = m.min(self.values[bh * BLOCK..hi].iter().copied().min().unwrap());
        let (a, b) = (bl + 1, bh);
        let level = (usize::BITS - 1 - (b - a).leading_zeros()) as usize;
        let w = 1 << level;
        m.min(self.table[level][a]).min(self.table[level][b - w])
    }
}

/// Compares arbitrary substrings `text[p..p+len)` lexicographically in
/// constant-ish time.
pub struct SubstringOrder {
    rank: Vec<u32>,
    rmq: BlockRmq,
    n: usize,
}

impl SubstringOrder {
    pub fn new(text: &[u32]) -> Self {
        let sa = suffix_array(text);
        let lcp = lcp_array(text, &sa);
        let mut rank = vec![0u32; text.len()];
        for (r, &i) in sa.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        SubstringOrder {
            rank,
            rmq: BlockRmq::new(lcp),
            n: text.len(),
        }
    }

    /// Longest common prefix of the suffixes starting at `i` and `j`.
    pub fn lcp(&self, i: usize, j: usize) -> usize {
        if i == j {
            return self.n - i;
        }
        let (a, b) = (self.rank[i] as usize, self.rank[j] as usize);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.rmq.min(lo + 1, hi + 1) as usize
    }

    /// LCP of `text[a.0..a.0+a.1)` and `text[b.0..b.0+b.1)`.
    pub fn lcp_sub(&self, a: (usize, usize), b: (usize, usize)) -> usize {
        self.lcp(a.0, b.0).min(a.1).min(b.1)
    }

    pub fn cmp(&self, a: (usize, usize), b: (usize, usize)) -> Ordering {
        let l = self.lcp(a.0, b.0);
        if l >= a.1.min(b.1) {
            a.1.cmp(&b.1)
        } else {
            self.rank[a.0].cmp(&self.rank[b.0])
        }
    }
}
