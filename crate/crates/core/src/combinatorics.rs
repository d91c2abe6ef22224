//! Binomial coefficients and the colexicographic combinatorial number system.

/// `C(n, k)` or `None` on overflow of `u64`.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Pascal triangle for `0 <= n <= max_n`, used in rank/unrank hot paths.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    max_n: usize,
    rows: Vec<Vec<u64>>,
}

impl BinomialTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(max_n + 1);
        for n in 0..=max_n {
            let mut row = vec![1u64; n + 1];
            for k in 1..n {
                row[k] = rows[n - 1][k - 1].saturating_add(rows[n - 1][k]);
            }
            rows.push(row);
        }
        BinomialTable { max_n, rows }
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize) -> u64 {
        if k > n || n > self.max_n {
            if n > self.max_n {
                return binomial(n as u64, k as u64).unwrap_or(u64::MAX);
            }
            return 0;
        }
        self.rows[n][k]
    }
}

/// Colex rank of a support bitmask: `sum_j C(s_j, j)` over the sorted
/// 0-based support positions `s_1 < ... < s_k` with `j` starting at 1.
pub fn colex_rank(table: &BinomialTable, mut bits: u64) -> u64 {
    let mut rank = 0;
    let mut j = 1;
    while bits != 0 {
        let pos = bits.trailing_zeros() as usize;
        rank += table.get(pos, j);
        j += 1;
        bits &= bits - 1;
    }
    rank
}

/// Inverse of [`colex_rank`] for weight `k` subsets of `0..n`.
pub fn colex_unrank(table: &BinomialTable, n: usize, k: usize, mut rank: u64) -> u64 {
    let mut bits = 0u64;
    let mut upper = n;
    for j in (1..=k).rev() {
        // largest c < upper with C(c, j) <= rank
        let mut c = upper - 1;
        while table.get(c, j) > rank {
            c -= 1;
        }
        bits |= 1 << c;
        rank -= table.get(c, j);
        upper = c;
    }
    bits
}
