//! Small combinatorial helpers shared by the enumeration-heavy modules.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Iterator over all k-subsets of {0, .., n-1} in lexicographic order.
pub struct Combinations {
    n: usize,
    k: usize,
    state: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Combinations {
        let state = (k <= n).then(|| (0..k).collect());
        Combinations { n, k, state }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.state.as_ref()?.clone();
        // Advance: rightmost index that can still move right.
        let state = self.state.as_mut().unwrap();
        let mut i = self.k;
        loop {
            if i == 0 {
                self.state = None;
                break;
            }
            i -= 1;
            if state[i] < self.n - (self.k - i) {
                state[i] += 1;
                for j in i + 1..self.k {
                    state[j] = state[j - 1] + 1;
                }
                break;
            }
        }
        Some(cur)
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Binomial coefficient as u64 when it fits, else None.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    binomial(n, k).to_u64()
}

/// Number of vectors of length n and weight exactly w over F_q.
pub fn weighted_count(n: u64, w: u64, q: u64) -> BigUint {
    binomial(n, w) * BigUint::from(q - 1).pow(w as u32)
}
