use std::fmt;

use serde::{Deserialize, Serialize};

/// A multi-index `p = (p_1, ..., p_n)` of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The unit multi-index `e_j` scaled by `k`.
    pub fn axis(n: usize, j: usize, k: u32) -> Self {
        let mut v = vec![0; n];
        v[j] = k;
        Self(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|p| = p_1 + ... + p_n`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `ln(p!) = sum_j ln(p_j!)`.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&k| crate::special::ln_gamma(k as f64 + 1.0)).sum()
    }

    /// `p! = p_1! ... p_n!`, exact for the sizes used here.
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&k| (1..=k).map(f64::from).product::<f64>())
            .product()
    }

    /// All multi-indices of length `n` with `|p| <= max_order`, ordered by
    /// total order and then lexicographically descending in the first entry.
    pub fn all_up_to(n: usize, max_order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for order in 0..=max_order {
            let mut cur = vec![0u32; n];
            compositions(order, 0, &mut cur, &mut out);
        }
        out
    }
}

fn compositions(rest: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    let n = cur.len();
    if n == 0 {
        if rest == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = rest;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for k in (0..=rest).rev() {
        cur[pos] = k;
        compositions(rest - k, pos + 1, cur, out);
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}
