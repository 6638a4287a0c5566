use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::sieve::par_blocks;

/// Joint distribution of `(μ(n), μ(n+1))` over `n` in `[1, N - 1]`.
///
/// Rows and columns are indexed by `μ + 1`, so `counts[0][2]` counts `(−1, +1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairTable {
    pub n: u64,
    pub total: u64,
    pub counts: [[u64; 3]; 3],
    pub frequencies: [[f64; 3]; 3],
}

impl PairTable {
    pub fn count(&self, first: i8, second: i8) -> u64 {
        self.counts[(first + 1) as usize][(second + 1) as usize]
    }

    pub fn freq(&self, first: i8, second: i8) -> f64 {
        self.frequencies[(first + 1) as usize][(second + 1) as usize]
    }

    /// Frequency of μ²(n) = μ²(n+1) = 1.
    pub fn both_squarefree(&self) -> f64 {
        [-1, 1]
            .iter()
            .flat_map(|&a| [-1, 1].map(|b| self.freq(a, b)))
            .sum()
    }

    /// Frequency of μ²(n) = 1 among the first coordinates.
    pub fn first_squarefree(&self) -> f64 {
        [-1i8, 1]
            .iter()
            .flat_map(|&a| [-1i8, 0, 1].map(|b| self.freq(a, b)))
            .sum()
    }
}

pub const MIN_PAIR_BOUND: u64 = 2;

pub fn mobius_pair_table(n: u64) -> Result<PairTable> {
    if n < MIN_PAIR_BOUND {
        return Err(LabError::param("n", "need at least one pair, N >= 2"));
    }
    let blocks = par_blocks(1, n - 1, 0, 1, None, |seg, lo, hi| {
        let mut counts = [[0u64; 3]; 3];
        let base = (lo - seg.start()) as usize;
        let mut prev = seg.mu_at(base);
        for i in 1..=(hi - lo + 1) as usize {
            let next = seg.mu_at(base + i);
            counts[(prev + 1) as usize][(next + 1) as usize] += 1;
            prev = next;
        }
        counts
    })?;
    let mut counts = [[0u64; 3]; 3];
    for block in blocks {
        for (row, brow) in counts.iter_mut().zip(block) {
            for (c, b) in row.iter_mut().zip(brow) {
                *c += b;
            }
        }
    }
    let total = n - 1;
    let frequencies = counts.map(|row| row.map(|c| c as f64 / total as f64));
    Ok(PairTable {
        n,
        total,
        counts,
        frequencies,
    })
}
