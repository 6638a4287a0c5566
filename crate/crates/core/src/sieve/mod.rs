//! Segmented sieves for λ(n), μ(n) and the truncated squarefree indicator.
//!
//! Values are bit packed little-endian within `u64` words:
//!
//! * λ: one bit per integer, `0` for +1 and `1` for −1.
//! * μ: two bits per integer (32 per word). Bit 0 is set when μ(n) ≠ 0 and
//!   bit 1 carries the sign (`0b01` = +1, `0b11` = −1, `0b00` = 0).
//! * squarefree_w: one bit per integer, set when no prime `p <= w` has `p² | n`.
//!
//! Bit `i` of a packed array describes `start + i`.

mod cache;
mod factor;

pub use cache::{read_segment, write_segment, CACHE_MAGIC, CACHE_VERSION};
pub use factor::{factor_oracle, Factorization};

use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::primes::{isqrt, primes_up_to};

/// Integers sieved per work unit. A multiple of 64 so that chunks own whole words.
const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeMask {
    pub w: u64,
    pub bits: Vec<u64>,
}

/// λ, μ and optionally the `w`-truncated squarefree indicator over `[start, start + len)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveSegment {
    start: u64,
    len: u64,
    lambda: Vec<u64>,
    mu: Vec<u64>,
    squarefree: Option<SquarefreeMask>,
}

pub fn sieve_lambda(start: u64, len: u64) -> Result<SieveSegment> {
    SieveSegment::compute(start, len, None)
}

pub fn sieve_mu(start: u64, len: u64) -> Result<SieveSegment> {
    SieveSegment::compute(start, len, None)
}

pub fn sieve_squarefree_w(start: u64, len: u64, w: u64) -> Result<SieveSegment> {
    if w < 2 {
        return Err(LabError::param("w", format!("prime bound {w} is below 2")));
    }
    SieveSegment::compute(start, len, Some(w))
}

fn check_range(start: u64, len: u64) -> Result<u64> {
    if start == 0 {
        return Err(LabError::param("start", "segments start at 1 or later"));
    }
    if len == 0 {
        return Err(LabError::param("len", "segment must be nonempty"));
    }
    start
        .checked_add(len)
        .ok_or_else(|| LabError::Range(format!("[{start}, {start} + {len}) exceeds 64 bits")))
}

struct Chunk {
    lambda: Vec<u64>,
    mu: Vec<u64>,
    squarefree: Vec<u64>,
}

fn sieve_chunk(lo: u64, len: usize, primes: &[u64], w: Option<u64>) -> Chunk {
    let mut prod = vec![1u64; len];
    let mut odd = vec![false; len];
    let mut square = vec![false; len];
    let mut square_w = vec![false; len];
    let hi = lo + len as u64 - 1;
    for &p in primes {
        if p * p > hi {
            break;
        }
        let mut pk = p;
        let mut exponent = 1;
        loop {
            let mut m = lo.div_ceil(pk) * pk;
            while m <= hi {
                let i = (m - lo) as usize;
                prod[i] *= p;
                odd[i] = !odd[i];
                if exponent == 2 {
                    square[i] = true;
                    if w.is_some_and(|w| p <= w) {
                        square_w[i] = true;
                    }
                }
                m += pk;
            }
            match pk.checked_mul(p) {
                Some(next) if next <= hi => {
                    pk = next;
                    exponent += 1;
                }
                _ => break,
            }
        }
    }
    let mut chunk = Chunk {
        lambda: vec![0; len.div_ceil(64)],
        mu: vec![0; len.div_ceil(32)],
        squarefree: if w.is_some() {
            vec![0; len.div_ceil(64)]
        } else {
            Vec::new()
        },
    };
    for i in 0..len {
        let n = lo + i as u64;
        // one prime factor above sqrt(hi) remains unaccounted for
        let negative = odd[i] ^ (prod[i] != n);
        if negative {
            chunk.lambda[i / 64] |= 1 << (i % 64);
        }
        if !square[i] {
            let code = if negative { 0b11u64 } else { 0b01 };
            chunk.mu[i / 32] |= code << (2 * (i % 32));
        }
        if w.is_some() && !square_w[i] {
            chunk.squarefree[i / 64] |= 1 << (i % 64);
        }
    }
    chunk
}

impl SieveSegment {
    fn compute(start: u64, len: u64, w: Option<u64>) -> Result<Self> {
        let end = check_range(start, len)?;
        let len_usize = usize::try_from(len)
            .map_err(|_| LabError::Range(format!("segment length {len} exceeds address space")))?;
        let primes = primes_up_to(isqrt(end - 1));
        let chunks: Vec<Chunk> = (0..len.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let lo = start + c * CHUNK;
                let n = CHUNK.min(end - lo) as usize;
                sieve_chunk(lo, n, &primes, w)
            })
            .collect();
        let mut lambda = Vec::with_capacity(len_usize.div_ceil(64));
        let mut mu = Vec::with_capacity(len_usize.div_ceil(32));
        let mut squarefree = Vec::new();
        for chunk in chunks {
            lambda.extend(chunk.lambda);
            mu.extend(chunk.mu);
            squarefree.extend(chunk.squarefree);
        }
        Ok(SieveSegment {
            start,
            len,
            lambda,
            mu,
            squarefree: w.map(|w| SquarefreeMask {
                w,
                bits: squarefree,
            }),
        })
    }

    pub(crate) fn from_parts(
        start: u64,
        len: u64,
        lambda: Vec<u64>,
        mu: Vec<u64>,
        squarefree: Option<SquarefreeMask>,
    ) -> Result<Self> {
        check_range(start, len)?;
        let words = |per_word: u64| len.div_ceil(per_word) as usize;
        if lambda.len() != words(64)
            || mu.len() != words(32)
            || squarefree.as_ref().is_some_and(|s| s.bits.len() != words(64))
        {
            return Err(LabError::Format("packed array lengths disagree with len".into()));
        }
        Ok(SieveSegment {
            start,
            len,
            lambda,
            mu,
            squarefree,
        })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// One past the last integer covered.
    pub fn end(&self) -> u64 {
        self.start + self.len
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.start && n < self.end()
    }

    pub fn lambda_words(&self) -> &[u64] {
        &self.lambda
    }

    pub fn mu_words(&self) -> &[u64] {
        &self.mu
    }

    pub fn squarefree_mask(&self) -> Option<&SquarefreeMask> {
        self.squarefree.as_ref()
    }

    fn index(&self, n: u64) -> usize {
        assert!(
            self.contains(n),
            "{n} outside segment [{}, {})",
            self.start,
            self.end()
        );
        (n - self.start) as usize
    }

    /// Raw λ bit at offset `i` (`true` for −1).
    #[inline]
    pub fn lambda_bit_at(&self, i: usize) -> bool {
        (self.lambda[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn mu_at(&self, i: usize) -> i8 {
        match (self.mu[i / 32] >> (2 * (i % 32))) & 0b11 {
            0b01 => 1,
            0b11 => -1,
            _ => 0,
        }
    }

    #[inline]
    pub fn lambda_at(&self, i: usize) -> i8 {
        if self.lambda_bit_at(i) {
            -1
        } else {
            1
        }
    }

    /// λ(n); panics outside the segment.
    pub fn lambda(&self, n: u64) -> i8 {
        self.lambda_at(self.index(n))
    }

    /// μ(n); panics outside the segment.
    pub fn mu(&self, n: u64) -> i8 {
        self.mu_at(self.index(n))
    }

    /// μ²(n) = 1, i.e. `n` squarefree.
    pub fn is_squarefree(&self, n: u64) -> bool {
        self.mu(n) != 0
    }

    /// The truncated indicator, when the segment was sieved with a bound `w`.
    pub fn squarefree_w(&self, n: u64) -> Option<bool> {
        let i = self.index(n);
        self.squarefree
            .as_ref()
            .map(|s| (s.bits[i / 64] >> (i % 64)) & 1 == 1)
    }

    pub fn lambda_values(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.len as usize).map(|i| self.lambda_at(i))
    }

    pub fn mu_values(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.len as usize).map(|i| self.mu_at(i))
    }
}

/// Integers per block in [`par_blocks`].
pub const BLOCK: u64 = 1 << 20;

/// Run `f` over `[lo, hi]` in fixed blocks of [`BLOCK`] integers, in parallel.
///
/// Each call receives a segment covering `[block_lo - pad_left, block_hi + pad_right]`
/// (clamped below at 1) together with the block bounds. Results come back in block
/// order, so any fold over them is independent of the worker count.
pub fn par_blocks<T, F>(
    lo: u64,
    hi: u64,
    pad_left: u64,
    pad_right: u64,
    w: Option<u64>,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&SieveSegment, u64, u64) -> T + Sync,
{
    if lo == 0 || hi < lo {
        return Err(LabError::param("window", format!("invalid window [{lo}, {hi}]")));
    }
    hi.checked_add(pad_right)
        .and_then(|e| e.checked_add(1))
        .ok_or_else(|| LabError::Range(format!("window end {hi} + {pad_right} exceeds 64 bits")))?;
    let blocks = (hi - lo) / BLOCK + 1;
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let block_lo = lo + b * BLOCK;
            let block_hi = (block_lo + BLOCK - 1).min(hi);
            let seg_lo = block_lo.saturating_sub(pad_left).max(1);
            let seg_len = block_hi + pad_right - seg_lo + 1;
            let segment = SieveSegment::compute(seg_lo, seg_len, w)?;
            Ok(f(&segment, block_lo, block_hi))
        })
        .collect()
}
