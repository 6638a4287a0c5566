use std::sync::Arc;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::primes::primes_up_to;
use crate::sieve::{sieve_mu, SieveSegment};

/// Residue information about the shift `n` that decides vertices and edges.
pub trait ResidueModel: Sync {
    /// `n mod p`, or `None` when the model does not know it.
    fn residue(&self, p: u64) -> Option<u64>;

    /// Whether `a` is a vertex, i.e. `n + a` passes the squarefree test.
    fn is_vertex(&self, a: i64) -> bool;

    /// Every prime up to this bound has a known residue.
    fn prime_bound(&self) -> u64;

    /// Largest prime whose residue can influence [`ResidueModel::is_vertex`].
    fn vertex_prime_bound(&self) -> u64;

    /// `q | n + a`. Panics if the residue mod `q` is unknown.
    fn divides(&self, q: u64, a: i64) -> bool {
        let r = self
            .residue(q)
            .unwrap_or_else(|| panic!("residue mod {q} not available"));
        (r as i128 + a as i128).rem_euclid(q as i128) == 0
    }
}

/// Master seed and trial index; every prime draws from its own counter position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleSeed {
    pub master: u64,
    pub trial: u64,
}

fn stream(seed: SampleSeed) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.master);
    rng.set_stream(seed.trial);
    rng
}

/// Map a uniform 64-bit word onto `[0, m)`.
#[inline]
fn scale(word: u64, m: u64) -> u64 {
    ((word as u128 * m as u128) >> 64) as u64
}

/// The residue of the sampled integer modulo `p²`, for the prime with index `index`.
///
/// Each prime reads the 64-bit word at position `2 * index` of the trial's ChaCha
/// stream, so the value does not depend on which other primes were drawn.
pub fn draw_square_residue(seed: SampleSeed, index: usize, p: u64) -> u64 {
    let mut rng = stream(seed);
    rng.set_word_pos(2 * index as u128);
    scale(rng.next_u64(), p * p)
}

/// Reductions of a random profinite integer: mod `p` for every `p <= P`, mod `p²` for `p <= w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfiniteSample {
    prime_bound: u64,
    square_bound: u64,
    seed: SampleSeed,
    primes: Arc<[u64]>,
    residues: Vec<u64>,
    square_residues: Vec<u64>,
}

/// Every prime up to `bound`, shared across many samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    bound: u64,
    primes: Arc<[u64]>,
}

impl PrimeTable {
    pub fn new(bound: u64) -> Self {
        PrimeTable {
            bound,
            primes: primes_up_to(bound).into(),
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }
}

pub fn sample_profinite(prime_bound: u64, square_bound: u64, seed: SampleSeed) -> Result<ProfiniteSample> {
    ProfiniteSample::draw(&PrimeTable::new(prime_bound), prime_bound, square_bound, seed)
}

impl ProfiniteSample {
    pub fn draw(
        table: &PrimeTable,
        prime_bound: u64,
        square_bound: u64,
        seed: SampleSeed,
    ) -> Result<Self> {
        if square_bound > prime_bound {
            return Err(LabError::param(
                "w",
                format!("square bound {square_bound} exceeds prime bound {prime_bound}"),
            ));
        }
        if prime_bound >= 1 << 32 {
            return Err(LabError::Range("prime bound must stay below 2^32".into()));
        }
        if table.bound < prime_bound {
            return Err(LabError::param(
                "primes",
                format!("prime table stops at {} below {prime_bound}", table.bound),
            ));
        }
        let primes = table.primes.clone();
        let covered = primes.partition_point(|&p| p <= prime_bound);
        let mut rng = stream(seed);
        let mut residues = Vec::with_capacity(covered);
        let mut square_residues = Vec::new();
        for &p in &primes[..covered] {
            let sq = scale(rng.next_u64(), p * p);
            residues.push(sq % p);
            if p <= square_bound {
                square_residues.push(sq);
            }
        }
        Ok(ProfiniteSample {
            prime_bound,
            square_bound,
            seed,
            primes,
            residues,
            square_residues,
        })
    }

    pub fn square_bound(&self) -> u64 {
        self.square_bound
    }

    pub fn seed(&self) -> SampleSeed {
        self.seed
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes[..self.residues.len()]
    }

    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes().binary_search(&p).ok()
    }

    pub fn residue_at(&self, index: usize) -> u64 {
        self.residues[index]
    }

    /// `n mod p²` for `p <= w`.
    pub fn square_residue(&self, p: u64) -> Option<u64> {
        if p > self.square_bound {
            return None;
        }
        self.prime_index(p).map(|i| self.square_residues[i])
    }
}

impl ResidueModel for ProfiniteSample {
    fn residue(&self, p: u64) -> Option<u64> {
        self.prime_index(p).map(|i| self.residues[i])
    }

    fn is_vertex(&self, a: i64) -> bool {
        self.square_residues
            .iter()
            .zip(self.primes.iter())
            .all(|(&sq, &p)| (sq as i128 + a as i128).rem_euclid((p * p) as i128) != 0)
    }

    fn prime_bound(&self) -> u64 {
        self.prime_bound
    }

    fn vertex_prime_bound(&self) -> u64 {
        self.square_bound
    }
}

/// A concrete shift `n0` whose vertex set is the true squarefree set of `n0 + window`.
#[derive(Debug, Clone)]
pub struct IntegerModel {
    n0: u64,
    window: (i64, i64),
    segment: SieveSegment,
}

impl IntegerModel {
    pub fn new(n0: u64, window: (i64, i64)) -> Result<Self> {
        let (lo, hi) = window;
        if hi < lo {
            return Err(LabError::param("window", "empty window"));
        }
        let start = (n0 as i128) + lo as i128;
        if start < 1 || (n0 as i128 + hi as i128) >= u64::MAX as i128 {
            return Err(LabError::Range(format!(
                "n0 + window must lie in [1, 2^64): n0 = {n0}, window = [{lo}, {hi}]"
            )));
        }
        let segment = sieve_mu(start as u64, (hi - lo + 1) as u64)?;
        Ok(IntegerModel { n0, window, segment })
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }
}

impl ResidueModel for IntegerModel {
    fn residue(&self, p: u64) -> Option<u64> {
        (p > 0).then(|| self.n0 % p)
    }

    fn is_vertex(&self, a: i64) -> bool {
        if a < self.window.0 || a > self.window.1 {
            return false;
        }
        self.segment.is_squarefree((self.n0 as i128 + a as i128) as u64)
    }

    fn prime_bound(&self) -> u64 {
        u64::MAX
    }

    fn vertex_prime_bound(&self) -> u64 {
        u64::MAX
    }
}
