use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sample::{draw_square_residue, SampleSeed};
use crate::error::{LabError, Result};
use crate::primes::{gcd, is_prime, primes_up_to};

fn odd_prime_gap(a: i64, b: i64) -> Result<u64> {
    let q = a.abs_diff(b);
    if q.is_multiple_of(2) || !is_prime(q) {
        return Err(LabError::param(
            "gap",
            format!("|{a} - {b}| = {q} is not an odd prime"),
        ));
    }
    Ok(q)
}

fn residue(seed: SampleSeed, q: u64, index: usize) -> u64 {
    draw_square_residue(seed, index, q) % q
}

fn prime_index(q: u64) -> usize {
    primes_up_to(q).len() - 1
}

fn edge_present(seed: SampleSeed, q: u64, index: usize, a: i64) -> bool {
    (residue(seed, q, index) as i128 + a as i128).rem_euclid(q as i128) == 0
}

/// Fraction of trials in which `q = |a - b|` divides `n + a`.
pub fn edge_probability_test(a: i64, b: i64, trials: u64, master: u64) -> Result<f64> {
    let q = odd_prime_gap(a, b)?;
    if trials == 0 {
        return Err(LabError::param("trials", "need at least one trial"));
    }
    let index = prime_index(q);
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&trial| edge_present(SampleSeed { master, trial }, q, index, a))
        .count();
    Ok(hits as f64 / trials as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointEdgeFrequency {
    pub first: f64,
    pub second: f64,
    pub both: f64,
}

/// Monte-Carlo frequencies of two edges and of both together.
pub fn joint_edge_frequency(
    first: (i64, i64),
    second: (i64, i64),
    trials: u64,
    master: u64,
) -> Result<JointEdgeFrequency> {
    let q1 = odd_prime_gap(first.0, first.1)?;
    let q2 = odd_prime_gap(second.0, second.1)?;
    if trials == 0 {
        return Err(LabError::param("trials", "need at least one trial"));
    }
    let (i1, i2) = (prime_index(q1), prime_index(q2));
    let (c1, c2, c12) = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = SampleSeed { master, trial };
            let e1 = edge_present(seed, q1, i1, first.0);
            let e2 = edge_present(seed, q2, i2, second.0);
            (e1 as u64, e2 as u64, (e1 && e2) as u64)
        })
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
    let t = trials as f64;
    Ok(JointEdgeFrequency {
        first: c1 as f64 / t,
        second: c2 as f64 / t,
        both: c12 as f64 / t,
    })
}

/// Exhaustive count over `n mod q1·q2` for the events `q1 | n + a1` and `q2 | n + a2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtCheck {
    pub modulus: u64,
    pub first: u64,
    pub second: u64,
    pub both: u64,
}

impl CrtCheck {
    /// `P(both) = P(first) P(second)` as an exact rational identity.
    pub fn independent(&self) -> bool {
        self.both as u128 * self.modulus as u128 == self.first as u128 * self.second as u128
    }
}

pub fn crt_edge_independence(q1: u64, a1: i64, q2: u64, a2: i64) -> Result<CrtCheck> {
    if q1 < 2 || q2 < 2 || gcd(q1, q2) != 1 {
        return Err(LabError::param("q", "moduli must be coprime and at least 2"));
    }
    let modulus = q1
        .checked_mul(q2)
        .filter(|&m| m <= 1 << 32)
        .ok_or_else(|| LabError::param("q", "q1·q2 too large to enumerate"))?;
    let hit = |n: u64, q: u64, a: i64| (n as i128 + a as i128).rem_euclid(q as i128) == 0;
    let mut check = CrtCheck {
        modulus,
        first: 0,
        second: 0,
        both: 0,
    };
    for n in 0..modulus {
        let (e1, e2) = (hit(n, q1, a1), hit(n, q2, a2));
        check.first += e1 as u64;
        check.second += e2 as u64;
        check.both += (e1 && e2) as u64;
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_three_frequency() {
        let f = edge_probability_test(2, 5, 100_000, 1).unwrap();
        assert!((f - 1.0 / 3.0).abs() < 0.01, "{f}");
    }

    #[test]
    fn gap_101_frequency() {
        let f = edge_probability_test(0, 101, 1_000_000, 2).unwrap();
        assert!((f - 1.0 / 101.0).abs() < 0.002, "{f}");
    }

    #[test]
    fn rejects_bad_gaps() {
        assert!(edge_probability_test(0, 2, 10, 0).is_err());
        assert!(edge_probability_test(0, 9, 10, 0).is_err());
        assert!(edge_probability_test(0, 3, 0, 0).is_err());
    }

    #[test]
    fn joint_frequency_factorizes() {
        let j = joint_edge_frequency((0, 3), (1, 6), 200_000, 3).unwrap();
        assert!((j.both - j.first * j.second).abs() < 0.01);
    }

    #[test]
    fn crt_identity_exhaustive() {
        for (q1, q2) in [(3, 5), (3, 7), (5, 7)] {
            for a1 in 0..q1 as i64 {
                for a2 in 0..q2 as i64 {
                    let c = crt_edge_independence(q1, a1, q2, a2).unwrap();
                    assert_eq!((c.first, c.second, c.both), (q2, q1, 1));
                    assert!(c.independent());
                }
            }
        }
        assert!(crt_edge_independence(3, 0, 9, 0).is_err());
    }
}
