use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::primes::{is_prime, pollard_rho};

/// Complete factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub n: u64,
    /// `(prime, exponent)` in increasing prime order.
    pub prime_powers: Vec<(u64, u32)>,
}

impl Factorization {
    /// Ω(n), prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.prime_powers.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.prime_powers.iter().all(|&(_, e)| e == 1)
    }

    pub fn liouville(&self) -> i8 {
        if self.big_omega().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn mobius(&self) -> i8 {
        if self.is_squarefree() {
            self.liouville()
        } else {
            0
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.prime_powers.iter().map(|&(p, _)| p)
    }
}

const TRIAL_LIMIT: u64 = 1 << 16;

/// Factor `n` by trial division, finishing large cofactors with Miller–Rabin and Pollard rho.
pub fn factor_oracle(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(LabError::param("n", "zero has no factorization"));
    }
    let mut rest = n;
    let mut found: Vec<u64> = Vec::new();
    while rest.is_multiple_of(2) {
        found.push(2);
        rest /= 2;
    }
    let mut d = 3u64;
    while d <= TRIAL_LIMIT && d * d <= rest {
        while rest.is_multiple_of(d) {
            found.push(d);
            rest /= d;
        }
        d += 2;
    }
    if rest > 1 {
        split_large(rest, &mut found);
    }
    found.sort_unstable();
    let mut prime_powers: Vec<(u64, u32)> = Vec::new();
    for p in found {
        match prime_powers.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => prime_powers.push((p, 1)),
        }
    }
    Ok(Factorization { n, prime_powers })
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}
