//! Prime enumeration and primality.

use crate::error::{LabError, Result};

/// All primes `p <= bound`, by a plain sieve of Eratosthenes over odd numbers.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let bound = usize::try_from(bound).expect("prime bound exceeds address space");
    // composite[i] describes 2i + 1
    let half = bound / 2 + 1;
    let mut composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= bound {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(estimate_pi(bound as u64));
    out.push(2);
    out.extend(
        (1..half)
            .filter(|&i| !composite[i] && 2 * i < bound)
            .map(|i| (2 * i + 1) as u64),
    );
    out
}

fn estimate_pi(x: u64) -> usize {
    if x < 17 {
        return 8;
    }
    let xf = x as f64;
    (1.26 * xf / xf.ln()) as usize
}

/// Primality flags for every integer of `[lo, hi]`, sieved against the primes up to `sqrt(hi)`.
#[derive(Debug, Clone)]
pub struct PrimeWindow {
    lo: u64,
    flags: Vec<bool>,
}

impl PrimeWindow {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if hi < lo {
            return Err(LabError::param("hi", format!("empty interval [{lo}, {hi}]")));
        }
        let len = usize::try_from(hi - lo + 1)
            .map_err(|_| LabError::Range(format!("interval [{lo}, {hi}] too long")))?;
        let mut flags = vec![true; len];
        for (offset, flag) in flags.iter_mut().enumerate() {
            if lo + (offset as u64) < 2 {
                *flag = false;
            } else {
                break;
            }
        }
        for p in primes_up_to(isqrt(hi)) {
            let first = (p * p).max(lo.div_ceil(p) * p);
            let mut m = first;
            while m <= hi {
                flags[(m - lo) as usize] = false;
                m += p;
            }
        }
        Ok(PrimeWindow { lo, flags })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.lo + self.flags.len() as u64 - 1
    }

    /// `Some(flag)` inside the window, `None` outside it.
    pub fn is_prime(&self, n: u64) -> Option<bool> {
        let offset = n.checked_sub(self.lo)?;
        self.flags.get(offset as usize).copied()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(move |(i, _)| self.lo + i as u64)
    }
}

/// Primes in the closed interval `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < lo {
        return Vec::new();
    }
    PrimeWindow::new(lo, hi)
        .map(|w| w.primes().collect())
        .unwrap_or_default()
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Pollard's rho with Brent's cycle detection; `n` must be odd and composite.
pub(crate) fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}
