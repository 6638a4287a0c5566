use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lattice::lattice_count;
use super::singular::{f_of, g_of, singular_series, DEFAULT_SINGULAR_CUTOFF};
use crate::error::{LabError, Result};
use crate::primes::{gcd, primes_between, primes_up_to, PrimeWindow};
use crate::sieve::factor_oracle;

/// Congruences `p₁ ≡ a₁`, `p₂ ≡ a₂ (mod k²)` with `k` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classes {
    pub k: u64,
    pub a1: i64,
    pub a2: i64,
}

/// Triples `(p₁, p₂, p₃) ∈ (X,3X] × (5X,7X] × (3X,5X]` of primes with `m = −p₁ + p₂ − p₃`,
/// where `A − p₁` and `A − p₁ + p₂` have no square factor `p²` with `p ≤ w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSpec {
    pub x: u64,
    pub m: i64,
    pub shift: i64,
    pub w: u64,
    pub classes: Option<Classes>,
}

impl TripleSpec {
    pub fn new(x: u64, m: i64, shift: i64, w: u64) -> Result<Self> {
        let spec = TripleSpec {
            x,
            m,
            shift,
            w,
            classes: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_classes(mut self, k: u64, a1: i64, a2: i64) -> Result<Self> {
        self.classes = Some(Classes { k, a1, a2 });
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x == 0 || self.x > 1 << 40 {
            return Err(LabError::param("X", "scale must lie in [1, 2^40]"));
        }
        if self.m % 2 == 0 {
            return Err(LabError::param("m", format!("{} is even; −p₁ + p₂ − p₃ is odd", self.m)));
        }
        if self.m.unsigned_abs() > self.x {
            return Err(LabError::param("m", "target must lie in [−X, X]"));
        }
        if let Some(c) = self.classes {
            if c.k == 0 {
                return Err(LabError::param("k", "modulus must be positive"));
            }
            if !factor_oracle(c.k)?.is_squarefree() {
                return Err(LabError::param("k", format!("{} is not squarefree", c.k)));
            }
            if c.k > 1 << 31 {
                return Err(LabError::param("k", "k² must fit in 64 bits"));
            }
        }
        Ok(())
    }

    /// `(X,3X]`, `(5X,7X]`, `(3X,5X]`.
    pub fn intervals(&self) -> [(u64, u64); 3] {
        let x = self.x;
        [(x + 1, 3 * x), (5 * x + 1, 7 * x), (3 * x + 1, 5 * x)]
    }
}

fn count(spec: &TripleSpec, classes: Option<Classes>) -> Result<u64> {
    spec.validate()?;
    let [i1, i2, i3] = spec.intervals();
    let first = primes_between(i1.0, i1.1);
    let third = primes_between(i3.0, i3.1);
    let second = PrimeWindow::new(i2.0, i2.1)?;
    let squares: Vec<i64> = primes_up_to(spec.w)
        .into_iter()
        .map(|p| (p * p) as i64)
        .collect();
    let rough = |v: i64| squares.iter().all(|&s| v % s != 0);
    let in_class = |p: u64, a: i64, k2: u64| (p as i128 - a as i128).rem_euclid(k2 as i128) == 0;
    let (lo2, hi2) = (i2.0 as i64, i2.1 as i64);
    Ok(first
        .par_iter()
        .map(|&p1| {
            if let Some(c) = classes {
                if !in_class(p1, c.a1, c.k * c.k) {
                    return 0;
                }
            }
            let left = spec.shift - p1 as i64;
            if !rough(left) {
                return 0;
            }
            third
                .iter()
                .filter(|&&p3| {
                    let p2 = spec.m + p1 as i64 + p3 as i64;
                    (lo2..=hi2).contains(&p2)
                        && second.is_prime(p2 as u64) == Some(true)
                        && classes.is_none_or(|c| in_class(p2 as u64, c.a2, c.k * c.k))
                        && rough(left + p2)
                })
                .count() as u64
        })
        .sum())
}

/// Exact count; congruence classes in `spec` are ignored.
pub fn count_triples(spec: &TripleSpec) -> Result<u64> {
    count(spec, None)
}

/// Exact count with the congruences `p₁ ≡ a₁`, `p₂ ≡ a₂ (mod k²)` and the `w` condition.
pub fn count_triples_in_classes(spec: &TripleSpec) -> Result<u64> {
    let classes = spec
        .classes
        .ok_or_else(|| LabError::param("k", "no congruence classes given"))?;
    count(spec, Some(classes))
}

/// Euler's totient of a squarefree `k`.
fn totient_squarefree(k: u64) -> Result<u64> {
    Ok(factor_oracle(k)?.primes().map(|p| p - 1).product())
}

/// Main term `𝒢(m) 𝔖(m) / log³X · 1_{coprime} · f((k,m)) g(k) / (k φ(k)³)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriplePrediction {
    pub lattice: u64,
    pub singular: f64,
    pub tail_bound: f64,
    /// `(k, −a₁ + a₂ − m) = (k, a₁) = (k, a₂) = 1`.
    pub coprime: bool,
    pub f_km: f64,
    pub g_k: f64,
    /// `k φ(k)³`.
    pub density: f64,
    pub value: f64,
}

pub fn main_term_prediction(spec: &TripleSpec) -> Result<TriplePrediction> {
    main_term_prediction_with_cutoff(spec, DEFAULT_SINGULAR_CUTOFF)
}

pub fn main_term_prediction_with_cutoff(spec: &TripleSpec, cutoff: u64) -> Result<TriplePrediction> {
    spec.validate()?;
    let c = spec.classes.unwrap_or(Classes { k: 1, a1: 0, a2: 0 });
    let k = c.k;
    let g_mod = |v: i64| gcd(k, v.unsigned_abs());
    let coprime = g_mod(c.a2 - c.a1 - spec.m) == 1 && g_mod(c.a1) == 1 && g_mod(c.a2) == 1;
    let lattice = lattice_count(spec.m, spec.x);
    let singular = singular_series::<f64>(spec.m, cutoff)?;
    let f_km = f_of::<f64>(g_mod(spec.m))?;
    let g_k = g_of::<f64>(k)?;
    let phi = totient_squarefree(k)? as f64;
    let density = k as f64 * phi * phi * phi;
    let log3 = (spec.x as f64).ln().powi(3);
    let value = if coprime {
        lattice as f64 * singular.value / log3 * f_km * g_k / density
    } else {
        0.0
    };
    Ok(TriplePrediction {
        lattice,
        singular: singular.value,
        tail_bound: singular.tail_bound,
        coprime,
        f_km,
        g_k,
        density,
        value,
    })
}
