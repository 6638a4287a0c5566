use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::primes::primes_up_to;
use crate::scalar::Scalar;
use crate::sieve::factor_oracle;

/// Truncated three-prime singular series with its error bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularData<T> {
    pub m: i64,
    /// `∏_{p | m} (1 − 1/(p−1)²) · ∏_{p ∤ m} (1 + 1/(p−1)³)`, all `p ≤ cutoff` plus every `p | m`.
    pub value: T,
    pub cutoff: u64,
    /// Bound on `|𝔖(m) − value|`.
    pub tail_bound: T,
    /// `(p, f(p), g(p))` for each odd prime `p | m`.
    pub fg: Vec<(u64, T, T)>,
}

pub const DEFAULT_SINGULAR_CUTOFF: u64 = 1_000_000;

/// `Σ_{p > x} ln(1 + 1/(p−1)³) ≤ Σ_{n ≥ x} 1/n³ ≤ 1/(x−1)²/2 + 1/x³`, below `2/x²`.
fn log_tail(x: u64) -> f64 {
    2.0 / (x as f64 * x as f64)
}

pub fn singular_series<T: Float>(m: i64, cutoff: u64) -> Result<SingularData<T>> {
    if m % 2 == 0 {
        return Err(LabError::param("m", format!("{m} is even; only odd targets are in scope")));
    }
    if cutoff < 100 {
        return Err(LabError::param("cutoff", "prime cutoff must be at least 100"));
    }
    let lift = |v: f64| T::from(v).expect("representable");
    let divisors: Vec<u64> = factor_oracle(m.unsigned_abs())?.primes().collect();
    let factor = |p: u64, divides: bool| {
        let d = lift((p - 1) as f64);
        if divides {
            T::one() - (d * d).recip()
        } else {
            T::one() + (d * d * d).recip()
        }
    };
    let mut value = T::one();
    for p in primes_up_to(cutoff) {
        value = value * factor(p, divisors.contains(&p));
    }
    for &p in divisors.iter().filter(|&&p| p > cutoff) {
        value = value * factor(p, true) / factor(p, false);
    }
    // The remaining factors lie in [1, exp(log_tail)].
    let tail_bound = value * lift(log_tail(cutoff).exp_m1());
    let fg = divisors
        .iter()
        .map(|&p| {
            let (f, g) = fg_values::<f64>(p).expect("odd prime");
            (p, lift(f), lift(g))
        })
        .collect();
    Ok(SingularData {
        m,
        value,
        cutoff,
        tail_bound,
        fg,
    })
}

fn check_prime(p: u64) -> Result<()> {
    if crate::primes::is_prime(p) {
        Ok(())
    } else {
        Err(LabError::param("p", format!("{p} is not prime")))
    }
}

/// `g(p) = 1 / (1 + 1/(p−1)³)`.
pub fn g_value<T: Scalar>(p: u64) -> Result<T> {
    check_prime(p)?;
    let d = T::from_u64(p - 1);
    Ok(T::one() / (T::one() + T::one() / (d.clone() * d.clone() * d)))
}

/// `f(p) = (1 + 1/(p−1)³) / (1 − 1/(p−1)²)`; `f(2)` divides by zero and is rejected.
pub fn f_value<T: Scalar>(p: u64) -> Result<T> {
    check_prime(p)?;
    if p == 2 {
        return Err(LabError::Singular("f(2) has a vanishing denominator".into()));
    }
    let d = T::from_u64(p - 1);
    let cube = T::one() + T::one() / (d.clone() * d.clone() * d.clone());
    Ok(cube / (T::one() - T::one() / (d.clone() * d)))
}

pub fn fg_values<T: Scalar>(p: u64) -> Result<(T, T)> {
    Ok((f_value(p)?, g_value(p)?))
}

fn multiplicative<T: Scalar>(n: u64, at_prime: fn(u64) -> Result<T>) -> Result<T> {
    if n == 0 {
        return Err(LabError::param("n", "must be positive"));
    }
    factor_oracle(n)?
        .primes()
        .try_fold(T::one(), |acc, p| Ok(acc * at_prime(p)?))
}

/// `f` extended multiplicatively with `f(p^α) = f(p)`; `f(1) = 1`.
pub fn f_of<T: Scalar>(n: u64) -> Result<T> {
    multiplicative(n, f_value::<T>)
}

/// `g` extended multiplicatively with `g(p^α) = g(p)`; `g(1) = 1`.
pub fn g_of<T: Scalar>(n: u64) -> Result<T> {
    multiplicative(n, g_value::<T>)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn fg_at_three() {
        let (f, g) = fg_values::<BigRational>(3).unwrap();
        assert_eq!(f, ratio(3, 2));
        assert_eq!(g, ratio(8, 9));
    }

    #[test]
    fn f_at_two_is_singular() {
        assert!(matches!(fg_values::<f64>(2), Err(LabError::Singular(_))));
        assert!(fg_values::<f64>(9).is_err());
        assert_eq!(g_value::<BigRational>(2).unwrap(), ratio(1, 2));
    }

    #[test]
    fn fg_product_identity() {
        for p in primes_up_to(2_000).into_iter().skip(1) {
            let (f, g) = fg_values::<BigRational>(p).unwrap();
            let d = ratio(p as i64 - 1, 1);
            let expected = ratio(1, 1) / (ratio(1, 1) - ratio(1, 1) / (d.clone() * d));
            assert_eq!(f * g, expected);
        }
    }

    #[test]
    fn multiplicative_extension() {
        assert_eq!(f_of::<BigRational>(1).unwrap(), ratio(1, 1));
        assert_eq!(f_of::<BigRational>(9).unwrap(), ratio(3, 2));
        let (f5, g5) = fg_values::<BigRational>(5).unwrap();
        assert_eq!(f_of::<BigRational>(15).unwrap(), ratio(3, 2) * f5);
        assert_eq!(g_of::<BigRational>(30).unwrap(), ratio(1, 2) * ratio(8, 9) * g5);
        assert!(f_of::<f64>(6).is_err());
    }

    #[test]
    fn g_increases_to_one() {
        let gs: Vec<f64> = primes_up_to(500)
            .into_iter()
            .skip(1)
            .map(|p| fg_values::<f64>(p).unwrap().1)
            .collect();
        assert!(gs.windows(2).all(|w| w[0] < w[1] && w[1] < 1.0));
        let g101 = fg_values::<f64>(101).unwrap().1;
        assert!(g101 > 0.999999 && g101 < 1.0);
    }

    #[test]
    fn three_over_one() {
        let s1 = singular_series::<f64>(1, 100_000).unwrap();
        let s3 = singular_series::<f64>(3, 100_000).unwrap();
        // Only the p = 3 factor differs; rounding accumulates over ~10⁴ factors.
        assert!((s3.value / s1.value - 2.0 / 3.0).abs() < 1e-12);
        let (f3, _) = fg_values::<BigRational>(3).unwrap();
        assert_eq!(ratio(1, 1) / f3, ratio(2, 3));
        assert_eq!(s3.fg.len(), 1);
    }

    #[test]
    fn stable_across_cutoffs() {
        let a = singular_series::<f64>(1, 100_000).unwrap();
        let b = singular_series::<f64>(1, 1_000_000).unwrap();
        assert!((a.value - b.value).abs() < 1e-6);
        assert!((a.value - b.value).abs() <= a.tail_bound);
        assert!(b.value > 2.0);
    }

    #[test]
    fn large_prime_divisor_beyond_cutoff() {
        // 1_000_003 is prime.
        let big = singular_series::<f64>(1_000_003, 1_000).unwrap();
        let one = singular_series::<f64>(1, 1_000).unwrap();
        let d = 1_000_002.0f64;
        let swap = (1.0 - 1.0 / (d * d)) / (1.0 + 1.0 / (d * d * d));
        assert!((big.value / one.value - swap).abs() < 1e-15);
    }

    #[test]
    fn rejects_even_and_small_cutoff() {
        assert!(singular_series::<f64>(2, 1_000).is_err());
        assert!(singular_series::<f64>(1, 50).is_err());
    }

    #[test]
    fn positive_for_odd_targets() {
        for m in (-99..=99).step_by(2) {
            assert!(singular_series::<f64>(m, 100).unwrap().value > 0.0);
        }
    }
}
