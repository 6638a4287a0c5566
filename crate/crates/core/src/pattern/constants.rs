use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::primes::primes_up_to;

/// Limiting frequencies for squarefree pairs, from Euler products truncated at `cutoff`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedConstants<T> {
    pub cutoff: u64,
    /// 1/ζ(2) = 6/π², density of squarefree integers.
    pub inv_zeta2: T,
    /// ∏_p (1 − 2/p²), density of `n` with `n` and `n+1` both squarefree.
    pub c: T,
    /// Rigorous bound on `|c − truncated product|`.
    pub c_tail_bound: T,
    /// 1 − 2/ζ(2) + c, frequency of `(μ(n), μ(n+1)) = (0, 0)`.
    pub pair_zero_zero: T,
    /// (1/ζ(2) − c)/2, frequency of each of `(±1, 0)` and `(0, ±1)`.
    pub pair_single: T,
}

pub const DEFAULT_CONSTANT_CUTOFF: u64 = 1_000_000;

/// Upper bound for `Σ_{p > x} 1/p²`.
///
/// Partial summation with π(t) < 1.25506 t / ln t gives
/// `Σ_{p>x} p⁻² ≤ ∫_x^∞ 2π(t) t⁻³ dt ≤ 2.51012 / (x ln x)`.
pub fn prime_square_tail(x: u64) -> f64 {
    let x = x as f64;
    2.51012 / (x * x.ln())
}

pub fn predicted_constants<T: Float>(cutoff: u64) -> Result<PredictedConstants<T>> {
    if cutoff < 3 {
        return Err(LabError::param("cutoff", "prime cutoff must be at least 3"));
    }
    let lift = |v: f64| T::from(v).expect("representable constant");
    let two = lift(2.0);
    let c = primes_up_to(cutoff).into_iter().fold(T::one(), |acc, p| {
        let p = lift(p as f64);
        acc * (T::one() - two / (p * p))
    });
    let c_tail_bound = c * lift(2.0 * prime_square_tail(cutoff));
    let inv_zeta2 = lift(6.0) / (lift(std::f64::consts::PI) * lift(std::f64::consts::PI));
    Ok(PredictedConstants {
        cutoff,
        inv_zeta2,
        c,
        c_tail_bound,
        pair_zero_zero: T::one() - two * inv_zeta2 + c,
        pair_single: (inv_zeta2 - c) / two,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_constants() {
        let k = predicted_constants::<f64>(DEFAULT_CONSTANT_CUTOFF).unwrap();
        assert!((k.c - 0.3226).abs() < 1e-4, "c = {}", k.c);
        assert!((k.inv_zeta2 - 0.6079).abs() < 1e-4);
        assert!((k.pair_zero_zero - 0.1067).abs() < 1e-4);
        assert!((k.pair_single - 0.1426).abs() < 1e-4);
        assert!(k.c_tail_bound < 1e-6);
    }

    #[test]
    fn truncations_agree() {
        let coarse = predicted_constants::<f64>(100_000).unwrap();
        let fine = predicted_constants::<f64>(1_000_000).unwrap();
        assert!((coarse.c - fine.c).abs() < 1e-6);
        // the coarse bound must cover the refinement
        assert!(coarse.c - fine.c <= coarse.c_tail_bound);
    }

    #[test]
    fn single_precision_agrees_loosely() {
        let k = predicted_constants::<f32>(10_000).unwrap();
        assert!((k.c - 0.3226).abs() < 1e-3);
    }
}
