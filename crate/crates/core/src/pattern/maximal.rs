use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Discrete maximal function of a sequence on `[-N, N]` and the averaged
/// comparison `(1/N) Σ M(n)` against `((1/N) Σ a_n²)^{1/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalReport<T> {
    pub half_width: usize,
    /// `M(n)` for `n = -N..=N`.
    pub maximal: Vec<T>,
    pub lhs: T,
    pub rhs: T,
    /// `lhs / rhs`, or zero when the input vanishes.
    pub ratio: T,
}

impl<T: Copy> MaximalReport<T> {
    pub fn at(&self, n: i64) -> T {
        self.maximal[(n + self.half_width as i64) as usize]
    }
}

/// `M(n) = sup_{r >= 1} (1/r) Σ_{|n-m| <= r} a_m`, exactly, for every `|n| <= N`.
///
/// `values[i]` is `a_{i - N}`; the slice length must be `2N + 1` with `N >= 1`.
pub fn hl_maximal<T: Float>(values: &[T]) -> Result<MaximalReport<T>> {
    if values.len() < 3 || values.len().is_multiple_of(2) {
        return Err(LabError::param(
            "values",
            "expected an odd-length sequence indexed by [-N, N] with N >= 1",
        ));
    }
    if values.iter().any(|&v| !(v >= T::zero())) {
        return Err(LabError::param("values", "entries must be nonnegative"));
    }
    let n_half = values.len() / 2;
    let len = values.len();
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(T::zero());
    for &v in values {
        let last = *prefix.last().unwrap();
        prefix.push(last + v);
    }
    let window_sum = |centre: usize, r: usize| {
        let lo = centre.saturating_sub(r);
        let hi = (centre + r).min(len - 1);
        prefix[hi + 1] - prefix[lo]
    };
    let maximal: Vec<T> = (0..len)
        .map(|i| {
            // past r = |n| + N the window holds the whole support and 1/r only shrinks
            let r_max = (i.abs_diff(n_half) + n_half).max(1);
            (1..=r_max).fold(T::zero(), |best, r| {
                let avg = window_sum(i, r) / T::from(r).unwrap();
                if avg > best {
                    avg
                } else {
                    best
                }
            })
        })
        .collect();
    let x = T::from(n_half).unwrap();
    let lhs = maximal.iter().fold(T::zero(), |acc, &m| acc + m) / x;
    let rhs = (values.iter().fold(T::zero(), |acc, &a| acc + a * a) / x).sqrt();
    let ratio = if rhs > T::zero() { lhs / rhs } else { T::zero() };
    Ok(MaximalReport {
        half_width: n_half,
        maximal,
        lhs,
        rhs,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(values: &[f64], n: i64) -> f64 {
        let half = (values.len() / 2) as i64;
        let a = |m: i64| {
            if m.abs() <= half {
                values[(m + half) as usize]
            } else {
                0.0
            }
        };
        (1..=4 * half + 4)
            .map(|r| (n - r..=n + r).map(a).sum::<f64>() / r as f64)
            .fold(0.0, f64::max)
    }

    #[test]
    fn delta_mass() {
        let mut values = vec![0.0; 21];
        values[10] = 1.0;
        let rep = hl_maximal(&values).unwrap();
        assert_eq!(rep.at(0), 1.0);
        for n in 1..10 {
            assert!(rep.at(n) <= rep.at(n - 1));
            assert_eq!(rep.at(n), rep.at(-n));
            assert!((rep.at(n) - 1.0 / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_sequence_interior_value() {
        // with the 1/r normalisation a window of radius 1 holds three unit masses
        let values = vec![1.0; 41];
        let rep = hl_maximal(&values).unwrap();
        for n in -19..=19 {
            assert_eq!(rep.at(n), 3.0);
        }
        assert!(rep.ratio < 7.0);
    }

    #[test]
    fn zero_input() {
        let rep = hl_maximal(&[0.0f64; 7]).unwrap();
        assert_eq!((rep.lhs, rep.rhs, rep.ratio), (0.0, 0.0, 0.0));
    }

    #[test]
    fn agrees_with_unbounded_radius_search() {
        let values: Vec<f64> = (0..33).map(|i| ((i * 7919) % 5) as f64).collect();
        let rep = hl_maximal(&values).unwrap();
        for n in -16..=16 {
            assert!((rep.at(n) - brute(&values, n)).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(hl_maximal(&[1.0f64, 2.0]).is_err());
        assert!(hl_maximal(&[1.0f64, -2.0, 0.0]).is_err());
        assert!(hl_maximal(&[1.0f64]).is_err());
    }
}
