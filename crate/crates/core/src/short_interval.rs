//! Short-interval sums of λ and μ, optionally twisted by a real character.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::sieve::{par_blocks, SieveSegment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticFunction {
    Lambda,
    Mu,
}

impl FromStr for ArithmeticFunction {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" | "liouville" => Ok(ArithmeticFunction::Lambda),
            "mu" | "mobius" => Ok(ArithmeticFunction::Mu),
            other => Err(LabError::param("fn", format!("unknown function `{other}`"))),
        }
    }
}

/// A real completely multiplicative twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Twist {
    None,
    /// The nontrivial character mod 3.
    Chi3,
    /// +1 at every odd prime and `-eps` at 2.
    ChiEps { eps: i8 },
}

impl Twist {
    pub fn chi_eps(eps: i8) -> Result<Self> {
        match eps {
            1 | -1 => Ok(Twist::ChiEps { eps }),
            _ => Err(LabError::param("eps", "must be +1 or -1")),
        }
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Twist::None => f.write_str("none"),
            Twist::Chi3 => f.write_str("chi3"),
            Twist::ChiEps { eps: 1 } => f.write_str("chi+"),
            Twist::ChiEps { .. } => f.write_str("chi-"),
        }
    }
}

impl FromStr for Twist {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Twist::None),
            "chi3" => Ok(Twist::Chi3),
            "chi+" | "chi_eps+" => Ok(Twist::ChiEps { eps: 1 }),
            "chi-" | "chi_eps-" => Ok(Twist::ChiEps { eps: -1 }),
            other => Err(LabError::param("twist", format!("unknown twist `{other}`"))),
        }
    }
}

/// χ(n) for the given twist.
pub fn twist_value(n: u64, twist: Twist) -> i8 {
    match twist {
        Twist::None => 1,
        Twist::Chi3 => match n % 3 {
            1 => 1,
            2 => -1,
            _ => 0,
        },
        Twist::ChiEps { eps } => {
            if n == 0 {
                return 0;
            }
            if n.trailing_zeros().is_multiple_of(2) {
                1
            } else {
                -eps
            }
        }
    }
}

#[inline]
fn value_at(segment: &SieveSegment, i: usize, f: ArithmeticFunction, twist: Twist) -> i64 {
    let base = match f {
        ArithmeticFunction::Lambda => segment.lambda_at(i),
        ArithmeticFunction::Mu => segment.mu_at(i),
    };
    (base * twist_value(segment.start() + i as u64, twist)) as i64
}

pub const PROFILE_QUANTILES: [f64; 3] = [0.5, 0.9, 0.99];
pub const PROFILE_EPSILONS: [f64; 3] = [0.05, 0.1, 0.2];

/// Distribution of `|Σ_{j<h} f(n+j)χ(n+j)| / h` over `n` in a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyProfile {
    pub function: ArithmeticFunction,
    pub twist: Twist,
    pub h: u64,
    pub window: (u64, u64),
    /// Number of starting points `n`.
    pub count: u64,
    /// Σ_n |S(n)|, exact.
    pub sum_abs: u64,
    pub mean_abs: f64,
    /// `(q, value)` pairs for q in [`PROFILE_QUANTILES`].
    pub quantiles: Vec<(f64, f64)>,
    /// `(ε, fraction with |S|/h > ε)` pairs for ε in [`PROFILE_EPSILONS`].
    pub exceed: Vec<(f64, f64)>,
    /// `hist[v]` counts starting points with `|S(n)| = v`.
    #[serde(skip)]
    pub histogram: Vec<u64>,
}

impl DiscrepancyProfile {
    /// Mean of the raw `|S(n)|`, unnormalised.
    pub fn mean_abs_sum(&self) -> f64 {
        self.sum_abs as f64 / self.count as f64
    }

    /// Fraction of starting points with `|S(n)| / h > eps`.
    pub fn exceed_fraction(&self, eps: f64) -> f64 {
        let over: u64 = self
            .histogram
            .iter()
            .enumerate()
            .filter(|&(v, _)| v as f64 / self.h as f64 > eps)
            .map(|(_, &c)| c)
            .sum();
        over as f64 / self.count as f64
    }

    fn quantile(&self, q: f64) -> f64 {
        let target = (q * self.count as f64).ceil().max(1.0) as u64;
        let mut seen = 0;
        for (v, &c) in self.histogram.iter().enumerate() {
            seen += c;
            if seen >= target {
                return v as f64 / self.h as f64;
            }
        }
        1.0
    }
}

/// Sums over `h` consecutive terms starting at every `n` in `window`, maintained by sliding.
///
/// The sum at `n` covers `n, n+1, ..., n+h-1`.
pub fn interval_profile(
    function: ArithmeticFunction,
    twist: Twist,
    h: u64,
    window: (u64, u64),
) -> Result<DiscrepancyProfile> {
    let (lo, hi) = window;
    if h == 0 {
        return Err(LabError::param("h", "interval length must be at least 1"));
    }
    if lo == 0 || hi < lo || hi - lo + 1 < h {
        return Err(LabError::param(
            "window",
            format!("[{lo}, {hi}] is narrower than h = {h}"),
        ));
    }
    let width = h as usize;
    let blocks = par_blocks(lo, hi, 0, h - 1, None, |seg, blo, bhi| {
        let mut hist = vec![0u64; width + 1];
        let base = (blo - seg.start()) as usize;
        let mut sum: i64 = (0..width).map(|j| value_at(seg, base + j, function, twist)).sum();
        let steps = (bhi - blo) as usize;
        for s in 0..=steps {
            hist[sum.unsigned_abs() as usize] += 1;
            if s < steps {
                sum += value_at(seg, base + s + width, function, twist)
                    - value_at(seg, base + s, function, twist);
            }
        }
        hist
    })?;
    let mut histogram = vec![0u64; width + 1];
    for block in blocks {
        for (acc, c) in histogram.iter_mut().zip(block) {
            *acc += c;
        }
    }
    let count = hi - lo + 1;
    let sum_abs: u64 = histogram
        .iter()
        .enumerate()
        .map(|(v, &c)| v as u64 * c)
        .sum();
    let mut profile = DiscrepancyProfile {
        function,
        twist,
        h,
        window,
        count,
        sum_abs,
        mean_abs: sum_abs as f64 / (count as f64 * h as f64),
        quantiles: Vec::new(),
        exceed: Vec::new(),
        histogram,
    };
    profile.quantiles = PROFILE_QUANTILES
        .iter()
        .map(|&q| (q, profile.quantile(q)))
        .collect();
    profile.exceed = PROFILE_EPSILONS
        .iter()
        .map(|&e| (e, profile.exceed_fraction(e)))
        .collect();
    Ok(profile)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coincidence {
    /// `n <= N` with μ²(n) = μ²(n+1) = 1.
    pub pairs: u64,
    /// Those pairs with μχ(n) = μχ(n+1).
    pub equal: u64,
    pub fraction: f64,
}

/// Among consecutive squarefree pairs `n, n+1` with `n <= N`, how often μχ_ε agrees.
///
/// `None` when the range holds no squarefree pair.
pub fn mu_chi_coincidence(n: u64, eps: i8) -> Result<Option<Coincidence>> {
    let twist = Twist::chi_eps(eps)?;
    if n == 0 {
        return Ok(None);
    }
    let blocks = par_blocks(1, n, 0, 1, None, |seg, lo, hi| {
        let base = (lo - seg.start()) as usize;
        let mut pairs = 0u64;
        let mut equal = 0u64;
        for i in 0..=(hi - lo) as usize {
            let (a, b) = (seg.mu_at(base + i), seg.mu_at(base + i + 1));
            if a != 0 && b != 0 {
                pairs += 1;
                if value_at(seg, base + i, ArithmeticFunction::Mu, twist)
                    == value_at(seg, base + i + 1, ArithmeticFunction::Mu, twist)
                {
                    equal += 1;
                }
            }
        }
        (pairs, equal)
    })?;
    let (pairs, equal) = blocks
        .into_iter()
        .fold((0, 0), |(p, e), (bp, be)| (p + bp, e + be));
    Ok((pairs > 0).then(|| Coincidence {
        pairs,
        equal,
        fraction: equal as f64 / pairs as f64,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_values() {
        assert_eq!(twist_value(6, Twist::Chi3), 0);
        assert_eq!(twist_value(5, Twist::Chi3), -1);
        assert_eq!(twist_value(7, Twist::Chi3), 1);
        assert_eq!(twist_value(8, Twist::ChiEps { eps: 1 }), -1);
        assert_eq!(twist_value(8, Twist::ChiEps { eps: -1 }), 1);
        assert_eq!(twist_value(12, Twist::ChiEps { eps: 1 }), 1);
        assert_eq!(twist_value(15, Twist::ChiEps { eps: 1 }), 1);
    }

    #[test]
    fn chi3_is_completely_multiplicative() {
        for a in 1..60u64 {
            for b in 1..60u64 {
                for t in [Twist::Chi3, Twist::ChiEps { eps: 1 }, Twist::ChiEps { eps: -1 }] {
                    assert_eq!(twist_value(a * b, t), twist_value(a, t) * twist_value(b, t));
                }
            }
        }
    }

    #[test]
    fn single_term_profile_is_one() {
        let p = interval_profile(ArithmeticFunction::Lambda, Twist::None, 1, (1, 1000)).unwrap();
        assert_eq!(p.mean_abs, 1.0);
        assert_eq!(p.exceed_fraction(0.5), 1.0);
    }

    #[test]
    fn errors() {
        assert!(interval_profile(ArithmeticFunction::Mu, Twist::None, 0, (1, 10)).is_err());
        assert!(interval_profile(ArithmeticFunction::Mu, Twist::None, 20, (1, 10)).is_err());
        assert!(mu_chi_coincidence(100, 0).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for t in [Twist::None, Twist::Chi3, Twist::ChiEps { eps: 1 }, Twist::ChiEps { eps: -1 }] {
            assert_eq!(t.to_string().parse::<Twist>().unwrap(), t);
        }
    }
}
