use serde::{Deserialize, Serialize};

use super::sign::{SignField, SignPattern};
use crate::error::{LabError, Result};
use crate::sieve::{par_blocks, SieveSegment};

/// Plain and 1/n-weighted frequency of a property over a window of integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub window: (u64, u64),
    pub matches: u64,
    pub window_total: u64,
    pub frequency: f64,
    pub log_frequency: f64,
}

/// Raw counts behind a [`DensityEstimate`]; merging is associative.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Tally {
    pub matches: u64,
    pub total: u64,
    pub log_matches: f64,
    pub log_total: f64,
}

impl Tally {
    pub fn merge(self, other: Tally) -> Tally {
        Tally {
            matches: self.matches + other.matches,
            total: self.total + other.total,
            log_matches: self.log_matches + other.log_matches,
            log_total: self.log_total + other.log_total,
        }
    }

    pub fn estimate(&self, window: (u64, u64)) -> DensityEstimate {
        let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
        DensityEstimate {
            window,
            matches: self.matches,
            window_total: self.total,
            frequency: ratio(self.matches as f64, self.total as f64),
            log_frequency: ratio(self.log_matches, self.log_total),
        }
    }
}

/// Densities across a ladder of windows with min/max as lower/upper-limit surrogates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub pattern: SignPattern,
    pub field: SignField,
    pub scales: Vec<DensityEstimate>,
    pub min_frequency: f64,
    pub max_frequency: f64,
    pub min_log_frequency: f64,
    pub max_log_frequency: f64,
}

/// `(lo', hi')`: the part of `[lo, hi]` where the guard `n > left` holds.
fn guarded(lo: u64, hi: u64, pattern: &SignPattern) -> (u64, u64) {
    (lo.max(pattern.left() + 1), hi)
}

/// Slide over `[lo, hi]` inside `segment`, calling `hit(n)` for every match.
fn scan<F: FnMut(u64, bool)>(
    segment: &SieveSegment,
    lo: u64,
    hi: u64,
    pattern: &SignPattern,
    field: SignField,
    mut visit: F,
) {
    if lo > hi {
        return;
    }
    let (care, want) = pattern.masks();
    let len = pattern.len();
    let first = (lo - pattern.left() - segment.start()) as usize;
    let mut code = 0u64;
    for j in 0..len - 1 {
        code |= (field.minus_at(segment, first + j) as u64) << j;
    }
    let top = len - 1;
    for (step, n) in (lo..=hi).enumerate() {
        code |= (field.minus_at(segment, first + step + top) as u64) << top;
        visit(n, code & care == want);
        code >>= 1;
    }
}

fn check_cover(segment: &SieveSegment, lo: u64, hi: u64, pattern: &SignPattern) -> Result<()> {
    let need_lo = lo - pattern.left();
    let need_hi = hi + pattern.right();
    if !segment.contains(need_lo) || !segment.contains(need_hi) {
        return Err(LabError::param(
            "segment",
            format!(
                "segment [{}, {}) does not cover [{need_lo}, {need_hi}]",
                segment.start(),
                segment.end()
            ),
        ));
    }
    Ok(())
}

/// Every `n` in `[lo, hi]` with `n > k` matching `pattern`; `segment` must cover the pattern's reach.
pub fn match_pattern(
    segment: &SieveSegment,
    window: (u64, u64),
    pattern: &SignPattern,
    field: SignField,
) -> Result<Vec<u64>> {
    let (lo, hi) = window;
    if hi < lo || hi - lo + 1 < pattern.len() as u64 {
        return Err(LabError::param(
            "window",
            format!("[{lo}, {hi}] is narrower than the pattern `{pattern}`"),
        ));
    }
    let (lo, hi) = guarded(lo, hi, pattern);
    if lo > hi {
        return Ok(Vec::new());
    }
    check_cover(segment, lo, hi, pattern)?;
    let mut out = Vec::new();
    scan(segment, lo, hi, pattern, field, |n, hit| {
        if hit {
            out.push(n)
        }
    });
    Ok(out)
}

/// Tally a pattern over `[lo, hi]` using an already sieved segment.
pub fn tally_in_segment(
    segment: &SieveSegment,
    lo: u64,
    hi: u64,
    pattern: &SignPattern,
    field: SignField,
) -> Result<Tally> {
    let (lo, hi) = guarded(lo, hi, pattern);
    let mut tally = Tally::default();
    if lo > hi {
        return Ok(tally);
    }
    check_cover(segment, lo, hi, pattern)?;
    scan(segment, lo, hi, pattern, field, |n, hit| {
        let weight = 1.0 / n as f64;
        tally.total += 1;
        tally.log_total += weight;
        if hit {
            tally.matches += 1;
            tally.log_matches += weight;
        }
    });
    Ok(tally)
}

/// Tally a pattern over each window, sieving block by block.
pub fn pattern_tallies(
    pattern: &SignPattern,
    field: SignField,
    windows: &[(u64, u64)],
) -> Result<Vec<Tally>> {
    let Some(lo) = windows.iter().map(|w| w.0).min() else {
        return Ok(Vec::new());
    };
    let hi = windows.iter().map(|w| w.1).max().unwrap_or(lo);
    if windows.iter().any(|&(a, b)| a == 0 || b < a) {
        return Err(LabError::param("scales", "windows must satisfy 1 <= lo <= hi"));
    }
    let per_block = par_blocks(lo, hi, pattern.left(), pattern.right(), None, |seg, blo, bhi| {
        windows
            .iter()
            .map(|&(wlo, whi)| {
                let (a, b) = (wlo.max(blo), whi.min(bhi));
                if a > b {
                    Ok(Tally::default())
                } else {
                    tally_in_segment(seg, a, b, pattern, field)
                }
            })
            .collect::<Result<Vec<Tally>>>()
    })?;
    let mut merged = vec![Tally::default(); windows.len()];
    for block in per_block {
        for (acc, t) in merged.iter_mut().zip(block?) {
            *acc = acc.merge(t);
        }
    }
    Ok(merged)
}

/// Windows `[1, n / 2^j]` for `j = steps-1, ..., 0`, in increasing order.
pub fn geometric_ladder(n: u64, steps: u32) -> Vec<(u64, u64)> {
    (0..steps)
        .rev()
        .map(|j| (1, (n >> j).max(1)))
        .collect()
}

pub const DEFAULT_LADDER_STEPS: u32 = 7;

/// Density of `pattern` at each scale, with min/max across scales.
pub fn pattern_density(
    pattern: &SignPattern,
    field: SignField,
    scales: &[(u64, u64)],
) -> Result<DensityReport> {
    if scales.is_empty() {
        return Err(LabError::param("scales", "at least one window is required"));
    }
    if scales.windows(2).any(|w| w[1].1 <= w[0].1) {
        return Err(LabError::param("scales", "windows must be strictly increasing"));
    }
    let tallies = pattern_tallies(pattern, field, scales)?;
    let estimates: Vec<DensityEstimate> = tallies
        .iter()
        .zip(scales)
        .map(|(t, &w)| t.estimate(w))
        .collect();
    let fold = |f: fn(f64, f64) -> f64, pick: fn(&DensityEstimate) -> f64, init: f64| {
        estimates.iter().map(pick).fold(init, f)
    };
    Ok(DensityReport {
        pattern: pattern.clone(),
        field,
        min_frequency: fold(f64::min, |e| e.frequency, f64::INFINITY),
        max_frequency: fold(f64::max, |e| e.frequency, f64::NEG_INFINITY),
        min_log_frequency: fold(f64::min, |e| e.log_frequency, f64::INFINITY),
        max_log_frequency: fold(f64::max, |e| e.log_frequency, f64::NEG_INFINITY),
        scales: estimates,
    })
}

/// Density of integers `t <= n` with λ ≡ +1 on every integer of the open interval `(t - a, t + a)`.
pub fn run_density(a: f64, n: u64) -> Result<DensityEstimate> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(LabError::param("a", format!("half-width {a} must be positive")));
    }
    // integers d with |d| < a
    let reach = (a.ceil() as u64) - 1;
    let width = 2 * reach + 1;
    if width as usize > super::sign::MAX_PATTERN_LEN {
        return Err(LabError::param("a", "run longer than 64 symbols"));
    }
    let pattern = SignPattern::run(width as usize, reach as usize)?;
    let tally = pattern_tallies(&pattern, SignField::Lambda, &[(1, n)])?;
    Ok(tally[0].estimate((1, n)))
}

/// Frequency of μ²(n) = 1 for `n` in `[1, n]`.
pub fn squarefree_frequency(n: u64) -> Result<DensityEstimate> {
    let pattern: SignPattern = "^+".parse()?;
    let tally = pattern_tallies(&pattern, SignField::Squarefree, &[(1, n)])?;
    Ok(tally[0].estimate((1, n)))
}

/// A predicate on positive integers for the change-of-variable check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Property {
    Even,
    Pattern { pattern: SignPattern, field: SignField },
}

impl Property {
    fn right_reach(&self) -> u64 {
        match self {
            Property::Even => 0,
            Property::Pattern { pattern, .. } => pattern.right(),
        }
    }

    fn holds(&self, segment: &SieveSegment, m: u64) -> bool {
        match self {
            Property::Even => m.is_multiple_of(2),
            Property::Pattern { pattern, field } => {
                if m <= pattern.left() {
                    return false;
                }
                let (care, want) = pattern.masks();
                let base = (m - pattern.left() - segment.start()) as usize;
                let code = (0..pattern.len())
                    .fold(0u64, |acc, j| acc | (field.minus_at(segment, base + j) as u64) << j);
                code & care == want
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangeOfVariable {
    /// Frequency of `P(qn + r)` over `n` in `[1, N]`.
    pub substituted: f64,
    /// `q` times the frequency of `P(m) and m ≡ r (mod q)` over `m` in `[1, qN]`.
    pub restricted: f64,
    pub discrepancy: f64,
}

/// Compare the density of `P(qn + r)` with `q` times the density of `P` on the class `r mod q`.
pub fn change_of_variable_check(
    property: &Property,
    q: u64,
    r: u64,
    n: u64,
) -> Result<ChangeOfVariable> {
    if q == 0 {
        return Err(LabError::param("q", "modulus must be at least 1"));
    }
    if n == 0 {
        return Err(LabError::param("n", "bound must be at least 1"));
    }
    let right = property.right_reach();
    let top = q
        .checked_mul(n)
        .and_then(|v| v.checked_add(r))
        .ok_or_else(|| LabError::Range(format!("q·N + r overflows for q={q}, N={n}")))?;
    let segment = crate::sieve::sieve_mu(1, top + right)?;
    let substituted = (1..=n).filter(|&k| property.holds(&segment, q * k + r)).count();
    let restricted = (1..=q * n)
        .filter(|&m| m % q == r % q && property.holds(&segment, m))
        .count();
    let substituted = substituted as f64 / n as f64;
    let restricted = q as f64 * restricted as f64 / (q * n) as f64;
    Ok(ChangeOfVariable {
        substituted,
        restricted,
        discrepancy: (substituted - restricted).abs(),
    })
}
