//! Claim-by-claim verdict table over a collection of result documents.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use signlab::pattern::{SignField, SignPattern};
use signlab::short_interval::{ArithmeticFunction, Twist};

use crate::results::ResultDoc;

/// Finite-scale thresholds fixed by pilot Monte-Carlo runs (see `crates/core/examples/pilots.rs`).
pub mod thresholds {
    /// Lower bound for the fraction of samples with 0 and X connected, X = 1000, window [0, 2X], w = 50.
    pub const CONNECTIVITY_X1000: f64 = 0.14;
    /// Allowed drop of the connectivity fraction from X = 250 to X = 2000.
    pub const CONNECTIVITY_SLACK: f64 = 0.05;
    /// Bracket for the k = 3 Monte-Carlo mean of S₁.
    pub const ENSEMBLE_BRACKET: (f64, f64) = (0.8, 1.2);
    /// Step interval for the k = 3 ensemble.
    pub const ENSEMBLE_INTERVAL: (u64, u64) = (53, 1_000_000);
    /// Bracket for observed / main term in the triple count at X = 2000.
    pub const TRIPLE_RATIO_BRACKET: (f64, f64) = (0.5, 2.0);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotRun,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotRun => "not run",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimRow {
    pub claim: String,
    /// The claimed value or relation.
    pub reference: String,
    pub measured: Option<f64>,
    pub tolerance: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<ClaimRow>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.verdict == Verdict::Fail)
    }

    pub fn render(&self) -> String {
        let width = self.rows.iter().map(|r| r.claim.chars().count()).max().unwrap_or(5).max(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>12}  {:>12}  {:<14}  verdict",
            "claim", "reference", "measured", "tolerance"
        );
        for r in &self.rows {
            let measured = r.measured.map_or("-".to_string(), |m| format!("{m:.6}"));
            let _ = writeln!(
                out,
                "{:<width$}  {:>12}  {:>12}  {:<14}  {}",
                r.claim, r.reference, measured, r.tolerance, r.verdict
            );
        }
        out
    }
}

fn row(claim: &str, reference: &str, tolerance: &str, outcome: Option<(f64, bool)>) -> ClaimRow {
    ClaimRow {
        claim: claim.to_string(),
        reference: reference.to_string(),
        measured: outcome.map(|o| o.0),
        tolerance: tolerance.to_string(),
        verdict: match outcome {
            None => Verdict::NotRun,
            Some((_, true)) => Verdict::Pass,
            Some((_, false)) => Verdict::Fail,
        },
    }
}

fn within(value: f64, target: f64, tol: f64) -> (f64, bool) {
    (value, (value - target).abs() <= tol)
}

/// Last-scale frequency of a λ pattern among the results.
fn lambda_pattern(results: &[ResultDoc], expr: &str) -> Option<f64> {
    let wanted: SignPattern = expr.parse().ok()?;
    results.iter().rev().find_map(|r| match r {
        ResultDoc::Pattern(d) if d.field == SignField::Lambda && d.pattern == wanted => {
            d.scales.last().map(|s| s.frequency)
        }
        _ => None,
    })
}

fn mean_abs(results: &[ResultDoc], function: ArithmeticFunction, twist: Twist, h: u64) -> Option<f64> {
    results.iter().rev().find_map(|r| match r {
        ResultDoc::Interval(i) => i
            .profiles
            .iter()
            .find(|p| p.function == function && p.twist == twist && p.h == h)
            .map(|p| p.mean_abs),
        _ => None,
    })
}

fn run_density_at(results: &[ResultDoc], a: f64) -> Option<f64> {
    results.iter().rev().find_map(|r| match r {
        ResultDoc::RunDensity(d) => d.rows.iter().find(|row| row.a == a).map(|row| row.estimate.frequency),
        _ => None,
    })
}

fn connectivity_at(results: &[ResultDoc], x: i64) -> Option<f64> {
    results.iter().rev().find_map(|r| match r {
        ResultDoc::Graph(g) if g.x == x && g.window == (0, 2 * x) && g.w == 50 => {
            g.summary.connectivity_fraction
        }
        _ => None,
    })
}

/// One row per claim; claims without a matching result are marked "not run".
pub fn emit_report(results: &[ResultDoc]) -> Report {
    let mut rows = Vec::new();

    let sieve = results.iter().rev().find_map(|r| match r {
        ResultDoc::Sieve(s) if s.start == 1 => Some(s.squarefree_density),
        _ => None,
    });
    rows.push(row("squarefree density", "0.6079", "±0.002", sieve.map(|v| within(v, 0.6079, 0.002))));

    let pairs = results.iter().rev().find_map(|r| match r {
        ResultDoc::Pairs(p) => Some(&p.table),
        _ => None,
    });
    rows.push(row(
        "pair constant c: μ²(n) = μ²(n+1) = 1",
        "0.3226",
        "±0.003",
        pairs.map(|t| within(t.both_squarefree(), 0.3226, 0.003)),
    ));
    rows.push(row(
        "μ pair (0,0)",
        "0.1067",
        "±0.003",
        pairs.map(|t| within(t.freq(0, 0), 0.1067, 0.003)),
    ));
    for (a, b, label) in [(1, 0, "(+1,0)"), (-1, 0, "(−1,0)"), (0, 1, "(0,+1)"), (0, -1, "(0,−1)")] {
        rows.push(row(
            &format!("μ pair {label}"),
            "0.1426",
            "±0.003",
            pairs.map(|t| within(t.freq(a, b), 0.1426, 0.003)),
        ));
    }
    for ((a, b), (c, d), label) in [
        ((1, -1), (-1, 1), "μ pair symmetry (+1,−1) vs (−1,+1)"),
        ((1, 1), (-1, -1), "μ pair symmetry (+1,+1) vs (−1,−1)"),
    ] {
        rows.push(row(
            label,
            "0",
            "< 0.005",
            pairs.map(|t| {
                let gap = (t.freq(a, b) - t.freq(c, d)).abs();
                (gap, gap < 0.005)
            }),
        ));
    }

    for pattern in SignPattern::all_signs(3, 0).expect("valid length") {
        let expr = pattern.to_string();
        rows.push(row(
            &format!("λ pattern {expr} has positive density"),
            "> 0",
            "> 0.05",
            lambda_pattern(results, &expr).map(|f| (f, f > 0.05)),
        ));
    }
    let equal = lambda_pattern(results, "^++").zip(lambda_pattern(results, "^--"));
    rows.push(row(
        "λ(n) = λ(n+1) frequency",
        "≥ 1/3",
        "> 0.3",
        equal.map(|(a, b)| (a + b, a + b > 0.3)),
    ));

    for (twist, label) in [(Twist::None, "λ"), (Twist::Chi3, "λχ₃")] {
        let f = ArithmeticFunction::Lambda;
        let short = mean_abs(results, f, twist, 10);
        let long = mean_abs(results, f, twist, 1000);
        rows.push(row(
            &format!("short-interval decay {label}: mean(h=1000) < mean(h=10)"),
            "→ 0",
            "strict",
            short.zip(long).map(|(s, l)| (l, l < s)),
        ));
        rows.push(row(
            &format!("short-interval mean {label} at h = 1000"),
            "→ 0",
            "< 0.1",
            long.map(|l| (l, l < 0.1)),
        ));
    }

    let small: Option<Vec<f64>> = [1.0, 2.0, 3.0].iter().map(|&a| run_density_at(results, a)).collect();
    rows.push(row(
        "run density p_a > 0 for a ≤ 3",
        "> 0",
        "> 0",
        small.map(|v| {
            let min = v.iter().copied().fold(f64::INFINITY, f64::min);
            (min, min > 0.0)
        }),
    ));
    let ladder: Option<Vec<f64>> = [1.0, 2.0, 3.0, 5.0, 8.0]
        .iter()
        .map(|&a| run_density_at(results, a))
        .collect();
    rows.push(row(
        "run density decreasing over a ∈ {1,2,3,5,8}",
        "→ 0",
        "strict",
        ladder.map(|v| (v[v.len() - 1], v.windows(2).all(|w| w[1] < w[0]))),
    ));

    let graphs: Vec<u64> = results
        .iter()
        .filter_map(|r| match r {
            ResultDoc::Graph(g) => Some(g.summary.violations),
            _ => None,
        })
        .collect();
    rows.push(row(
        "graph edge invariants",
        "0 violations",
        "exact",
        (!graphs.is_empty()).then(|| {
            let v: u64 = graphs.iter().sum();
            (v as f64, v == 0)
        }),
    ));
    rows.push(row(
        "connectivity of {0, X} at X = 1000",
        "pilot",
        &format!("≥ {}", thresholds::CONNECTIVITY_X1000),
        connectivity_at(results, 1000).map(|f| (f, f >= thresholds::CONNECTIVITY_X1000)),
    ));
    rows.push(row(
        "connectivity grows with the window (X = 250 → 2000)",
        "monotone",
        &format!("slack {}", thresholds::CONNECTIVITY_SLACK),
        connectivity_at(results, 250)
            .zip(connectivity_at(results, 2000))
            .map(|(a, b)| (b, b >= a - thresholds::CONNECTIVITY_SLACK)),
    ));

    let ensemble = results.iter().rev().find_map(|r| match r {
        ResultDoc::Ensemble(e) if e.k == 3 => Some(&e.summary),
        _ => None,
    });
    let (lo, hi) = thresholds::ENSEMBLE_BRACKET;
    rows.push(row(
        "path ensemble mean S₁ (k = 3)",
        "1",
        &format!("[{lo}, {hi}]"),
        ensemble.and_then(|s| s.mean_s1).map(|m| (m, (lo..=hi).contains(&m))),
    ));
    rows.push(row(
        "path ensemble collision < mean S₁²",
        "o(1)",
        "strict",
        ensemble.and_then(|s| {
            let c = s.mean_collision?;
            let sq = s.mean_s1_squared?;
            Some((c, c < sq))
        }),
    ));

    let triples = results.iter().rev().find_map(|r| match r {
        ResultDoc::Triples(t) if t.k.is_none() && t.x == 2000 && t.m == 1 => t.ratio,
        _ => None,
    });
    let (lo, hi) = thresholds::TRIPLE_RATIO_BRACKET;
    rows.push(row(
        "prime triples observed / main term at X = 2000, m = 1",
        "1",
        &format!("[{lo}, {hi}]"),
        triples.map(|r| (r, (lo..=hi).contains(&r))),
    ));

    Report { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_from_outcomes() {
        assert_eq!(row("c", "r", "t", None).verdict, Verdict::NotRun);
        assert_eq!(row("c", "r", "t", Some(within(1.0, 1.05, 0.1))).verdict, Verdict::Pass);
        assert_eq!(row("c", "r", "t", Some(within(1.0, 1.2, 0.1))).verdict, Verdict::Fail);
    }

    #[test]
    fn render_aligns_rows() {
        let report = Report {
            rows: vec![
                row("short", "1", "± 0", Some((1.0, true))),
                row("a longer claim", "2", "± 0", None),
            ],
        };
        let text = report.render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].ends_with("pass") && lines[2].ends_with("not run"));
        assert_eq!(lines[1].find("  1"), lines[2].find("  2"));
        assert!(!report.failed());
    }
}
