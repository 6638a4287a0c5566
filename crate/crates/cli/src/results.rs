//! Result documents and their CSV row encodings.

use serde::{Deserialize, Serialize};
use signlab::graph::{ExperimentSummary, TrialRecord};
use signlab::pattern::{DensityEstimate, DensityReport, PairTable, PredictedConstants};
use signlab::short_interval::DiscrepancyProfile;

use crate::config::ModeName;

/// The final JSON document of every command, tagged by command name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum ResultDoc {
    Sieve(SieveResult),
    Pattern(DensityReport),
    Pairs(PairsResult),
    Interval(IntervalResult),
    RunDensity(RunDensityResult),
    Graph(GraphResult),
    Ensemble(EnsembleResult),
    Triples(TriplesResult),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveResult {
    pub start: u64,
    pub len: u64,
    pub w: Option<u64>,
    /// Integers with λ = −1.
    pub lambda_negative: u64,
    /// Counts of μ = −1, 0, +1.
    pub mu_counts: [u64; 3],
    /// Frequency of μ² = 1.
    pub squarefree_density: f64,
    /// Integers passing the `w`-truncated test.
    pub squarefree_w: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairsResult {
    pub table: PairTable,
    pub predicted: PredictedConstants<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalResult {
    pub profiles: Vec<DiscrepancyProfile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDensityRow {
    pub a: f64,
    pub estimate: DensityEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDensityResult {
    pub n: u64,
    pub rows: Vec<RunDensityRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphResult {
    pub mode: ModeName,
    pub x: i64,
    pub window: (i64, i64),
    pub w: u64,
    pub p: u64,
    pub summary: ExperimentSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub mode: ModeName,
    pub k: usize,
    pub interval: (u64, u64),
    pub w: u64,
    pub summary: ExperimentSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriplesResult {
    #[serde(rename = "X")]
    pub x: u64,
    pub m: i64,
    #[serde(rename = "A")]
    pub shift: i64,
    pub w: u64,
    pub k: Option<u64>,
    pub a1: Option<i64>,
    pub a2: Option<i64>,
    pub count: u64,
    #[serde(rename = "G_m")]
    pub g_m: u64,
    #[serde(rename = "S_m")]
    pub s_m: f64,
    pub prediction: f64,
    pub ratio: Option<f64>,
    pub tail_bound: f64,
}

/// One CSV line of a pattern ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleRow {
    pub lo: u64,
    pub hi: u64,
    pub matches: u64,
    pub window_total: u64,
    pub frequency: f64,
    pub log_frequency: f64,
}

impl From<&DensityEstimate> for ScaleRow {
    fn from(e: &DensityEstimate) -> Self {
        ScaleRow {
            lo: e.window.0,
            hi: e.window.1,
            matches: e.matches,
            window_total: e.window_total,
            frequency: e.frequency,
            log_frequency: e.log_frequency,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub mu_n: i8,
    pub mu_next: i8,
    pub count: u64,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub h: u64,
    pub count: u64,
    pub sum_abs: u64,
    pub mean_abs: f64,
    pub q50: f64,
    pub q90: f64,
    pub q99: f64,
    pub exceed_05: f64,
    pub exceed_10: f64,
    pub exceed_20: f64,
}

impl From<&DiscrepancyProfile> for ProfileRow {
    fn from(p: &DiscrepancyProfile) -> Self {
        let q = |i: usize| p.quantiles.get(i).map_or(f64::NAN, |v| v.1);
        let e = |i: usize| p.exceed.get(i).map_or(f64::NAN, |v| v.1);
        ProfileRow {
            h: p.h,
            count: p.count,
            sum_abs: p.sum_abs,
            mean_abs: p.mean_abs,
            q50: q(0),
            q90: q(1),
            q99: q(2),
            exceed_05: e(0),
            exceed_10: e(1),
            exceed_20: e(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub a: f64,
    pub matches: u64,
    pub window_total: u64,
    pub frequency: f64,
    pub log_frequency: f64,
}

/// A trial record without its nested maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: u64,
    pub vertices: Option<usize>,
    pub edges: Option<usize>,
    pub components: Option<usize>,
    pub connected: Option<bool>,
    pub path_length: Option<usize>,
    pub path_max_abs: Option<u64>,
    pub violations: Option<usize>,
    pub start: Option<i64>,
    pub s1: Option<f64>,
    pub paths: Option<u64>,
    pub distinct_endpoints: Option<usize>,
    pub collision: Option<f64>,
}

impl From<&TrialRecord> for TrialRow {
    fn from(r: &TrialRecord) -> Self {
        let g = r.graph.as_ref();
        let e = r.ensemble.as_ref();
        TrialRow {
            trial: r.trial,
            vertices: g.map(|g| g.vertices),
            edges: g.map(|g| g.edges),
            components: g.map(|g| g.components),
            connected: g.and_then(|g| g.connected),
            path_length: g.and_then(|g| g.path_length),
            path_max_abs: g.and_then(|g| g.path_max_abs),
            violations: g.map(|g| g.violations),
            start: e.map(|e| e.start),
            s1: e.map(|e| e.s1),
            paths: e.map(|e| e.paths),
            distinct_endpoints: e.map(|e| e.distinct_endpoints),
            collision: e.map(|e| e.collision),
        }
    }
}

pub fn pair_rows(table: &PairTable) -> Vec<PairRow> {
    let mut rows = Vec::with_capacity(9);
    for a in [-1i8, 0, 1] {
        for b in [-1i8, 0, 1] {
            rows.push(PairRow {
                mu_n: a,
                mu_next: b,
                count: table.count(a, b),
                frequency: table.freq(a, b),
            });
        }
    }
    rows
}

pub fn run_rows(result: &RunDensityResult) -> Vec<RunRow> {
    result
        .rows
        .iter()
        .map(|r| RunRow {
            a: r.a,
            matches: r.estimate.matches,
            window_total: r.estimate.window_total,
            frequency: r.estimate.frequency,
            log_frequency: r.estimate.log_frequency,
        })
        .collect()
}

/// Encode rows as CSV with a header line.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, csv::Error> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(writer.into_inner().expect("flushed writer"))
}

pub fn from_csv<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<Vec<T>, csv::Error> {
    csv::Reader::from_reader(bytes).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_rows_cover_the_table() {
        let table = signlab::pattern::mobius_pair_table(1000).unwrap();
        let rows = pair_rows(&table);
        assert_eq!(rows.len(), 9);
        assert_eq!(rows.iter().map(|r| r.count).sum::<u64>(), 999);
        assert_eq!(from_csv::<PairRow>(&to_csv(&rows).unwrap()).unwrap(), rows);
    }
}
