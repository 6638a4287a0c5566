use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::components::{components, shortest_path};
use super::ensemble::{path_ensemble_stats, PathEnsembleParams};
use super::sample::{IntegerModel, PrimeTable, ProfiniteSample, ResidueModel, SampleSeed};
use super::three_hop::validate_path;
use super::window::{build_graph, GraphWindow};
use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphMode {
    /// Residues drawn per prime; vertices are `μ²_w(n + a) = 1`.
    Profinite,
    /// Trial `t` uses the integer `n0 + t` and its true squarefree set.
    Integer { n0: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub k: usize,
    pub imin: u64,
    pub imax: u64,
}

/// One batch of independent graph samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExperiment {
    pub mode: GraphMode,
    pub seed: u64,
    /// Connectivity target: the pair `{0, x}` is queried.
    pub x: i64,
    /// Graph window; `None` skips graph construction.
    pub window: Option<(i64, i64)>,
    pub w: u64,
    pub p: u64,
    pub trials: u64,
    pub ensemble: Option<EnsembleSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub size_histogram: BTreeMap<usize, usize>,
    /// `None` when 0 or `x` is not a vertex.
    pub connected: Option<bool>,
    pub path_length: Option<usize>,
    pub path_max_abs: Option<u64>,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    /// The least vertex `a ≥ 0`; paths start there.
    pub start: i64,
    pub start_is_vertex: bool,
    pub s1: f64,
    pub paths: u64,
    pub distinct_endpoints: usize,
    pub collision: f64,
    pub endpoints: BTreeMap<i64, u64>,
}

/// One JSON-lines record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub graph: Option<GraphStats>,
    pub ensemble: Option<EnsembleStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub trials: u64,
    /// Trials where both 0 and `x` are vertices.
    pub pair_trials: u64,
    pub connected: u64,
    pub connectivity_fraction: Option<f64>,
    pub violations: u64,
    /// Trials with the ensemble start a vertex.
    pub ensemble_trials: u64,
    pub mean_s1: Option<f64>,
    pub mean_s1_squared: Option<f64>,
    pub mean_collision: Option<f64>,
}

impl GraphExperiment {
    fn validate(&self) -> Result<Option<PathEnsembleParams>> {
        if self.trials == 0 {
            return Err(LabError::param("trials", "need at least one trial"));
        }
        if let Some((lo, hi)) = self.window {
            if hi < lo {
                return Err(LabError::param("window", "empty window"));
            }
            if matches!(self.mode, GraphMode::Profinite) && (self.p as i128) < (hi - lo) as i128 {
                return Err(LabError::param(
                    "P",
                    format!("P = {} below window diameter {}", self.p, hi - lo),
                ));
            }
        }
        let params = self
            .ensemble
            .map(|e| PathEnsembleParams::new(e.k, e.imin, e.imax))
            .transpose()?;
        if let (Some(params), GraphMode::Profinite) = (&params, self.mode) {
            if self.p < params.interval().1 {
                return Err(LabError::param("P", "P must cover the ensemble interval"));
            }
        }
        Ok(params)
    }

    fn integer_window(&self, params: Option<&PathEnsembleParams>) -> (i64, i64) {
        let (mut lo, mut hi) = self.window.unwrap_or((0, 0));
        lo = lo.min(0).min(self.x);
        hi = hi.max(self.x);
        if let Some(params) = params {
            // room to find a start vertex, then k steps of at most imax
            let reach = 64 + params.k() as i64 * params.interval().1 as i64;
            hi = hi.max(reach);
        }
        (lo, hi)
    }

    fn prime_table(&self) -> Option<PrimeTable> {
        match self.mode {
            GraphMode::Profinite => Some(PrimeTable::new(self.p)),
            GraphMode::Integer { .. } => None,
        }
    }

    fn with_model<R>(
        &self,
        table: Option<&PrimeTable>,
        trial: u64,
        params: Option<&PathEnsembleParams>,
        f: impl FnOnce(&dyn ResidueModel) -> Result<R>,
    ) -> Result<R> {
        match self.mode {
            GraphMode::Profinite => {
                let seed = SampleSeed {
                    master: self.seed,
                    trial,
                };
                let table = table.expect("profinite mode carries a prime table");
                f(&ProfiniteSample::draw(table, self.p, self.w, seed)?)
            }
            GraphMode::Integer { n0 } => {
                let n = n0
                    .checked_add(trial)
                    .ok_or_else(|| LabError::Range("n0 + trial overflows".into()))?;
                f(&IntegerModel::new(n, self.integer_window(params))?)
            }
        }
    }

    /// Run every trial; records come back in trial order whatever the thread count.
    pub fn run(&self) -> Result<Vec<TrialRecord>> {
        let params = self.validate()?;
        let table = self.prime_table();
        (0..self.trials)
            .into_par_iter()
            .map(|trial| {
                self.with_model(table.as_ref(), trial, params.as_ref(), |model| {
                    self.trial(model, trial, params.as_ref())
                })
            })
            .collect()
    }

    /// The graph of a single trial, or `None` when no window is configured.
    pub fn graph(&self, trial: u64) -> Result<Option<GraphWindow>> {
        let params = self.validate()?;
        let Some(window) = self.window else {
            return Ok(None);
        };
        let table = self.prime_table();
        self.with_model(table.as_ref(), trial, params.as_ref(), |model| {
            build_graph(model, window).map(Some)
        })
    }

    fn trial<M: ResidueModel + ?Sized>(
        &self,
        model: &M,
        trial: u64,
        params: Option<&PathEnsembleParams>,
    ) -> Result<TrialRecord> {
        let graph = match self.window {
            Some(window) => {
                let g = build_graph(model, window)?;
                let labels = components(&g);
                let connected = labels.connected(0, self.x);
                let path = if connected == Some(true) {
                    shortest_path(&g, 0, self.x)
                } else {
                    None
                };
                let mut violations = g.violations(model).len();
                if let Some(path) = &path {
                    if !validate_path(model, &path.vertices) {
                        violations += 1;
                    }
                }
                Some(GraphStats {
                    vertices: g.vertex_count(),
                    edges: g.edge_count(),
                    components: labels.count(),
                    size_histogram: labels.size_histogram(),
                    connected,
                    path_length: path.as_ref().map(|p| p.length),
                    path_max_abs: path.as_ref().map(|p| p.max_abs),
                    violations,
                })
            }
            None => None,
        };
        let ensemble = match params {
            Some(params) => {
                let start = (0..)
                    .find(|&a| model.is_vertex(a))
                    .expect("vertex set has positive density");
                let report = path_ensemble_stats::<f64, M>(model, params, start)?;
                Some(EnsembleStats {
                    start,
                    start_is_vertex: report.start_is_vertex,
                    s1: report.s1,
                    paths: report.paths,
                    distinct_endpoints: report.distinct_endpoints,
                    collision: report.collision,
                    endpoints: report.endpoints,
                })
            }
            None => None,
        };
        Ok(TrialRecord {
            trial,
            graph,
            ensemble,
        })
    }
}

/// Aggregate trial records in order, so the floating-point sums are reproducible.
pub fn summarize(records: &[TrialRecord]) -> ExperimentSummary {
    let mut summary = ExperimentSummary {
        trials: records.len() as u64,
        pair_trials: 0,
        connected: 0,
        connectivity_fraction: None,
        violations: 0,
        ensemble_trials: 0,
        mean_s1: None,
        mean_s1_squared: None,
        mean_collision: None,
    };
    let (mut s1, mut s1_sq, mut collision) = (0.0, 0.0, 0.0);
    for record in records {
        if let Some(g) = &record.graph {
            summary.violations += g.violations as u64;
            if let Some(c) = g.connected {
                summary.pair_trials += 1;
                summary.connected += c as u64;
            }
        }
        if let Some(e) = record.ensemble.as_ref().filter(|e| e.start_is_vertex) {
            summary.ensemble_trials += 1;
            s1 += e.s1;
            s1_sq += e.s1 * e.s1;
            collision += e.collision;
        }
    }
    if summary.pair_trials > 0 {
        summary.connectivity_fraction = Some(summary.connected as f64 / summary.pair_trials as f64);
    }
    if summary.ensemble_trials > 0 {
        let n = summary.ensemble_trials as f64;
        summary.mean_s1 = Some(s1 / n);
        summary.mean_s1_squared = Some(s1_sq / n);
        summary.mean_collision = Some(collision / n);
    }
    summary
}
