use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::sample::ResidueModel;
use crate::error::{LabError, Result};
use crate::primes::primes_between;
use crate::scalar::Scalar;

/// Odd path length `k` and the interval `I` the steps are drawn from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathEnsembleParams {
    k: usize,
    interval: (u64, u64),
    primes: Vec<u64>,
}

impl PathEnsembleParams {
    pub fn new(k: usize, imin: u64, imax: u64) -> Result<Self> {
        if k.is_multiple_of(2) {
            return Err(LabError::param("k", format!("path length {k} must be odd")));
        }
        let primes: Vec<u64> = primes_between(imin.max(3), imax);
        if primes.len() < k {
            return Err(LabError::param(
                "I",
                format!("[{imin}, {imax}] holds {} odd primes, need {k}", primes.len()),
            ));
        }
        Ok(PathEnsembleParams {
            k,
            interval: (imin, imax),
            primes,
        })
    }

    /// Steps drawn from an explicit list of odd primes.
    pub fn from_primes(k: usize, mut primes: Vec<u64>) -> Result<Self> {
        primes.sort_unstable();
        primes.dedup();
        if k.is_multiple_of(2) {
            return Err(LabError::param("k", format!("path length {k} must be odd")));
        }
        if primes.iter().any(|&p| p % 2 == 0 || !crate::primes::is_prime(p)) {
            return Err(LabError::param("I", "steps must be odd primes"));
        }
        if primes.len() < k {
            return Err(LabError::param("I", format!("need at least {k} primes")));
        }
        let interval = (primes[0], *primes.last().unwrap());
        Ok(PathEnsembleParams { k, interval, primes })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn interval(&self) -> (u64, u64) {
        self.interval
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }
}

/// `Σ 1/p` over `p ∈ I` with `position + p` a vertex; `None` when no such `p` exists.
pub fn step_normalizer<T, M>(model: &M, position: i64, primes: &[u64]) -> Option<T>
where
    T: Scalar,
    M: ResidueModel + ?Sized,
{
    let mut any = false;
    let sum = primes
        .iter()
        .filter(|&&p| model.is_vertex(position + p as i64))
        .fold(T::zero(), |acc, &p| {
            any = true;
            acc + T::recip_u64(p)
        });
    any.then_some(sum)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport<T> {
    pub start: i64,
    pub start_is_vertex: bool,
    /// `Σ w_γ` over paths present in the graph.
    pub s1: T,
    /// Paths present in the graph.
    pub paths: u64,
    /// Endpoint multiset `{γ(k)}`.
    pub endpoints: BTreeMap<i64, u64>,
    pub distinct_endpoints: usize,
    /// `Σ w_γ w_γ'` over present pairs with a common endpoint (including `γ = γ'`).
    pub collision: T,
    /// Nodes whose normaliser had no admissible prime.
    pub pruned: u64,
}

struct Walk<'a, T, M: ?Sized> {
    model: &'a M,
    k: usize,
    steps: Vec<(u64, u64)>,
    primes: Vec<u64>,
    normalizers: HashMap<i64, Option<T>>,
    used: Vec<u64>,
    endpoint_weight: BTreeMap<i64, T>,
    endpoints: BTreeMap<i64, u64>,
    paths: u64,
    pruned: u64,
}

impl<T: Scalar, M: ResidueModel + ?Sized> Walk<'_, T, M> {
    fn visit(&mut self, position: i64, depth: usize, weight: T) {
        if depth == self.k {
            self.paths += 1;
            *self.endpoints.entry(position).or_insert(0) += 1;
            let slot = self.endpoint_weight.entry(position).or_insert_with(T::zero);
            *slot = slot.clone() + weight;
            return;
        }
        let children: Vec<u64> = self
            .steps
            .iter()
            .filter(|&&(p, r)| {
                (r as i128 + position as i128).rem_euclid(p as i128) == 0
                    && !self.used.contains(&p)
                    && self.model.is_vertex(position + p as i64)
            })
            .map(|&(p, _)| p)
            .collect();
        if children.is_empty() {
            return;
        }
        let (model, primes) = (self.model, &self.primes);
        let norm = self
            .normalizers
            .entry(position)
            .or_insert_with(|| step_normalizer::<T, M>(model, position, primes))
            .clone();
        let Some(norm) = norm else {
            self.pruned += 1;
            return;
        };
        let next_weight = weight / norm;
        for p in children {
            self.used.push(p);
            self.visit(position + p as i64, depth + 1, next_weight.clone());
            self.used.pop();
        }
    }
}

/// Enumerate the weighted paths `start, start + p1, ..., start + p1 + ... + pk` present in the graph.
pub fn path_ensemble_stats<T, M>(
    model: &M,
    params: &PathEnsembleParams,
    start: i64,
) -> Result<EnsembleReport<T>>
where
    T: Scalar,
    M: ResidueModel + ?Sized,
{
    let imax = params.interval.1.max(*params.primes.last().unwrap());
    if model.prime_bound() < imax {
        return Err(LabError::param(
            "P",
            format!("residues known up to {}, steps reach {imax}", model.prime_bound()),
        ));
    }
    let steps: Vec<(u64, u64)> = params
        .primes
        .iter()
        .map(|&p| (p, model.residue(p).expect("prime below the model bound")))
        .collect();
    let start_is_vertex = model.is_vertex(start);
    let mut walk = Walk {
        model,
        k: params.k,
        steps,
        primes: params.primes.clone(),
        normalizers: HashMap::new(),
        used: Vec::with_capacity(params.k),
        endpoint_weight: BTreeMap::new(),
        endpoints: BTreeMap::new(),
        paths: 0,
        pruned: 0,
    };
    if start_is_vertex {
        walk.visit(start, 0, T::one());
    }
    let s1 = walk
        .endpoint_weight
        .values()
        .fold(T::zero(), |acc, w| acc + w.clone());
    let collision = walk
        .endpoint_weight
        .values()
        .fold(T::zero(), |acc, w| acc + w.clone() * w.clone());
    Ok(EnsembleReport {
        start,
        start_is_vertex,
        s1,
        paths: walk.paths,
        distinct_endpoints: walk.endpoints.len(),
        endpoints: walk.endpoints,
        collision,
        pruned: walk.pruned,
    })
}

/// `E[S₁]` over the residues mod `p ∈ I`, with the vertex set held fixed.
///
/// Each step `p` is present with probability `1/p`, independently across distinct
/// primes. Enumerates every path, so only small `I` and `k` are practical.
pub fn expected_s1<T, M>(model: &M, params: &PathEnsembleParams, start: i64) -> Result<T>
where
    T: Scalar,
    M: ResidueModel + ?Sized,
{
    if model.vertex_prime_bound() >= params.primes[0] {
        return Err(LabError::param(
            "I",
            "steps must exceed every prime that decides vertex membership",
        ));
    }
    if !model.is_vertex(start) {
        return Ok(T::zero());
    }
    fn go<T: Scalar, M: ResidueModel + ?Sized>(
        model: &M,
        primes: &[u64],
        used: &mut Vec<u64>,
        position: i64,
        remaining: usize,
    ) -> T {
        if remaining == 0 {
            return T::one();
        }
        let Some(norm) = step_normalizer::<T, M>(model, position, primes) else {
            return T::zero();
        };
        let mut total = T::zero();
        for &p in primes {
            if used.contains(&p) || !model.is_vertex(position + p as i64) {
                continue;
            }
            used.push(p);
            let rest = go::<T, M>(model, primes, used, position + p as i64, remaining - 1);
            used.pop();
            total = total + rest * T::recip_u64(p);
        }
        total / norm
    }
    Ok(go::<T, M>(model, &params.primes, &mut Vec::new(), start, params.k))
}
