use std::io::Write;

use serde::{Deserialize, Serialize};

use super::sample::ResidueModel;
use crate::error::{LabError, Result};
use crate::primes::{is_prime, primes_up_to};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub to: i64,
    /// The odd prime `|a - b|`.
    pub gap: u64,
}

/// The graph restricted to an integer window: vertices `a` with `n + a` squarefree
/// (or `w`-truncated squarefree), and an edge `a ~ b` when `|a - b|` is an odd prime dividing `n + a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphWindow {
    lo: i64,
    hi: i64,
    vertex: Vec<bool>,
    adjacency: Vec<Vec<Edge>>,
    edge_count: usize,
}

pub fn build_graph<M: ResidueModel + ?Sized>(model: &M, window: (i64, i64)) -> Result<GraphWindow> {
    let (lo, hi) = window;
    if hi < lo {
        return Err(LabError::param("window", format!("empty window [{lo}, {hi}]")));
    }
    let diameter = hi.abs_diff(lo);
    if model.prime_bound() < diameter {
        return Err(LabError::param(
            "P",
            format!(
                "residues known only up to {}, window diameter is {diameter}",
                model.prime_bound()
            ),
        ));
    }
    let len = (diameter + 1) as usize;
    let vertex: Vec<bool> = (lo..=hi).map(|a| model.is_vertex(a)).collect();
    let mut adjacency = vec![Vec::new(); len];
    let mut edge_count = 0;
    for q in primes_up_to(diameter).into_iter().skip(1) {
        let r = model.residue(q).expect("prime below the model bound");
        // first a >= lo with q | n + a
        let first = lo as i128 + (-(r as i128) - lo as i128).rem_euclid(q as i128);
        let mut a = first as i64;
        while a + (q as i64) <= hi {
            let b = a + q as i64;
            let (ia, ib) = ((a - lo) as usize, (b - lo) as usize);
            if vertex[ia] && vertex[ib] {
                adjacency[ia].push(Edge { to: b, gap: q });
                adjacency[ib].push(Edge { to: a, gap: q });
                edge_count += 1;
            }
            a = b;
        }
    }
    for list in &mut adjacency {
        list.sort_unstable_by_key(|e| e.to);
    }
    Ok(GraphWindow {
        lo,
        hi,
        vertex,
        adjacency,
        edge_count,
    })
}

/// A broken invariant found by [`GraphWindow::violations`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub from: i64,
    pub edge: Edge,
    pub reason: &'static str,
}

impl GraphWindow {
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn len(&self) -> usize {
        self.vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex.is_empty()
    }

    pub(crate) fn offset(&self, a: i64) -> Option<usize> {
        (a >= self.lo && a <= self.hi).then(|| (a - self.lo) as usize)
    }

    pub fn is_vertex(&self, a: i64) -> bool {
        self.offset(a).is_some_and(|i| self.vertex[i])
    }

    pub fn vertices(&self) -> impl Iterator<Item = i64> + '_ {
        self.vertex
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(move |(i, _)| self.lo + i as i64)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex.iter().filter(|&&v| v).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbours(&self, a: i64) -> &[Edge] {
        self.offset(a).map_or(&[], |i| &self.adjacency[i])
    }

    /// Each undirected edge once, as `(a, b, q)` with `a < b`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (i64, i64, u64)> + '_ {
        self.vertices().flat_map(move |a| {
            self.neighbours(a)
                .iter()
                .filter(move |e| e.to > a)
                .map(move |e| (a, e.to, e.gap))
        })
    }

    /// The induced subgraph on `[lo, hi]`, which must lie inside this window.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<GraphWindow> {
        let (Some(from), Some(to)) = (self.offset(lo), self.offset(hi)) else {
            return Err(LabError::param("window", "restriction leaves the window"));
        };
        if to < from {
            return Err(LabError::param("window", "empty restriction"));
        }
        let adjacency: Vec<Vec<Edge>> = self.adjacency[from..=to]
            .iter()
            .map(|list| list.iter().copied().filter(|e| e.to >= lo && e.to <= hi).collect())
            .collect();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Ok(GraphWindow {
            lo,
            hi,
            vertex: self.vertex[from..=to].to_vec(),
            adjacency,
            edge_count,
        })
    }

    /// Check every edge against the definition using `model`; an empty result means the graph is sound.
    pub fn violations<M: ResidueModel + ?Sized>(&self, model: &M) -> Vec<Violation> {
        let mut out = Vec::new();
        for a in self.vertices() {
            for &edge in self.neighbours(a) {
                let b = edge.to;
                let mut fail = |reason| out.push(Violation { from: a, edge, reason });
                if a == b {
                    fail("self-loop");
                }
                if a.abs_diff(b) != edge.gap {
                    fail("gap label disagrees with endpoints");
                }
                if edge.gap % 2 == 0 || !is_prime(edge.gap) {
                    fail("gap is not an odd prime");
                }
                if (a - b).rem_euclid(2) != 1 {
                    fail("endpoints share parity");
                }
                if !self.is_vertex(b) || !model.is_vertex(a) || !model.is_vertex(b) {
                    fail("endpoint is not a vertex");
                }
                if !model.divides(edge.gap, a) {
                    fail("gap does not divide the shift");
                }
                if !self.neighbours(b).iter().any(|e| e.to == a && e.gap == edge.gap) {
                    fail("edge is not symmetric");
                }
            }
        }
        out
    }

    /// Text edge list, one `a b q` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (a, b, q) in self.edges() {
            writeln!(out, "{a} {b} {q}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample::{sample_profinite, SampleSeed};
    use crate::graph::testing::Fixed;

    #[test]
    fn two_and_five_adjacent_exactly_when_three_divides() {
        for trial in 0..200 {
            let s = sample_profinite(50, 50, SampleSeed { master: 11, trial }).unwrap();
            let g = build_graph(&s, (2, 5)).unwrap();
            let expected = s.is_vertex(2) && s.is_vertex(5) && s.residue(3).map(|r| (r + 2) % 3 == 0).unwrap();
            let present = g.neighbours(2).iter().any(|e| e.to == 5 && e.gap == 3);
            assert_eq!(present, expected);
        }
    }

    #[test]
    fn single_vertex_has_no_edges() {
        let g = build_graph(&Fixed { n: 0, vertices: None }, (7, 7)).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn rejects_short_prime_bound() {
        let s = sample_profinite(50, 50, SampleSeed { master: 1, trial: 0 }).unwrap();
        assert!(build_graph(&s, (0, 100)).is_err());
        assert!(build_graph(&s, (0, 50)).is_ok());
    }

    #[test]
    fn vertex_density_matches_euler_product() {
        let target: f64 = primes_up_to(50).iter().map(|&p| 1.0 - 1.0 / (p * p) as f64).product();
        for trial in 0..5 {
            let s = sample_profinite(10_000, 50, SampleSeed { master: 5, trial }).unwrap();
            let g = build_graph(&s, (0, 9_999)).unwrap();
            let density = g.vertex_count() as f64 / g.len() as f64;
            assert!((density - target).abs() < 0.02, "{density} vs {target}");
        }
    }

    #[test]
    fn sampled_graphs_are_sound() {
        for trial in 0..50 {
            let s = sample_profinite(400, 50, SampleSeed { master: 9, trial }).unwrap();
            let g = build_graph(&s, (-200, 200)).unwrap();
            assert!(g.violations(&s).is_empty());
            assert!(g.edge_count() > 0);
        }
    }

    #[test]
    fn restriction_equals_direct_construction() {
        let s = sample_profinite(600, 50, SampleSeed { master: 4, trial: 2 }).unwrap();
        let big = build_graph(&s, (0, 600)).unwrap();
        for hi in [0, 1, 17, 300, 599] {
            assert_eq!(big.restrict(0, hi).unwrap(), build_graph(&s, (0, hi)).unwrap());
        }
        assert_eq!(big.restrict(100, 250).unwrap(), build_graph(&s, (100, 250)).unwrap());
        assert!(big.restrict(0, 601).is_err());
    }

    #[test]
    fn edge_list_format() {
        let model = Fixed { n: 0, vertices: Some(vec![0, 3]) };
        let g = build_graph(&model, (0, 3)).unwrap();
        let mut out = Vec::new();
        g.write_edge_list(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0 3 3\n");
    }
}
