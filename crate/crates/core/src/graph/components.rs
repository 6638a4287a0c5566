use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::window::GraphWindow;

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

const NOT_A_VERTEX: u32 = u32::MAX;

/// Connected components of a [`GraphWindow`], labelled in order of their smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    lo: i64,
    labels: Vec<u32>,
    sizes: Vec<usize>,
}

/// A path found by breadth-first search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphPath {
    pub vertices: Vec<i64>,
    /// Number of edges.
    pub length: usize,
    pub max_abs: u64,
}

pub fn components(graph: &GraphWindow) -> Components {
    let (lo, _) = graph.window();
    let mut uf = UnionFind::new(graph.len());
    for (a, b, _) in graph.edges() {
        uf.union((a - lo) as usize, (b - lo) as usize);
    }
    let mut labels = vec![NOT_A_VERTEX; graph.len()];
    let mut root_label: BTreeMap<usize, u32> = BTreeMap::new();
    let mut sizes = Vec::new();
    for a in graph.vertices() {
        let i = (a - lo) as usize;
        let root = uf.find(i);
        let label = *root_label.entry(root).or_insert_with(|| {
            sizes.push(0);
            (sizes.len() - 1) as u32
        });
        labels[i] = label;
        sizes[label as usize] += 1;
    }
    Components { lo, labels, sizes }
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn component_of(&self, a: i64) -> Option<usize> {
        let i = usize::try_from(a.checked_sub(self.lo)?).ok()?;
        match *self.labels.get(i)? {
            NOT_A_VERTEX => None,
            label => Some(label as usize),
        }
    }

    /// `None` when either endpoint is not a vertex.
    pub fn connected(&self, a: i64, b: i64) -> Option<bool> {
        Some(self.component_of(a)? == self.component_of(b)?)
    }

    /// `size -> number of components of that size`.
    pub fn size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for &s in &self.sizes {
            *hist.entry(s).or_insert(0) += 1;
        }
        hist
    }
}

/// Shortest path from `a` to `b`, or `None` if they are not connected vertices.
pub fn shortest_path(graph: &GraphWindow, a: i64, b: i64) -> Option<GraphPath> {
    if !graph.is_vertex(a) || !graph.is_vertex(b) {
        return None;
    }
    let (lo, _) = graph.window();
    let mut prev: Vec<Option<i64>> = vec![None; graph.len()];
    let mut seen = vec![false; graph.len()];
    seen[(a - lo) as usize] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        for e in graph.neighbours(v) {
            let i = (e.to - lo) as usize;
            if !seen[i] {
                seen[i] = true;
                prev[i] = Some(v);
                queue.push_back(e.to);
            }
        }
    }
    if !seen[(b - lo) as usize] {
        return None;
    }
    let mut vertices = vec![b];
    let mut cur = b;
    while let Some(p) = prev[(cur - lo) as usize] {
        vertices.push(p);
        cur = p;
    }
    vertices.reverse();
    let max_abs = vertices.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    Some(GraphPath {
        length: vertices.len() - 1,
        vertices,
        max_abs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample::{sample_profinite, SampleSeed};
    use crate::graph::testing::Fixed;
    use crate::graph::three_hop::validate_path;
    use crate::graph::window::build_graph;

    #[test]
    fn zero_and_three_join_when_three_divides() {
        let g = build_graph(&Fixed { n: 6, vertices: Some(vec![0, 3]) }, (0, 3)).unwrap();
        let c = components(&g);
        assert_eq!(c.count(), 1);
        assert_eq!(c.connected(0, 3), Some(true));
        let g = build_graph(&Fixed { n: 7, vertices: Some(vec![0, 3]) }, (0, 3)).unwrap();
        assert_eq!(components(&g).connected(0, 3), Some(false));
    }

    #[test]
    fn empty_vertex_set_has_no_components() {
        let g = build_graph(&Fixed { n: 0, vertices: Some(vec![]) }, (0, 10)).unwrap();
        let c = components(&g);
        assert_eq!(c.count(), 0);
        assert_eq!(c.connected(0, 1), None);
        assert!(shortest_path(&g, 0, 1).is_none());
    }

    #[test]
    fn non_vertex_is_absent_not_disconnected() {
        let g = build_graph(&Fixed { n: 6, vertices: Some(vec![0, 3]) }, (0, 5)).unwrap();
        let c = components(&g);
        assert_eq!(c.component_of(1), None);
        assert_eq!(c.connected(0, 1), None);
        assert_eq!(c.component_of(-4), None);
    }

    #[test]
    fn union_find_merges() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert_eq!(uf.find(0), uf.find(1));
        assert_ne!(uf.find(0), uf.find(3));
    }

    /// Components agree with plain BFS reachability, and paths re-validate.
    #[test]
    fn labels_agree_with_bfs() {
        for trial in 0..20 {
            let s = sample_profinite(200, 50, SampleSeed { master: 21, trial }).unwrap();
            let g = build_graph(&s, (0, 200)).unwrap();
            let c = components(&g);
            assert_eq!(c.sizes().iter().sum::<usize>(), g.vertex_count());
            let vs: Vec<i64> = g.vertices().collect();
            for &b in vs.iter().step_by(7) {
                let a = vs[0];
                let path = shortest_path(&g, a, b);
                assert_eq!(path.is_some(), c.connected(a, b).unwrap());
                if let Some(path) = path {
                    assert_eq!(path.vertices.first(), Some(&a));
                    assert_eq!(path.vertices.last(), Some(&b));
                    assert_eq!(path.length, path.vertices.len() - 1);
                    assert!(validate_path(&s, &path.vertices));
                }
            }
        }
    }
}
