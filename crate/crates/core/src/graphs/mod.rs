//! Partition graphs of a state set.
//!
//! For the cut `X`, vertices are all pairs of coordinates of the two other
//! parties (A → `(j,k)`, B → `(k,i)`, C → `(i,j)`). Every tuple joins the
//! projections of its kets: all pairs in the full graph, consecutive pairs
//! after sorting in the path subgraph. Loops and parallel edges are dropped.

mod union_find;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::state_model::{GhzTuple, Partition, StateSet};

pub use union_find::UnionFind;

/// Projected coordinate pair.
pub type Vertex = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    Full,
    PathSubgraph,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionGraph {
    partition: Partition,
    shape: (usize, usize),
    edges: BTreeSet<(Vertex, Vertex)>,
    kind: GraphKind,
}

impl PartitionGraph {
    /// Edgeless graph on `Z_{shape.0} × Z_{shape.1}`.
    pub fn new(partition: Partition, shape: (usize, usize), kind: GraphKind) -> Self {
        PartitionGraph { partition, shape, edges: BTreeSet::new(), kind }
    }

    pub fn partition(&self) -> Partition {
        self.partition
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn vertex_count(&self) -> usize {
        self.shape.0 * self.shape.1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.shape.0).flat_map(move |a| (0..self.shape.1).map(move |b| (a, b)))
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &BTreeSet<(Vertex, Vertex)> {
        &self.edges
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Row-major index; agrees with lexicographic vertex order.
    pub fn index(&self, v: Vertex) -> usize {
        v.0 * self.shape.1 + v.1
    }

    pub fn vertex(&self, index: usize) -> Vertex {
        (index / self.shape.1, index % self.shape.1)
    }

    /// Adds `{u, v}`; returns `false` for loops and edges already present.
    ///
    /// Panics if either endpoint is outside the vertex set.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        for w in [u, v] {
            assert!(w.0 < self.shape.0 && w.1 < self.shape.1, "vertex {w:?} outside {:?}", self.shape);
        }
        if u == v {
            return false;
        }
        self.edges.insert((u.min(v), u.max(v)))
    }

    pub fn is_subgraph_of(&self, other: &PartitionGraph) -> bool {
        self.shape == other.shape && self.edges.is_subset(&other.edges)
    }
}

fn projections(t: &GhzTuple, p: Partition) -> Vec<Vertex> {
    t.kets().iter().map(|k| p.project(k)).collect()
}

/// Full graph: each tuple contributes a complete graph on its projections.
pub fn build_graph(set: &StateSet, p: Partition) -> PartitionGraph {
    let mut g = PartitionGraph::new(p, p.pair_dims(&set.dims()), GraphKind::Full);
    for t in set.tuples() {
        let vs = projections(t, p);
        for (a, &u) in vs.iter().enumerate() {
            for &v in &vs[a + 1..] {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Path subgraph: each tuple's projections are sorted by first coordinate
/// (ties broken on the second) and joined consecutively.
pub fn build_path_graph(set: &StateSet, p: Partition) -> PartitionGraph {
    let mut g = PartitionGraph::new(p, p.pair_dims(&set.dims()), GraphKind::PathSubgraph);
    for t in set.tuples() {
        let mut vs = projections(t, p);
        vs.sort_unstable();
        for w in vs.windows(2) {
            g.add_edge(w[0], w[1]);
        }
    }
    g
}

/// Component of every vertex, identified by its lexicographically smallest
/// member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    shape: (usize, usize),
    labels: Vec<Vertex>,
    count: usize,
}

impl ComponentLabeling {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn label(&self, v: Vertex) -> Vertex {
        self.labels[v.0 * self.shape.1 + v.1]
    }

    /// Members of each component keyed by label.
    pub fn components(&self) -> BTreeMap<Vertex, Vec<Vertex>> {
        let mut out: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for (idx, label) in self.labels.iter().enumerate() {
            out.entry(*label).or_default().push((idx / self.shape.1, idx % self.shape.1));
        }
        out
    }
}

pub fn connected_components(g: &PartitionGraph) -> ComponentLabeling {
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    for &(u, v) in g.edges() {
        uf.union(g.index(u), g.index(v));
    }
    // Indices are visited in increasing order, so the first vertex seen in a
    // class is its smallest.
    let mut root_label: Vec<Option<Vertex>> = vec![None; n];
    let mut labels = Vec::with_capacity(n);
    let mut count = 0;
    for idx in 0..n {
        let root = uf.find(idx);
        let label = *root_label[root].get_or_insert_with(|| {
            count += 1;
            g.vertex(idx)
        });
        labels.push(label);
    }
    ComponentLabeling { shape: g.shape, labels, count }
}

/// A graph without vertices counts as connected.
pub fn is_connected(g: &PartitionGraph) -> bool {
    connected_components(g).count() <= 1
}

/// Graphviz rendering with nodes `v_a_b`, edges in lexicographic order.
pub fn to_dot(g: &PartitionGraph) -> String {
    let name = match g.kind {
        GraphKind::Full => "G",
        GraphKind::PathSubgraph => "Ghat",
    };
    let mut out = String::new();
    writeln!(out, "graph {}_{} {{", name, g.partition.letter()).unwrap();
    for (a, b) in g.vertices() {
        writeln!(out, "  v_{a}_{b};").unwrap();
    }
    for ((a, b), (c, d)) in g.edges() {
        writeln!(out, "  v_{a}_{b} -- v_{c}_{d};").unwrap();
    }
    out.push_str("}\n");
    out
}
