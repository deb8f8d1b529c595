//! Graphs and digraphs on at most 64 vertices, stored as adjacency bitmasks.
//!
//! An undirected graph is a symmetric arc relation; the edge `uv` is the pair
//! of arcs `(u, v)`, `(v, u)`. Loops are allowed in both kinds. Where a
//! neighbourhood matters for information flow (the functional constraints of
//! the Shannon bound, `c(S)`, fixed-point codes) the in-neighbourhood of a
//! digraph is used; for undirected graphs it is the usual neighbourhood.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// A set of vertices of some host graph, as a bitmask.
/// Serializes as the sorted list of its members.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let vs = Vec::<usize>::deserialize(d)?;
        if let Some(&v) = vs.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {v} out of range")));
        }
        Ok(VertexSet::from_vertices(vs))
    }
}

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> VertexSet {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> VertexSet {
        VertexSet(1u64 << v)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> VertexSet {
        VertexSet(vs.into_iter().fold(0u64, |m, v| m | (1u64 << v)))
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Vertices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_range(self, n: usize) -> Result<()> {
        if self.is_subset(VertexSet::full(n)) {
            Ok(())
        } else {
            let vertex = self.difference(VertexSet::full(n)).first().unwrap_or(n);
            Err(Error::VertexOutOfRange { vertex, n })
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_vertices(iter)
    }
}

/// A graph or digraph with dense labels `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    out: Vec<u64>,
    inc: Vec<u64>,
    directed: bool,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.directed {
            write!(f, "Graph(directed, {})", crate::format::render_arc_list(self))
        } else {
            write!(f, "Graph({})", crate::format::render_edge_list(self))
        }
    }
}

impl Default for Graph {
    fn default() -> Graph {
        Graph::empty(0)
    }
}

impl Graph {
    fn empty_of_kind(n: usize, directed: bool) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        Ok(Graph { n, out: vec![0; n], inc: vec![0; n], directed })
    }

    /// Edgeless undirected graph on `n` vertices.
    pub fn empty(n: usize) -> Graph {
        Graph::empty_of_kind(n, false).expect("n within MAX_VERTICES")
    }

    pub fn empty_directed(n: usize) -> Graph {
        Graph::empty_of_kind(n, true).expect("n within MAX_VERTICES")
    }

    pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty_of_kind(n, false)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn directed(n: usize, arcs: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty_of_kind(n, true)?;
        for &(u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from out-neighbourhood masks. The kind is undirected
    /// exactly when the relation is symmetric.
    pub fn from_out_masks(out: Vec<u64>) -> Result<Graph> {
        let n = out.len();
        let mut g = Graph::empty_of_kind(n, true)?;
        for (u, &row) in out.iter().enumerate() {
            for v in VertexSet(row).iter() {
                g.add_arc(u, v)?;
            }
        }
        g.directed = !g.is_symmetric();
        Ok(g)
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.set_edge(u, (u + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.set_edge(u - 1, u);
        }
        g
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    fn set_arc(&mut self, u: usize, v: usize) {
        self.out[u] |= 1u64 << v;
        self.inc[v] |= 1u64 << u;
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.set_arc(u, v);
        self.set_arc(v, u);
    }

    /// Adds an arc. On an undirected graph this adds the edge `uv`.
    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if self.directed {
            self.set_arc(u, v);
        } else {
            self.set_edge(u, v);
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.set_edge(u, v);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.out[u] &= !(1u64 << v);
            self.inc[v] &= !(1u64 << u);
            self.out[v] &= !(1u64 << u);
            self.inc[u] &= !(1u64 << v);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.out[u] >> v & 1 == 1
    }

    /// Both arcs present.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) && self.has_arc(v, u)
    }

    pub fn out_neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.out[v])
    }

    pub fn in_neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.inc[v])
    }

    /// `N(v)`: in-neighbourhood (equal to the neighbourhood when undirected).
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.inc[v])
    }

    /// Neighbours through mutual arcs, loops excluded.
    pub fn mutual_neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.out[v] & self.inc[v] & !(1u64 << v))
    }

    pub fn out_masks(&self) -> &[u64] {
        &self.out
    }

    pub fn is_symmetric(&self) -> bool {
        self.out == self.inc
    }

    pub fn has_loops(&self) -> bool {
        !self.loops().is_empty()
    }

    /// Undirected and loop-free.
    pub fn is_simple(&self) -> bool {
        !self.directed && !self.has_loops()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Number of edges of an undirected graph (loops count once).
    pub fn edge_count(&self) -> usize {
        let loops = self.loops().len();
        (self.arc_count() - loops) / 2 + loops
    }

    /// Edges `(u, v)` with `u <= v`, ordered; mutual arc pairs for digraphs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut es = Vec::new();
        for u in 0..self.n {
            for v in VertexSet(self.out[u] & self.inc[u]).iter() {
                if v >= u {
                    es.push((u, v));
                }
            }
        }
        es
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| VertexSet(self.out[u]).iter().map(move |v| (u, v)))
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.mutual_neighbors(v).len()
    }

    /// Same relation viewed as a digraph.
    pub fn as_directed(&self) -> Graph {
        Graph { directed: true, ..self.clone() }
    }

    /// `D[S]` with vertices relabeled densely in increasing order; the
    /// returned map sends new labels to old ones.
    pub fn induced_subgraph(&self, s: VertexSet) -> Result<(Graph, Vec<usize>)> {
        s.check_range(self.n)?;
        let map = s.to_vec();
        let mut h = Graph::empty_of_kind(map.len(), self.directed)?;
        for (i, &u) in map.iter().enumerate() {
            for (j, &v) in map.iter().enumerate() {
                if self.has_arc(u, v) {
                    h.set_arc(i, j);
                }
            }
        }
        Ok((h, map))
    }

    /// `D - S`.
    pub fn remove_vertices(&self, s: VertexSet) -> Result<(Graph, Vec<usize>)> {
        s.check_range(self.n)?;
        self.induced_subgraph(self.vertices().difference(s))
    }

    /// `N(S)`, the union of the neighbourhoods of the members of `s`.
    pub fn neighborhood(&self, s: VertexSet) -> Result<VertexSet> {
        s.check_range(self.n)?;
        Ok(s.iter().fold(VertexSet::EMPTY, |acc, v| acc.union(self.neighbors(v))))
    }

    /// `c(S)`: vertices outside `S` whose whole neighbourhood lies inside `S`.
    pub fn co_neighborhood_set(&self, s: VertexSet) -> Result<VertexSet> {
        s.check_range(self.n)?;
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        let c: VertexSet = self
            .vertices()
            .difference(s)
            .iter()
            .filter(|&v| self.neighbors(v).is_subset(s))
            .collect();
        debug_assert!(self.is_independent(c));
        Ok(c)
    }

    /// No arc (or loop) joins two members of `s`.
    pub fn is_independent(&self, s: VertexSet) -> bool {
        s.iter().all(|v| self.out_neighbors(v).is_disjoint(s))
    }

    /// `G[S, T]`: the edges of an undirected graph crossing between `s` and `t`.
    pub fn bipartite_induced(&self, s: VertexSet, t: VertexSet) -> Result<BipartiteView> {
        s.check_range(self.n)?;
        t.check_range(self.n)?;
        if self.directed {
            return Err(Error::DirectedInput);
        }
        if !s.is_disjoint(t) {
            return Err(Error::OverlappingSets);
        }
        let mut edges = Vec::new();
        for u in s.iter() {
            for v in self.neighbors(u).intersection(t).iter() {
                edges.push((u, v));
            }
        }
        Ok(BipartiteView { left: s, right: t, edges })
    }

    /// Vertices with a loop.
    pub fn loops(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.out[v] >> v & 1 == 1).collect()
    }

    /// The same graph with every loop removed.
    pub fn without_loops(&self) -> Graph {
        let mut g = self.clone();
        for v in 0..self.n {
            g.out[v] &= !(1u64 << v);
            g.inc[v] &= !(1u64 << v);
        }
        g
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    /// The result is directed if either operand is.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let n = self.n + other.n;
        let mut g = Graph::empty_of_kind(n, self.directed || other.directed)?;
        for (u, v) in self.arcs() {
            g.set_arc(u, v);
        }
        for (u, v) in other.arcs() {
            g.set_arc(u + self.n, v + self.n);
        }
        Ok(g)
    }

    /// Complement relation on distinct pairs; never has loops.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty_of_kind(self.n, self.directed).expect("same size");
        for u in 0..self.n {
            for v in 0..self.n {
                if u != v && !self.has_arc(u, v) {
                    g.set_arc(u, v);
                }
            }
        }
        g
    }

    /// Whether the digraph view has no directed cycle. Loops are cycles, and
    /// so is every undirected edge (a pair of opposite arcs).
    pub fn is_acyclic(&self) -> bool {
        self.is_acyclic_within(self.vertices())
    }

    /// Acyclicity of `D[S]`.
    pub fn is_acyclic_within(&self, s: VertexSet) -> bool {
        // Kahn's algorithm restricted to s.
        let mut remaining = s;
        loop {
            let sources: VertexSet = remaining
                .iter()
                .filter(|&v| self.in_neighbors(v).is_disjoint(remaining))
                .collect();
            if sources.is_empty() {
                return remaining.is_empty();
            }
            remaining = remaining.difference(sources);
        }
    }

    /// Weakly connected components, each as a vertex set, ordered by least vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::EMPTY;
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.out_neighbors(v)).union(self.in_neighbors(v));
                }
                frontier = next.difference(comp);
                comp = comp.union(next);
            }
            seen = seen.union(comp);
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The I-reduction: delete the acyclic set `I` and add an arc `u -> v`
    /// whenever `D` has a directed path from `u` to `v` whose interior lies
    /// in `I`. A path may return to its start through `I`, which creates a
    /// loop at that vertex.
    pub fn i_reduction(&self, i: VertexSet) -> Result<Graph> {
        i.check_range(self.n)?;
        if !self.is_acyclic_within(i) {
            return Err(Error::NotAcyclic);
        }
        let keep = self.vertices().difference(i);
        let map = keep.to_vec();
        let mut out = vec![0u64; map.len()];
        let index_of = |v: usize| map.binary_search(&v).expect("kept vertex");
        for (a, &u) in map.iter().enumerate() {
            // Everything in I reachable from u through I.
            let mut reach = self.out_neighbors(u).intersection(i);
            let mut frontier = reach;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for w in frontier.iter() {
                    next = next.union(self.out_neighbors(w).intersection(i));
                }
                frontier = next.difference(reach);
                reach = reach.union(next);
            }
            let mut targets = self.out_neighbors(u);
            for w in reach.iter() {
                targets = targets.union(self.out_neighbors(w));
            }
            for v in targets.intersection(keep).iter() {
                out[a] |= 1u64 << index_of(v);
            }
        }
        let mut g = Graph::from_out_masks(out)?;
        g.directed = self.directed || !g.is_symmetric();
        Ok(g)
    }

    /// Relabels vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty_of_kind(self.n, self.directed).expect("same size");
        for (u, v) in self.arcs() {
            g.set_arc(perm[u], perm[v]);
        }
        g
    }

    /// Whether `self` is a spanning subgraph of `other` (same vertex count,
    /// arc relation contained).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.out.iter().zip(&other.out).all(|(a, b)| a & !b == 0)
    }
}

/// `G[S, T]` for disjoint `S`, `T`: the crossing edges `(s, t)` with `s` in
/// `left` and `t` in `right`. Labels are those of the host graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteView {
    pub left: VertexSet,
    pub right: VertexSet,
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteView {
    pub fn new(left: VertexSet, right: VertexSet, edges: Vec<(usize, usize)>) -> Result<Self> {
        if !left.is_disjoint(right) {
            return Err(Error::OverlappingSets);
        }
        for &(a, b) in &edges {
            if !left.contains(a) || !right.contains(b) {
                return Err(Error::Precondition(format!(
                    "edge ({a}, {b}) does not cross from left to right"
                )));
            }
        }
        Ok(BipartiteView { left, right, edges })
    }

    /// Right-side neighbours of a left vertex.
    pub fn neighbors_of_left(&self, a: usize) -> VertexSet {
        self.edges.iter().filter(|e| e.0 == a).map(|e| e.1).collect()
    }

    /// `N(A')` for `A'` a subset of the left side.
    pub fn neighborhood(&self, a: VertexSet) -> VertexSet {
        self.edges.iter().filter(|e| a.contains(e.0)).map(|e| e.1).collect()
    }

    /// The view restricted to `left' x right'`.
    pub fn restrict(&self, left: VertexSet, right: VertexSet) -> BipartiteView {
        BipartiteView {
            left,
            right,
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|&(a, b)| left.contains(a) && right.contains(b))
                .collect(),
        }
    }
}
