//! Named graphs used throughout the test-suite and the verification reports.

use crate::graph::{Graph, VertexSet};

/// Pentagon `v1..v5` (labels 0..4) plus the edge `v6v7` (labels 5, 6), the
/// common core of the seven-vertex family.
fn pentagon_with_pendant_edge() -> Graph {
    Graph::cycle(5).disjoint_union(&Graph::complete(2)).expect("7 vertices")
}

/// The extra edges attaching `v6`, `v7` to the pentagon, 1-indexed.
const G_FAMILY_ATTACHMENTS: [&[(usize, usize)]; 6] = [
    &[(6, 1), (6, 2), (7, 4)],
    &[(6, 1), (6, 3), (7, 2)],
    &[(6, 1), (6, 3), (7, 4)],
    &[(6, 1), (6, 3), (7, 2), (7, 4)],
    &[(6, 1), (7, 2)],
    &[(6, 1), (7, 3)],
];

/// `G_i` for `i` in `1..=6`: the pentagon `v1..v5`, the edge `v6v7`, and the
/// attachments of the seven-vertex family (labels are 0-indexed).
pub fn g_family(i: usize) -> Graph {
    assert!((1..=6).contains(&i), "G_i is defined for i in 1..=6");
    let mut g = pentagon_with_pendant_edge();
    for &(u, v) in G_FAMILY_ATTACHMENTS[i - 1] {
        g.add_edge(u - 1, v - 1).expect("in range");
    }
    g
}

/// The pentagon plus a sixth vertex with the given neighbourhood on it.
pub fn pentagon_plus_vertex(neighborhood: VertexSet) -> Graph {
    assert!(neighborhood.is_subset(VertexSet::full(5)));
    let mut g = Graph::cycle(5).disjoint_union(&Graph::empty(1)).expect("6 vertices");
    for v in neighborhood.iter() {
        g.add_edge(5, v).expect("in range");
    }
    g
}

/// `N` contains three cyclically consecutive pentagon vertices.
pub fn has_three_consecutive(neighborhood: VertexSet) -> bool {
    (0..5).any(|i| (0..3).all(|k| neighborhood.contains((i + k) % 5)))
}

/// Star `K_{1,leaves}` with centre 0.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::undirected(leaves + 1, &edges).expect("small")
}
