//! Saturating matchings and the reducible sets that split off exact
//! integer parts of the entropy.
//!
//! For nonempty `S`, `c(S)` is the set of vertices outside `S` whose whole
//! neighbourhood lies in `S`, and `d(S) = c(S) + S`. When `G[c(S), S]` has a
//! matching saturating `S`, `H(G) = |S| + H(G - d(S))`.

use serde::{Deserialize, Serialize};

use crate::bounds::{self, EntropyBracket, LowerWitness, UpperWitness};
use crate::error::{Error, Result};
use crate::graph::{BipartiteView, Graph, VertexSet};
use crate::rational::Rational;

pub const DEFAULT_REDUCIBLE_CAP: usize = 16;

/// Maximum matching of a bipartite view by augmenting paths, as
/// `(left, right)` pairs sorted by left vertex.
pub fn bipartite_max_matching(b: &BipartiteView) -> Vec<(usize, usize)> {
    let mut mate_of_right = [usize::MAX; 64];
    let nbrs: Vec<(usize, VertexSet)> = b.left.iter().map(|a| (a, b.neighbors_of_left(a))).collect();
    for &(a, _) in &nbrs {
        let mut visited = VertexSet::EMPTY;
        augment(a, &nbrs, &mut mate_of_right, &mut visited);
    }
    let mut m: Vec<(usize, usize)> = b
        .right
        .iter()
        .filter(|&r| mate_of_right[r] != usize::MAX)
        .map(|r| (mate_of_right[r], r))
        .collect();
    m.sort_unstable();
    m
}

fn augment(
    a: usize,
    nbrs: &[(usize, VertexSet)],
    mate_of_right: &mut [usize; 64],
    visited: &mut VertexSet,
) -> bool {
    let na = nbrs.iter().find(|(x, _)| *x == a).map(|(_, n)| *n).unwrap_or_default();
    for r in na.iter() {
        if visited.contains(r) {
            continue;
        }
        visited.insert(r);
        if mate_of_right[r] == usize::MAX || augment(mate_of_right[r], nbrs, mate_of_right, visited) {
            mate_of_right[r] = a;
            return true;
        }
    }
    false
}

/// A nonempty `A'` on the left with a matching of `G[A', N(A')]` saturating
/// `N(A')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturatingWitness {
    pub a_prime: VertexSet,
    pub matching: Vec<(usize, usize)>,
    pub saturated: VertexSet,
}

impl SaturatingWitness {
    pub fn validate(&self, b: &BipartiteView) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidMatching(msg.to_string()));
        if self.a_prime.is_empty() || !self.a_prime.is_subset(b.left) {
            return fail("A' must be a nonempty subset of the left side");
        }
        if self.saturated != b.neighborhood(self.a_prime) {
            return fail("saturated set differs from N(A')");
        }
        let mut left = VertexSet::EMPTY;
        let mut right = VertexSet::EMPTY;
        for &(a, r) in &self.matching {
            if !b.edges.contains(&(a, r)) {
                return fail("matching uses a non-edge");
            }
            if !self.a_prime.contains(a) || left.contains(a) || right.contains(r) {
                return fail("matching edges must be disjoint and start in A'");
            }
            left.insert(a);
            right.insert(r);
        }
        if right != self.saturated {
            return fail("matching does not cover N(A') exactly");
        }
        Ok(())
    }
}

/// Constructive form of the bipartite saturation lemma: for `|A| >= |B| >= 1`
/// with at least one edge, returns some nonempty `A'` whose neighbourhood is
/// saturated by a matching inside `G[A', N(A')]`.
///
/// An isolated left vertex is returned alone (its neighbourhood is empty).
/// If a maximum matching covers `A`, Hall's condition holds and `A' = A`.
/// Otherwise the alternating tree of an unmatched left vertex is a Hall
/// violator `A_u` with `|N(A_u)| < |A_u|`; the search recurses into
/// `G[A_u, N(A_u)]` while that shrinks the right side.
pub fn find_saturating_subset(b: &BipartiteView) -> Result<SaturatingWitness> {
    if b.right.is_empty() || b.left.len() < b.right.len() {
        return Err(Error::Precondition(format!(
            "need |A| >= |B| >= 1, got |A| = {}, |B| = {}",
            b.left.len(),
            b.right.len()
        )));
    }
    if b.edges.is_empty() {
        return Err(Error::Precondition("bipartite graph has no edges".into()));
    }
    let witness = saturating_step(b);
    witness.validate(b)?;
    Ok(witness)
}

fn saturating_step(b: &BipartiteView) -> SaturatingWitness {
    if let Some(a) = b.left.iter().find(|&a| b.neighbors_of_left(a).is_empty()) {
        return SaturatingWitness {
            a_prime: VertexSet::singleton(a),
            matching: Vec::new(),
            saturated: VertexSet::EMPTY,
        };
    }
    let m = bipartite_max_matching(b);
    if m.len() == b.left.len() {
        return SaturatingWitness { a_prime: b.left, matching: m, saturated: b.neighborhood(b.left) };
    }
    let matched_left: VertexSet = m.iter().map(|e| e.0).collect();
    let u = b.left.difference(matched_left).first().expect("some left vertex is unmatched");
    let (a_u, b_u) = alternating_tree(b, &m, u);
    if b_u.len() < b.right.len() {
        return saturating_step(&b.restrict(a_u, b_u));
    }
    let matching = m.into_iter().filter(|&(a, r)| a_u.contains(a) && b_u.contains(r)).collect();
    SaturatingWitness { a_prime: a_u, matching, saturated: b_u }
}

/// Left and right vertices reachable from `u` by alternating paths.
fn alternating_tree(
    b: &BipartiteView,
    m: &[(usize, usize)],
    u: usize,
) -> (VertexSet, VertexSet) {
    let mate_of_right = |r: usize| m.iter().find(|e| e.1 == r).map(|e| e.0);
    let mut left = VertexSet::singleton(u);
    let mut right = VertexSet::EMPTY;
    let mut frontier = vec![u];
    while let Some(a) = frontier.pop() {
        for r in b.neighbors_of_left(a).difference(right).iter() {
            right.insert(r);
            let mate = mate_of_right(r).expect("maximum matching: reachable right vertices are matched");
            if !left.contains(mate) {
                left.insert(mate);
                frontier.push(mate);
            }
        }
    }
    (left, right)
}

/// A set `S` with an `S`-saturating matching into `c(S)`, and the graph
/// left after deleting `d(S)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub s: VertexSet,
    pub c: VertexSet,
    /// Pairs `(c_i, s_i)`.
    pub matching: Vec<(usize, usize)>,
    pub d_s: VertexSet,
    #[serde(skip)]
    pub remainder: Graph,
    /// Remainder label -> label in the original graph.
    pub remainder_map: Vec<usize>,
}

impl Decomposition {
    /// Builds the decomposition for `s` from scratch, if `G[c(S), S]` has a
    /// matching saturating `s`.
    pub fn for_set(g: &Graph, s: VertexSet) -> Result<Option<Decomposition>> {
        let c = g.co_neighborhood_set(s)?;
        if c.len() < s.len() {
            return Ok(None);
        }
        let view = g.bipartite_induced(c, s)?;
        let m = bipartite_max_matching(&view);
        if m.len() < s.len() {
            return Ok(None);
        }
        let d_s = c.union(s);
        let (remainder, remainder_map) = g.remove_vertices(d_s)?;
        Ok(Some(Decomposition { s, c, matching: m, d_s, remainder, remainder_map }))
    }

    /// Recomputes `c(S)` and re-checks every field against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidDecomposition(msg.to_string()));
        let c = g.co_neighborhood_set(self.s)?;
        if c != self.c {
            return fail("c(S) does not match");
        }
        if !g.is_independent(c) {
            return fail("c(S) is not independent");
        }
        let mut used_c = VertexSet::EMPTY;
        let mut used_s = VertexSet::EMPTY;
        for &(ci, si) in &self.matching {
            if !c.contains(ci) || !self.s.contains(si) || !g.has_edge(ci, si) {
                return fail("matching edge outside G[c(S), S]");
            }
            if used_c.contains(ci) || used_s.contains(si) {
                return fail("matching edges overlap");
            }
            used_c.insert(ci);
            used_s.insert(si);
        }
        if used_s != self.s {
            return fail("matching does not saturate S");
        }
        if self.d_s != c.union(self.s) {
            return fail("d(S) differs from c(S) + S");
        }
        let (remainder, map) = g.remove_vertices(self.d_s)?;
        if remainder != self.remainder || map != self.remainder_map {
            return fail("remainder is not G - d(S)");
        }
        Ok(())
    }
}

/// Nonempty subsets of `0..n` with `k` elements, in lexicographic order of
/// their sorted vertex lists.
fn subsets_of_size(n: usize, k: usize, out: &mut Vec<VertexSet>) {
    fn go(n: usize, k: usize, from: usize, cur: VertexSet, out: &mut Vec<VertexSet>) {
        if cur.len() == k {
            out.push(cur);
            return;
        }
        for v in from..n {
            if n - v < k - cur.len() {
                break;
            }
            let mut next = cur;
            next.insert(v);
            go(n, k, v + 1, next, out);
        }
    }
    go(n, k, 0, VertexSet::EMPTY, out);
}

/// Smallest (then lexicographically first) `S` with a saturating matching
/// from `c(S)`, if any. Simple graphs only.
pub fn find_reducible_set(g: &Graph, cap: usize) -> Result<Option<Decomposition>> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    if g.has_loops() {
        return Err(Error::LoopedInput);
    }
    if g.n() > cap {
        return Err(Error::CapExceeded { what: "vertex count for the subset search", value: g.n() as u64, cap: cap as u64 });
    }
    let n = g.n();
    for k in 1..=n / 2 {
        let mut sets = Vec::new();
        subsets_of_size(n, k, &mut sets);
        for s in sets {
            if let Some(d) = Decomposition::for_set(g, s)? {
                return Ok(Some(d));
            }
        }
    }
    Ok(None)
}

/// Shifts a bracket of `g - d(S)` by `|S|`.
pub fn apply_decomposition(
    g: &Graph,
    d: &Decomposition,
    remainder: &EntropyBracket,
) -> Result<EntropyBracket> {
    d.validate(g)?;
    let inner = remainder.relabel(&d.remainder_map);
    let (lower, upper) = inner.shifted(d.s.len());
    Ok(EntropyBracket::new(
        lower,
        upper,
        LowerWitness::SaturatingExtension {
            s: d.s.to_vec(),
            matching: d.matching.clone(),
            rest: Box::new(inner.lower_witness),
        },
        UpperWitness::IReduction {
            reduced: d.c.to_vec(),
            s: d.s.to_vec(),
            rest: Box::new(inner.upper_witness),
        },
    ))
}

/// Necessary conditions for entropy-minimality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub n: usize,
    pub isolated: Vec<usize>,
    pub reducible: Option<Decomposition>,
    /// Vertices of a maximum matching.
    pub matched: Vec<usize>,
    pub c_of_matched: Vec<usize>,
    /// `|c(M)| < |M|`.
    pub c_smaller: bool,
    /// When `|c(M)| >= |M|`: the saturating subset inside `c(M)` and the
    /// reducible set it yields.
    pub saturating: Option<SaturatingWitness>,
    pub saturating_decomposition: Option<Decomposition>,
    pub candidate: bool,
}

pub fn certify_entropy_minimal_candidate(g: &Graph, cap: usize) -> Result<MinimalityReport> {
    let reducible = find_reducible_set(g, cap)?;
    let isolated: VertexSet = (0..g.n()).filter(|&v| g.degree(v) == 0).collect();
    let matching = bounds::max_matching(g);
    let m = matching.vertices;
    let c_m = if m.is_empty() { VertexSet::EMPTY } else { g.co_neighborhood_set(m)? };
    let c_smaller = c_m.len() < m.len();

    let mut saturating = None;
    let mut saturating_decomposition = None;
    if !c_smaller && isolated.is_empty() && !m.is_empty() {
        let view = g.bipartite_induced(c_m, m)?;
        let w = find_saturating_subset(&view)?;
        saturating_decomposition = Decomposition::for_set(g, w.saturated)?;
        debug_assert!(saturating_decomposition.is_some());
        saturating = Some(w);
    }
    let candidate = g.n() > 0 && isolated.is_empty() && reducible.is_none() && c_smaller;
    Ok(MinimalityReport {
        n: g.n(),
        isolated: isolated.to_vec(),
        reducible,
        matched: m.to_vec(),
        c_of_matched: c_m.to_vec(),
        c_smaller,
        saturating,
        saturating_decomposition,
        candidate,
    })
}

impl MinimalityReport {
    /// Best integer shift certified by the report's decompositions.
    pub fn shift(&self) -> Option<Rational> {
        self.reducible.as_ref().map(|d| Rational::from(d.s.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{entropy_bracket, BracketOptions};
    use crate::families::{g_family, star};

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    fn view(left: &[usize], right: &[usize], edges: &[(usize, usize)]) -> BipartiteView {
        BipartiteView::new(set(left), set(right), edges.to_vec()).unwrap()
    }

    /// Largest matching over all edge subsets.
    fn brute_bipartite(b: &BipartiteView) -> usize {
        (0u32..1 << b.edges.len())
            .filter(|mask| {
                let chosen: Vec<_> =
                    (0..b.edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| b.edges[i]).collect();
                let l: VertexSet = chosen.iter().map(|e| e.0).collect();
                let r: VertexSet = chosen.iter().map(|e| e.1).collect();
                l.len() == chosen.len() && r.len() == chosen.len()
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn bipartite_matching_examples() {
        let k33: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        assert_eq!(bipartite_max_matching(&view(&[0, 1, 2], &[3, 4, 5], &k33)).len(), 3);
        assert_eq!(bipartite_max_matching(&view(&[0], &[1, 2, 3], &[(0, 1), (0, 2), (0, 3)])).len(), 1);
        let g1 = g_family(1);
        let b = g1.bipartite_induced(set(&[5, 6]), set(&[0, 1, 2, 3, 4])).unwrap();
        assert_eq!(bipartite_max_matching(&b).len(), 2);
        assert_eq!(brute_bipartite(&b), 2);
    }

    #[test]
    fn saturating_examples() {
        let w = find_saturating_subset(&view(&[0], &[1], &[(0, 1)])).unwrap();
        assert_eq!((w.a_prime, w.matching.clone()), (set(&[0]), vec![(0, 1)]));

        let b = view(&[0, 1, 2, 3, 4], &[5, 6, 7], &[(0, 5), (1, 6), (2, 7), (3, 5)]);
        let w = find_saturating_subset(&b).unwrap();
        w.validate(&b).unwrap();

        let b = view(&[0, 1], &[2, 3], &[(0, 2), (1, 2)]);
        let w = find_saturating_subset(&b).unwrap();
        assert_eq!(w.saturated, set(&[2]));
        w.validate(&b).unwrap();

        assert!(find_saturating_subset(&view(&[0], &[1, 2], &[(0, 1)])).is_err());
        assert!(find_saturating_subset(&view(&[0, 1], &[2], &[])).is_err());
    }

    /// Every bipartite graph with |A| <= 5, |B| <= 4, |A| >= |B| and at
    /// least one edge.
    #[test]
    fn saturating_subsets_exhaustive() {
        let mut checked = 0usize;
        for nb in 1..=4usize {
            for na in nb..=5usize {
                let left: Vec<usize> = (0..na).collect();
                let right: Vec<usize> = (na..na + nb).collect();
                let pairs: Vec<(usize, usize)> =
                    left.iter().flat_map(|&a| right.iter().map(move |&r| (a, r))).collect();
                for mask in 1u32..1 << pairs.len() {
                    let edges: Vec<_> =
                        (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
                    let b = view(&left, &right, &edges);
                    let w = find_saturating_subset(&b).unwrap();
                    w.validate(&b).unwrap();
                    checked += 1;
                }
            }
        }
        // sum over (na, nb) of 2^(na*nb) - 1
        let expected: usize = (1..=4usize)
            .flat_map(|nb| (nb..=5usize).map(move |na| (1usize << (na * nb)) - 1))
            .sum();
        assert_eq!(checked, expected);
    }

    #[test]
    fn bipartite_matching_agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let na = rng.gen_range(1..=5);
            let nb = rng.gen_range(1..=4);
            let edges: Vec<_> = (0..na)
                .flat_map(|a| (na..na + nb).map(move |r| (a, r)))
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            let left: Vec<usize> = (0..na).collect();
            let right: Vec<usize> = (na..na + nb).collect();
            let b = view(&left, &right, &edges);
            assert_eq!(bipartite_max_matching(&b).len(), brute_bipartite(&b));
        }
    }

    #[test]
    fn reducible_examples() {
        let d = find_reducible_set(&Graph::complete(2), 16).unwrap().unwrap();
        assert_eq!((d.s, d.c, d.matching.clone()), (set(&[0]), set(&[1]), vec![(1, 0)]));
        assert_eq!(find_reducible_set(&Graph::cycle(5), 16).unwrap(), None);

        let mut pendant = Graph::cycle(5).disjoint_union(&Graph::empty(1)).unwrap();
        pendant.add_edge(5, 0).unwrap();
        let d = find_reducible_set(&pendant, 16).unwrap().unwrap();
        assert_eq!(d.s, set(&[0]));
        assert!(d.c.contains(5));
        assert_eq!(d.matching, vec![(5, 0)]);
        d.validate(&pendant).unwrap();

        assert_eq!(find_reducible_set(&g_family(1), 16).unwrap(), None);
        assert!(matches!(find_reducible_set(&Graph::empty_directed(2), 16), Err(Error::DirectedInput)));
        assert!(matches!(find_reducible_set(&Graph::empty(17), 16), Err(Error::CapExceeded { .. })));
    }

    /// Exhaustive over all nonempty S, without the size-order shortcut.
    fn brute_reducible(g: &Graph) -> bool {
        (1u64..1 << g.n()).any(|s| {
            let s = VertexSet(s);
            let c = g.co_neighborhood_set(s).unwrap();
            let b = g.bipartite_induced(c, s).unwrap();
            brute_bipartite(&b) == s.len()
        })
    }

    #[test]
    fn reducible_agrees_with_exhaustive_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..150 {
            let n = rng.gen_range(1..=7);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.35) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let found = find_reducible_set(&g, 16).unwrap();
            assert_eq!(found.is_some(), brute_reducible(&g), "{g:?}");
            if let Some(d) = found {
                d.validate(&g).unwrap();
                assert!(g.is_independent(d.c));
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let opts = BracketOptions::default();
        let k2 = Graph::complete(2);
        let d = find_reducible_set(&k2, 16).unwrap().unwrap();
        let b = apply_decomposition(&k2, &d, &entropy_bracket(&d.remainder, &opts).unwrap()).unwrap();
        assert_eq!(b.value(), Some(&Rational::from(1usize)));

        let mut pendant = Graph::cycle(5).disjoint_union(&Graph::empty(1)).unwrap();
        pendant.add_edge(5, 0).unwrap();
        let d = find_reducible_set(&pendant, 16).unwrap().unwrap();
        assert_eq!(d.remainder, Graph::path(4));
        let b = apply_decomposition(&pendant, &d, &entropy_bracket(&d.remainder, &opts).unwrap())
            .unwrap();
        assert_eq!(b.value(), Some(&Rational::from(3usize)));
        assert_eq!(entropy_bracket(&pendant, &opts).unwrap().value(), Some(&Rational::from(3usize)));

        let s3 = star(3);
        let d = find_reducible_set(&s3, 16).unwrap().unwrap();
        let b = apply_decomposition(&s3, &d, &entropy_bracket(&d.remainder, &opts).unwrap()).unwrap();
        assert_eq!(b.value(), Some(&Rational::from(1usize)));

        let mut bad = d.clone();
        bad.matching.clear();
        assert!(bad.validate(&s3).is_err());
    }

    #[test]
    fn minimality_reports() {
        let r = certify_entropy_minimal_candidate(&Graph::cycle(5), 16).unwrap();
        assert!(r.candidate);
        assert_eq!(r.matched.len(), 4);
        assert_eq!(r.c_of_matched.len(), 1);

        assert!(certify_entropy_minimal_candidate(&g_family(1), 16).unwrap().candidate);

        let mut pendant = Graph::cycle(5).disjoint_union(&Graph::empty(1)).unwrap();
        pendant.add_edge(5, 2).unwrap();
        let r = certify_entropy_minimal_candidate(&pendant, 16).unwrap();
        assert!(!r.candidate);
        assert!(r.reducible.is_some());

        // K_{1,3}: M = {centre, leaf}, c(M) = the other two leaves.
        let r = certify_entropy_minimal_candidate(&star(3), 16).unwrap();
        assert!(!r.c_smaller);
        let d = r.saturating_decomposition.unwrap();
        d.validate(&star(3)).unwrap();
    }
}
