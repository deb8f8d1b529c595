//! Graph parameters that bound the entropy, and their assembly into a
//! certified bracket.
//!
//! Lower bounds: maximum matching `nu`, `n - cc` (clique cover number) and
//! `n - kappa_f` (fractional clique cover number). Upper bounds: the
//! transversal number `tau` (minimum feedback vertex set) and the Shannon
//! bound `theta`, the optimum of an LP over polymatroids satisfying the
//! functional constraints `h(N(v) + v) = h(N(v))`.
//!
//! For digraphs, cliques and matchings use mutual arcs only and `N(v)` is
//! the in-neighbourhood.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::lp::{self, LinearProgram, LpSolution, LpStatus, Relation, Sense};
use crate::rational::Rational;

pub const DEFAULT_SHANNON_CAP: usize = 10;

const NONE: usize = usize::MAX;

/// A maximum matching on the mutual-arc relation (loops ignored).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub size: usize,
    pub edges: Vec<(usize, usize)>,
    /// Matched vertices.
    pub vertices: VertexSet,
}

impl Matching {
    /// Disjoint mutual edges of `g`, consistent with `size` and `vertices`.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let mut seen = VertexSet::EMPTY;
        for &(u, v) in &self.edges {
            if u == v || u >= g.n() || v >= g.n() || !g.has_edge(u, v) {
                return false;
            }
            if seen.contains(u) || seen.contains(v) {
                return false;
            }
            seen.insert(u);
            seen.insert(v);
        }
        self.size == self.edges.len() && seen == self.vertices
    }
}

/// Maximum matching by Edmonds' blossom algorithm.
pub fn max_matching(g: &Graph) -> Matching {
    let n = g.n();
    let adj: Vec<VertexSet> = (0..n).map(|v| g.mutual_neighbors(v)).collect();
    let mut mate = vec![NONE; n];
    for root in 0..n {
        if mate[root] == NONE {
            if let Some(end) = augmenting_path(&adj, &mut mate, root) {
                let _ = end;
            }
        }
    }
    let mut edges = Vec::new();
    let mut vertices = VertexSet::EMPTY;
    for (u, &m) in mate.iter().enumerate() {
        if m != NONE && u < m {
            edges.push((u, m));
            vertices.insert(u);
            vertices.insert(m);
        }
    }
    Matching { size: edges.len(), edges, vertices }
}

/// Grows an alternating forest from `root`; augments and returns the far
/// endpoint when an augmenting path exists.
fn augmenting_path(adj: &[VertexSet], mate: &mut [usize], root: usize) -> Option<usize> {
    let n = adj.len();
    let mut used = vec![false; n];
    let mut parent = vec![NONE; n];
    let mut base: Vec<usize> = (0..n).collect();
    used[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);

    while let Some(v) = queue.pop_front() {
        for to in adj[v].iter() {
            if base[v] == base[to] || mate[v] == to {
                continue;
            }
            if to == root || (mate[to] != NONE && parent[mate[to]] != NONE) {
                let cur = lca(&base, mate, &parent, v, to);
                let mut blossom = vec![false; n];
                mark_path(&base, mate, &mut parent, &mut blossom, v, cur, to);
                mark_path(&base, mate, &mut parent, &mut blossom, to, cur, v);
                for i in 0..n {
                    if blossom[base[i]] {
                        base[i] = cur;
                        if !used[i] {
                            used[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if parent[to] == NONE {
                parent[to] = v;
                if mate[to] == NONE {
                    let mut u = to;
                    while u != NONE {
                        let pu = parent[u];
                        let next = mate[pu];
                        mate[u] = pu;
                        mate[pu] = u;
                        u = next;
                    }
                    return Some(to);
                }
                used[mate[to]] = true;
                queue.push_back(mate[to]);
            }
        }
    }
    None
}

fn lca(base: &[usize], mate: &[usize], parent: &[usize], mut a: usize, mut b: usize) -> usize {
    let mut seen = vec![false; base.len()];
    loop {
        a = base[a];
        seen[a] = true;
        if mate[a] == NONE {
            break;
        }
        a = parent[mate[a]];
    }
    loop {
        b = base[b];
        if seen[b] {
            return b;
        }
        b = parent[mate[b]];
    }
}

fn mark_path(
    base: &[usize],
    mate: &[usize],
    parent: &mut [usize],
    blossom: &mut [bool],
    mut v: usize,
    b: usize,
    mut child: usize,
) {
    while base[v] != b {
        blossom[base[v]] = true;
        blossom[base[mate[v]]] = true;
        parent[v] = child;
        child = mate[v];
        v = parent[mate[v]];
    }
}

/// A family of cliques of a host graph, optionally weighted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueFamily {
    pub cliques: Vec<VertexSet>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weights: Option<Vec<Rational>>,
}

impl CliqueFamily {
    pub fn unweighted(cliques: Vec<VertexSet>) -> Self {
        CliqueFamily { cliques, weights: None }
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Sum of weights (or the number of cliques when unweighted).
    pub fn total(&self) -> Rational {
        match &self.weights {
            Some(w) => w.iter().sum(),
            None => Rational::from(self.cliques.len()),
        }
    }

    /// Every member is a clique of `host`; weights, when present, are
    /// nonnegative and give every vertex total weight at least one; an
    /// unweighted family must cover every vertex.
    pub fn is_valid_cover(&self, host: &Graph) -> bool {
        if !self.cliques.iter().all(|c| is_clique(host, *c)) {
            return false;
        }
        match &self.weights {
            None => {
                let covered =
                    self.cliques.iter().fold(VertexSet::EMPTY, |acc, c| acc.union(*c));
                covered == host.vertices()
            }
            Some(w) => {
                if w.len() != self.cliques.len() || w.iter().any(Rational::is_negative) {
                    return false;
                }
                (0..host.n()).all(|v| {
                    let load: Rational = self
                        .cliques
                        .iter()
                        .zip(w)
                        .filter(|(c, _)| c.contains(v))
                        .map(|(_, w)| w.clone())
                        .sum();
                    load >= Rational::one()
                })
            }
        }
    }
}

pub fn is_clique(g: &Graph, c: VertexSet) -> bool {
    c.is_subset(g.vertices())
        && c.iter().all(|v| c.difference(VertexSet::singleton(v)).is_subset(g.mutual_neighbors(v)))
}

/// All inclusion-maximal cliques (Bron–Kerbosch with pivoting), ordered by
/// their sorted vertex lists.
pub fn maximal_cliques(g: &Graph) -> CliqueFamily {
    let n = g.n();
    if n == 0 {
        return CliqueFamily::unweighted(Vec::new());
    }
    let adj: Vec<VertexSet> = (0..n).map(|v| g.mutual_neighbors(v)).collect();
    let mut out = Vec::new();
    bron_kerbosch(&adj, VertexSet::EMPTY, g.vertices(), VertexSet::EMPTY, &mut out);
    out.sort_by_key(|c| c.to_vec());
    CliqueFamily::unweighted(out)
}

fn bron_kerbosch(
    adj: &[VertexSet],
    r: VertexSet,
    mut p: VertexSet,
    mut x: VertexSet,
    out: &mut Vec<VertexSet>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r);
        }
        return;
    }
    let pivot = p
        .union(x)
        .iter()
        .max_by_key(|&u| (p.intersection(adj[u]).len(), std::cmp::Reverse(u)))
        .expect("p nonempty");
    for v in p.difference(adj[pivot]).iter() {
        let mut r2 = r;
        r2.insert(v);
        bron_kerbosch(adj, r2, p.intersection(adj[v]), x.intersection(adj[v]), out);
        p.remove(v);
        x.insert(v);
    }
}

/// Exact clique cover number by branch-and-bound set cover over the
/// maximal cliques.
pub fn clique_cover_number(g: &Graph) -> (usize, CliqueFamily) {
    let family = maximal_cliques(g).cliques;
    if g.n() == 0 {
        return (0, CliqueFamily::unweighted(Vec::new()));
    }
    let max_size = family.iter().map(|c| c.len()).max().unwrap_or(1);

    // Greedy start: repeatedly take the clique covering most uncovered vertices.
    let mut best: Vec<usize> = Vec::new();
    let mut uncovered = g.vertices();
    while !uncovered.is_empty() {
        let i = (0..family.len())
            .max_by_key(|&i| (family[i].intersection(uncovered).len(), std::cmp::Reverse(i)))
            .expect("family covers every vertex");
        best.push(i);
        uncovered = uncovered.difference(family[i]);
    }

    let mut chosen = Vec::new();
    cover_search(g, &family, max_size, g.vertices(), &mut chosen, &mut best);
    best.sort_unstable();
    let cliques = best.iter().map(|&i| family[i]).collect();
    (best.len(), CliqueFamily::unweighted(cliques))
}

fn cover_search(
    g: &Graph,
    family: &[VertexSet],
    max_size: usize,
    uncovered: VertexSet,
    chosen: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    if uncovered.is_empty() {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    // Pairwise non-adjacent uncovered vertices need distinct cliques.
    let mut independent = 0;
    let mut pool = uncovered;
    while let Some(v) = pool.first() {
        independent += 1;
        pool = pool.difference(g.mutual_neighbors(v)).difference(VertexSet::singleton(v));
    }
    let by_size = uncovered.len().div_ceil(max_size);
    if chosen.len() + independent.max(by_size) >= best.len() {
        return;
    }
    let v = uncovered.first().expect("nonempty");
    let mut options: Vec<usize> = (0..family.len()).filter(|&i| family[i].contains(v)).collect();
    options.sort_by_key(|&i| (std::cmp::Reverse(family[i].intersection(uncovered).len()), i));
    for i in options {
        chosen.push(i);
        cover_search(g, family, max_size, uncovered.difference(family[i]), chosen, best);
        chosen.pop();
    }
}

/// The covering LP over maximal cliques: minimize the total weight subject
/// to every vertex having load at least one.
pub fn fractional_cover_lp(g: &Graph) -> (LinearProgram, Vec<VertexSet>) {
    let cliques = maximal_cliques(g).cliques;
    let mut lp = LinearProgram::new(cliques.len(), Sense::Minimize);
    lp.objective = vec![Rational::one(); cliques.len()];
    for v in 0..g.n() {
        let row = (0..cliques.len())
            .filter(|&i| cliques[i].contains(v))
            .map(|i| (i, Rational::one()))
            .collect();
        lp.add_constraint(row, Relation::Ge, Rational::one()).expect("indices in range");
    }
    lp.names = Some(cliques.iter().map(|c| set_name("w", *c)).collect());
    (lp, cliques)
}

fn set_name(prefix: &str, s: VertexSet) -> String {
    let mut name = String::from(prefix);
    name.push('_');
    let members: Vec<String> = s.iter().map(|v| (v + 1).to_string()).collect();
    name.push_str(&members.join("_"));
    name
}

/// Fractional clique cover number with its weight certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalCover {
    pub value: Rational,
    pub family: CliqueFamily,
    #[serde(skip)]
    pub solution: Option<LpSolution>,
}

pub fn fractional_clique_cover_number(g: &Graph) -> FractionalCover {
    if g.n() == 0 {
        return FractionalCover {
            value: Rational::zero(),
            family: CliqueFamily { cliques: Vec::new(), weights: Some(Vec::new()) },
            solution: None,
        };
    }
    let (lp, cliques) = fractional_cover_lp(g);
    let sol = lp::solve(&lp).expect("well-formed covering LP");
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    debug_assert!(lp::verify_certificates(&lp, &sol));
    let value = sol.objective.clone().expect("covering LP is feasible and bounded");
    let family = CliqueFamily { cliques, weights: Some(sol.primal.clone()) };
    FractionalCover { value, family, solution: Some(sol) }
}

/// Minimum feedback vertex set: `(tau, witness)` with `g - witness` acyclic.
///
/// Loops are forced into the witness. If the rest is symmetric the problem
/// is minimum vertex cover; otherwise directed cycles are hit by branching
/// on a shortest cycle with iterative deepening.
pub fn transversal_number(g: &Graph) -> (usize, VertexSet) {
    let loops = g.loops();
    let rest = g.vertices().difference(loops);
    let witness = if g.without_loops().is_symmetric() {
        let adj: Vec<VertexSet> = (0..g.n()).map(|v| g.mutual_neighbors(v)).collect();
        let mut best = rest;
        vertex_cover_search(&adj, rest, VertexSet::EMPTY, &mut best);
        best
    } else {
        let mut found = None;
        for k in 0..=rest.len() {
            if let Some(w) = fvs_search(g, rest, k) {
                found = Some(w);
                break;
            }
        }
        found.expect("removing every vertex leaves an acyclic graph")
    };
    let witness = witness.union(loops);
    debug_assert!(g.is_acyclic_within(g.vertices().difference(witness)));
    (witness.len(), witness)
}

fn vertex_cover_search(
    adj: &[VertexSet],
    alive: VertexSet,
    taken: VertexSet,
    best: &mut VertexSet,
) {
    let degree = |v: usize| adj[v].intersection(alive).len();
    let Some(v) = alive.iter().filter(|&v| degree(v) > 0).max_by_key(|&v| (degree(v), std::cmp::Reverse(v)))
    else {
        if taken.len() < best.len() || (taken.len() == best.len() && taken.0 < best.0) {
            *best = taken;
        }
        return;
    };
    // Greedy maximal matching on the remaining edges bounds what is left.
    let mut free = alive;
    let mut matched = 0;
    for u in alive.iter() {
        if free.contains(u) {
            if let Some(w) = adj[u].intersection(free).first() {
                matched += 1;
                free.remove(u);
                free.remove(w);
            }
        }
    }
    if taken.len() + matched > best.len() {
        return;
    }
    let mut with_v = taken;
    with_v.insert(v);
    let mut alive_v = alive;
    alive_v.remove(v);
    vertex_cover_search(adj, alive_v, with_v, best);

    let nbrs = adj[v].intersection(alive);
    vertex_cover_search(
        adj,
        alive.difference(nbrs).difference(VertexSet::singleton(v)),
        taken.union(nbrs),
        best,
    );
}

/// A feedback vertex set of size at most `k` inside `alive`, if any.
fn fvs_search(g: &Graph, alive: VertexSet, k: usize) -> Option<VertexSet> {
    let Some(cycle) = shortest_cycle(g, alive) else {
        return Some(VertexSet::EMPTY);
    };
    if k == 0 {
        return None;
    }
    for v in cycle.iter() {
        let mut next = alive;
        next.remove(v);
        if let Some(mut w) = fvs_search(g, next, k - 1) {
            w.insert(v);
            return Some(w);
        }
    }
    None
}

/// Vertex set of a shortest directed cycle of `g[alive]`.
fn shortest_cycle(g: &Graph, alive: VertexSet) -> Option<VertexSet> {
    let mut best: Option<Vec<usize>> = None;
    for start in alive.iter() {
        // BFS from start back to start.
        let mut parent = vec![NONE; g.n()];
        let mut seen = VertexSet::singleton(start);
        let mut queue = std::collections::VecDeque::from([start]);
        let mut closing = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for w in g.out_neighbors(u).intersection(alive).iter() {
                if w == start {
                    closing = Some(u);
                    break 'bfs;
                }
                if !seen.contains(w) {
                    seen.insert(w);
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if let Some(mut u) = closing {
            let mut cycle = vec![start];
            while u != start {
                cycle.push(u);
                u = parent[u];
            }
            if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                best = Some(cycle);
            }
        }
    }
    best.map(|c| c.into_iter().collect())
}

/// The Shannon bound LP. Variable `S` (a bitmask) is `h(S)`; `h(empty) = 0`
/// is an explicit row. Submodularity and monotonicity are imposed through
/// the elemental inequalities, which generate the polymatroid cone.
pub fn shannon_lp(g: &Graph) -> LinearProgram {
    let n = g.n();
    let size = 1usize << n;
    let full = (size - 1) as u64;
    let one = Rational::one;
    let neg = || -Rational::one();
    let mut lp = LinearProgram::new(size, Sense::Maximize);
    lp.objective[size - 1] = one();
    let mut add = |coeffs: Vec<(usize, Rational)>, rel, rhs| {
        lp.add_constraint(coeffs, rel, rhs).expect("indices below 2^n");
    };

    add(vec![(0, one())], Relation::Eq, Rational::zero());
    for v in 0..n {
        add(vec![(1 << v, one())], Relation::Le, one());
    }
    for i in 0..n {
        for j in i + 1..n {
            let pair = (1u64 << i) | (1u64 << j);
            let others = full & !pair;
            // every subset S of the other vertices, increasing
            let mut s = 0u64;
            loop {
                let si = (s | 1 << i) as usize;
                let sj = (s | 1 << j) as usize;
                let sij = (s | pair) as usize;
                add(
                    vec![(si, one()), (sj, one()), (sij, neg()), (s as usize, neg())],
                    Relation::Ge,
                    Rational::zero(),
                );
                if s == others {
                    break;
                }
                s = (s.wrapping_sub(others)) & others;
            }
        }
    }
    for i in 0..n {
        let without = (full & !(1u64 << i)) as usize;
        add(vec![(size - 1, one()), (without, neg())], Relation::Ge, Rational::zero());
    }
    for v in 0..n {
        let nv = g.neighbors(v).0;
        let closed = nv | 1u64 << v;
        if closed != nv {
            add(vec![(closed as usize, one()), (nv as usize, neg())], Relation::Eq, Rational::zero());
        }
    }
    lp.names =
        Some((0..size).map(|m| set_name("h", VertexSet(m as u64))).collect());
    lp
}

/// Shannon bound with the optimal set function `h` (indexed by bitmask).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShannonBound {
    pub theta: Rational,
    pub h: Vec<Rational>,
    #[serde(skip)]
    pub solution: Option<LpSolution>,
}

/// `s` together with every vertex whose whole in-neighbourhood lies in it,
/// repeated until stable. Every feasible `h` is constant on `s` and its closure.
pub fn functional_closure(g: &Graph, s: VertexSet) -> VertexSet {
    let mut s = s.0;
    loop {
        let grown = (0..g.n())
            .filter(|&v| g.neighbors(v).0 & !s == 0)
            .fold(s, |acc, v| acc | 1 << v);
        if grown == s {
            return VertexSet(s);
        }
        s = grown;
    }
}

/// The Shannon LP restricted to closed sets: `h(S)` is replaced by
/// `h(cl S)`, the closure of the empty set is pinned to zero, and the
/// functional equalities become identities.
#[derive(Debug, Clone)]
pub struct ClosedShannonLp {
    pub lp: LinearProgram,
    /// Closed set of each LP variable.
    pub sets: Vec<VertexSet>,
    /// LP variable of `cl(S)` for each bitmask `S`; `None` for the sets
    /// whose closure is `cl(empty)`.
    pub var_of: Vec<Option<usize>>,
}

impl ClosedShannonLp {
    /// Lifts an LP point to a set function on all `2^n` subsets.
    pub fn lift(&self, x: &[Rational]) -> Vec<Rational> {
        self.var_of
            .iter()
            .map(|v| v.map_or_else(Rational::zero, |j| x[j].clone()))
            .collect()
    }
}

pub fn closed_shannon_lp(g: &Graph) -> ClosedShannonLp {
    let n = g.n();
    let size = 1usize << n;
    let full = (size - 1) as u64;
    let closure: Vec<u64> =
        (0..size).map(|m| functional_closure(g, VertexSet(m as u64)).0).collect();
    let base = closure[0];
    let mut sets = Vec::new();
    let mut var_of = vec![None; size];
    let mut slot = vec![usize::MAX; size];
    for m in 0..size {
        let c = closure[m] as usize;
        if closure[m] == base {
            continue;
        }
        if slot[c] == usize::MAX {
            slot[c] = sets.len();
            sets.push(VertexSet(c as u64));
        }
        var_of[m] = Some(slot[c]);
    }

    let mut lp = LinearProgram::new(sets.len(), Sense::Maximize);
    if let Some(top) = var_of[size - 1] {
        lp.objective[top] = Rational::one();
    }
    let mut seen = std::collections::HashSet::new();
    let mut add = |terms: &[(u64, i64)], rel: Relation, rhs: i64| {
        let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
        for &(m, c) in terms {
            if let Some(j) = var_of[m as usize] {
                *coeffs.entry(j).or_insert(0) += c;
            }
        }
        coeffs.retain(|_, c| *c != 0);
        if coeffs.is_empty() || !seen.insert((coeffs.clone(), rel == Relation::Le)) {
            return;
        }
        let coeffs = coeffs.into_iter().map(|(j, c)| (j, Rational::from_integer(c))).collect();
        lp.add_constraint(coeffs, rel, Rational::from_integer(rhs)).expect("closed-set indices");
    };

    for v in 0..n {
        add(&[(1 << v, 1)], Relation::Le, 1);
    }
    for i in 0..n {
        for j in i + 1..n {
            let pair = (1u64 << i) | (1u64 << j);
            let others = full & !pair;
            let mut s = 0u64;
            loop {
                add(&[(s | 1 << i, 1), (s | 1 << j, 1), (s | pair, -1), (s, -1)], Relation::Ge, 0);
                if s == others {
                    break;
                }
                s = (s.wrapping_sub(others)) & others;
            }
        }
    }
    for i in 0..n {
        add(&[(full, 1), (full & !(1u64 << i), -1)], Relation::Ge, 0);
    }
    lp.names = Some(sets.iter().map(|&s| set_name("h", s)).collect());
    ClosedShannonLp { lp, sets, var_of }
}

/// Solves the closed-set form of the Shannon LP exactly. The LP
/// certificates are checked on the program actually solved, and the lifted
/// `h` is checked against every defining constraint of the full program.
pub fn shannon_entropy(g: &Graph, cap: usize) -> Result<ShannonBound> {
    if g.n() > cap {
        return Err(Error::CapExceeded {
            what: "vertex count for the Shannon bound",
            value: g.n() as u64,
            cap: cap as u64,
        });
    }
    let reduced = closed_shannon_lp(g);
    let (theta, h, solution) = if reduced.sets.is_empty() {
        (Rational::zero(), vec![Rational::zero(); 1 << g.n()], None)
    } else {
        let sol = lp::solve(&reduced.lp)?;
        if sol.status != LpStatus::Optimal || !lp::verify_certificates(&reduced.lp, &sol) {
            return Err(Error::Precondition("Shannon LP failed to certify".into()));
        }
        let theta = sol.objective.clone().expect("optimal");
        (theta, reduced.lift(&sol.primal), Some(sol))
    };
    if !is_shannon_feasible(g, &h) || h[(1 << g.n()) - 1] != theta {
        return Err(Error::Precondition("lifted Shannon solution is infeasible".into()));
    }
    Ok(ShannonBound { theta, h, solution })
}

/// Checks the defining constraint families directly, over all pairs of
/// sets: `h(v) <= 1`, monotonicity, submodularity, and the functional
/// equalities, plus `h(empty) = 0`.
pub fn is_shannon_feasible(g: &Graph, h: &[Rational]) -> bool {
    let n = g.n();
    let size = 1usize << n;
    if h.len() != size || !h[0].is_zero() {
        return false;
    }
    if (0..n).any(|v| h[1 << v] > Rational::one()) {
        return false;
    }
    for t in 0..size {
        // every S subset of T
        let mut s = t;
        loop {
            if h[s] > h[t] {
                return false;
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & t;
        }
    }
    for s in 0..size {
        for t in s + 1..size {
            if &h[s | t] + &h[s & t] > &h[s] + &h[t] {
                return false;
            }
        }
    }
    (0..n).all(|v| {
        let nv = g.neighbors(v).0 as usize;
        h[nv | 1 << v] == h[nv]
    })
}

/// Evidence for the lower end of a bracket.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LowerWitness {
    Matching { edges: Vec<(usize, usize)> },
    CliqueCover { cliques: Vec<Vec<usize>> },
    FractionalCliqueCover { cliques: Vec<Vec<usize>>, weights: Vec<Rational> },
    LoopReduction { loops: Vec<usize>, rest: Box<LowerWitness> },
    UnionAdditivity { components: Vec<(Vec<usize>, LowerWitness)> },
    /// A saturating matching of `G[c(S), S]` extends any code of `G - d(S)`.
    SaturatingExtension { s: Vec<usize>, matching: Vec<(usize, usize)>, rest: Box<LowerWitness> },
}

/// Evidence for the upper end of a bracket.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum UpperWitness {
    Transversal { vertices: Vec<usize> },
    ShannonLp { theta: Rational },
    /// Reducing the acyclic set `reduced` puts loops on `s`.
    IReduction { reduced: Vec<usize>, s: Vec<usize>, rest: Box<UpperWitness> },
    LoopReduction { loops: Vec<usize>, rest: Box<UpperWitness> },
    UnionAdditivity { components: Vec<(Vec<usize>, UpperWitness)> },
}

fn map_vertices(vs: &[usize], map: &[usize]) -> Vec<usize> {
    vs.iter().map(|&v| map[v]).collect()
}

fn map_pairs(es: &[(usize, usize)], map: &[usize]) -> Vec<(usize, usize)> {
    es.iter().map(|&(u, v)| (map[u], map[v])).collect()
}

impl LowerWitness {
    /// Renames vertices through `map` (new label -> old label).
    pub fn relabel(&self, map: &[usize]) -> LowerWitness {
        use LowerWitness::*;
        match self {
            Matching { edges } => Matching { edges: map_pairs(edges, map) },
            CliqueCover { cliques } => {
                CliqueCover { cliques: cliques.iter().map(|c| map_vertices(c, map)).collect() }
            }
            FractionalCliqueCover { cliques, weights } => FractionalCliqueCover {
                cliques: cliques.iter().map(|c| map_vertices(c, map)).collect(),
                weights: weights.clone(),
            },
            LoopReduction { loops, rest } => {
                LoopReduction { loops: map_vertices(loops, map), rest: Box::new(rest.relabel(map)) }
            }
            UnionAdditivity { components } => UnionAdditivity {
                components: components
                    .iter()
                    .map(|(vs, w)| (map_vertices(vs, map), w.relabel(map)))
                    .collect(),
            },
            SaturatingExtension { s, matching, rest } => SaturatingExtension {
                s: map_vertices(s, map),
                matching: map_pairs(matching, map),
                rest: Box::new(rest.relabel(map)),
            },
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            LowerWitness::Matching { .. } => "matching",
            LowerWitness::CliqueCover { .. } => "clique-cover",
            LowerWitness::FractionalCliqueCover { .. } => "fractional-clique-cover",
            LowerWitness::LoopReduction { .. } => "loop-reduction",
            LowerWitness::UnionAdditivity { .. } => "union-additivity",
            LowerWitness::SaturatingExtension { .. } => "saturating-extension",
        }
    }
}

impl UpperWitness {
    pub fn relabel(&self, map: &[usize]) -> UpperWitness {
        use UpperWitness::*;
        match self {
            Transversal { vertices } => Transversal { vertices: map_vertices(vertices, map) },
            ShannonLp { theta } => ShannonLp { theta: theta.clone() },
            IReduction { reduced, s, rest } => IReduction {
                reduced: map_vertices(reduced, map),
                s: map_vertices(s, map),
                rest: Box::new(rest.relabel(map)),
            },
            LoopReduction { loops, rest } => {
                LoopReduction { loops: map_vertices(loops, map), rest: Box::new(rest.relabel(map)) }
            }
            UnionAdditivity { components } => UnionAdditivity {
                components: components
                    .iter()
                    .map(|(vs, w)| (map_vertices(vs, map), w.relabel(map)))
                    .collect(),
            },
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            UpperWitness::Transversal { .. } => "transversal",
            UpperWitness::ShannonLp { .. } => "shannon-lp",
            UpperWitness::IReduction { .. } => "i-reduction",
            UpperWitness::LoopReduction { .. } => "loop-reduction",
            UpperWitness::UnionAdditivity { .. } => "union-additivity",
        }
    }
}

/// Certified interval `[lower, upper]` containing the entropy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntropyBracket {
    pub lower: Rational,
    pub upper: Rational,
    pub exact: bool,
    pub lower_witness: LowerWitness,
    pub upper_witness: UpperWitness,
}

impl EntropyBracket {
    pub fn new(
        lower: Rational,
        upper: Rational,
        lower_witness: LowerWitness,
        upper_witness: UpperWitness,
    ) -> Self {
        debug_assert!(lower <= upper, "bracket [{lower}, {upper}] is inverted");
        let exact = lower == upper;
        EntropyBracket { lower, upper, exact, lower_witness, upper_witness }
    }

    pub fn value(&self) -> Option<&Rational> {
        self.exact.then_some(&self.lower)
    }

    pub fn relabel(&self, map: &[usize]) -> EntropyBracket {
        EntropyBracket {
            lower_witness: self.lower_witness.relabel(map),
            upper_witness: self.upper_witness.relabel(map),
            ..self.clone()
        }
    }

    /// Both endpoints shifted by `k`.
    pub fn shifted(&self, k: usize) -> (Rational, Rational) {
        let k = Rational::from(k);
        (&self.lower + &k, &self.upper + &k)
    }

    /// Intersection of two sound brackets for the same graph.
    pub fn intersect(self, other: EntropyBracket) -> EntropyBracket {
        let (lower, lw) = if other.lower > self.lower {
            (other.lower, other.lower_witness)
        } else {
            (self.lower, self.lower_witness)
        };
        let (upper, uw) = if other.upper < self.upper {
            (other.upper, other.upper_witness)
        } else {
            (self.upper, self.upper_witness)
        };
        EntropyBracket::new(lower, upper, lw, uw)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BracketOptions {
    pub shannon_cap: usize,
    /// Solve the Shannon LP even when the combinatorial bounds already meet.
    pub always_shannon: bool,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions { shannon_cap: DEFAULT_SHANNON_CAP, always_shannon: false }
    }
}

/// Certified entropy bracket: strip loops, split into weakly connected
/// components, bound each component, and recombine additively.
pub fn entropy_bracket(g: &Graph, opts: &BracketOptions) -> Result<EntropyBracket> {
    bracket_with(g, &mut |c| component_bracket(c, opts))
}

/// Loop stripping and component splitting around an arbitrary bracket for
/// loop-free connected graphs.
pub fn bracket_with<F>(g: &Graph, component: &mut F) -> Result<EntropyBracket>
where
    F: FnMut(&Graph) -> Result<EntropyBracket>,
{
    let loops = g.loops();
    if !loops.is_empty() {
        let (rest, map) = g.remove_vertices(loops)?;
        let inner = bracket_with(&rest, component)?.relabel(&map);
        let (lower, upper) = inner.shifted(loops.len());
        return Ok(EntropyBracket::new(
            lower,
            upper,
            LowerWitness::LoopReduction { loops: loops.to_vec(), rest: Box::new(inner.lower_witness) },
            UpperWitness::LoopReduction { loops: loops.to_vec(), rest: Box::new(inner.upper_witness) },
        ));
    }
    if g.n() == 0 {
        return Ok(zero_bracket());
    }
    let comps = g.components();
    if comps.len() <= 1 {
        return component(g);
    }
    let mut lower = Rational::zero();
    let mut upper = Rational::zero();
    let mut lws = Vec::new();
    let mut uws = Vec::new();
    for c in comps {
        let (sub, map) = g.induced_subgraph(c)?;
        let b = component(&sub)?.relabel(&map);
        lower += &b.lower;
        upper += &b.upper;
        lws.push((c.to_vec(), b.lower_witness));
        uws.push((c.to_vec(), b.upper_witness));
    }
    Ok(EntropyBracket::new(
        lower,
        upper,
        LowerWitness::UnionAdditivity { components: lws },
        UpperWitness::UnionAdditivity { components: uws },
    ))
}

/// All parameters of one graph.
#[derive(Debug, Clone)]
pub struct GraphBounds {
    pub matching: Matching,
    pub cc: usize,
    pub cover: CliqueFamily,
    pub fractional: FractionalCover,
    pub tau: usize,
    pub transversal: VertexSet,
    pub shannon: Option<ShannonBound>,
}

impl GraphBounds {
    /// Best lower bound and its witness: ties prefer matching, then the
    /// clique cover, then the fractional cover.
    pub fn lower(&self, n: usize) -> (Rational, LowerWitness) {
        let nu = Rational::from(self.matching.size);
        let by_cc = Rational::from(n - self.cc);
        let by_kf = &Rational::from(n) - &self.fractional.value;
        let mut best = (nu, LowerWitness::Matching { edges: self.matching.edges.clone() });
        if by_cc > best.0 {
            best = (
                by_cc,
                LowerWitness::CliqueCover {
                    cliques: self.cover.cliques.iter().map(|c| c.to_vec()).collect(),
                },
            );
        }
        if by_kf > best.0 {
            let fam = &self.fractional.family;
            best = (
                by_kf,
                LowerWitness::FractionalCliqueCover {
                    cliques: fam.cliques.iter().map(|c| c.to_vec()).collect(),
                    weights: fam.weights.clone().unwrap_or_default(),
                },
            );
        }
        best
    }

    /// Best upper bound: `min(tau, theta)`, ties to the transversal.
    pub fn upper(&self) -> (Rational, UpperWitness) {
        let tau = Rational::from(self.tau);
        match &self.shannon {
            Some(s) if s.theta < tau => {
                (s.theta.clone(), UpperWitness::ShannonLp { theta: s.theta.clone() })
            }
            _ => (tau, UpperWitness::Transversal { vertices: self.transversal.to_vec() }),
        }
    }
}

/// Computes every parameter. The Shannon LP is solved when `with_shannon`
/// holds, or when the combinatorial bounds leave a gap.
pub fn graph_bounds(g: &Graph, with_shannon: bool, shannon_cap: usize) -> Result<GraphBounds> {
    let matching = max_matching(g);
    let (cc, cover) = clique_cover_number(g);
    let fractional = fractional_clique_cover_number(g);
    let (tau, transversal) = transversal_number(g);
    let mut bounds =
        GraphBounds { matching, cc, cover, fractional, tau, transversal, shannon: None };
    let (lower, _) = bounds.lower(g.n());
    if with_shannon || lower < Rational::from(tau) {
        bounds.shannon = Some(shannon_entropy(g, shannon_cap)?);
    }
    Ok(bounds)
}

fn zero_bracket() -> EntropyBracket {
    EntropyBracket::new(
        Rational::zero(),
        Rational::zero(),
        LowerWitness::Matching { edges: Vec::new() },
        UpperWitness::Transversal { vertices: Vec::new() },
    )
}

/// Bracket of a loop-free connected graph from its own parameters.
pub fn component_bracket(g: &Graph, opts: &BracketOptions) -> Result<EntropyBracket> {
    if g.n() <= 1 && !g.has_loops() {
        return Ok(zero_bracket());
    }
    let b = graph_bounds(g, opts.always_shannon, opts.shannon_cap)?;
    let (lower, lw) = b.lower(g.n());
    let (upper, uw) = b.upper();
    Ok(EntropyBracket::new(lower, upper, lw, uw))
}
