//! Exact guessing numbers of small graphs.
//!
//! A set of words over `[q]` is the fixed-point set of some `f` whose
//! interaction graph lies inside `D` iff every pair `x != y` is compatible:
//! whenever `x` and `y` agree on `N(v)` they agree at `v`. Equivalently the
//! difference set `Δ = {v : x_v != y_v}` has every member with an
//! in-neighbour inside `Δ`. The guessing number is the log of the largest
//! pairwise-compatible set, i.e. a maximum clique.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::structure::Decomposition;

pub const DEFAULT_WORD_CAP: u64 = 4096;

/// A dense bitset over word indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Bits {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn full(len: usize) -> Bits {
        let mut b = Bits::empty(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Pairwise compatibility between all `q^n` words. Word `i` spells its
/// digits base `q` with vertex 0 most significant, so index order is
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct CompatibilityGraph {
    pub q: u32,
    pub n: usize,
    adj: Vec<Bits>,
}

impl CompatibilityGraph {
    pub fn num_words(&self) -> usize {
        self.adj.len()
    }

    pub fn are_compatible(&self, x: usize, y: usize) -> bool {
        self.adj[x].0[y / 64] >> (y % 64) & 1 == 1
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adj[x].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Bits::count).sum::<usize>() / 2
    }

    pub fn word(&self, index: usize) -> Vec<u8> {
        word_digits(index, self.n, self.q)
    }
}

fn word_digits(mut index: usize, n: usize, q: u32) -> Vec<u8> {
    let mut digits = vec![0u8; n];
    for d in digits.iter_mut().rev() {
        *d = (index % q as usize) as u8;
        index /= q as usize;
    }
    digits
}

fn word_index(word: &[u8], q: u32) -> usize {
    word.iter().fold(0, |acc, &d| acc * q as usize + d as usize)
}

/// Difference sets `Δ` for which a pair differing exactly on `Δ` is
/// compatible: every `v` in `Δ` has an in-neighbour in `Δ`.
fn compatible_differences(g: &Graph) -> Vec<bool> {
    let n = g.n();
    (0..1u64 << n)
        .map(|d| {
            let d = VertexSet(d);
            d.iter().all(|v| !g.neighbors(v).is_disjoint(d))
        })
        .collect()
}

fn word_count(n: usize, q: u32, cap: u64) -> Result<u64> {
    if q < 2 {
        return Err(Error::Precondition(format!("alphabet size must be at least 2, got {q}")));
    }
    let count = (q as u64).checked_pow(n as u32).filter(|&c| c <= cap);
    count.ok_or(Error::CapExceeded {
        what: "word count q^n",
        value: (q as f64).powi(n as i32).min(u64::MAX as f64) as u64,
        cap,
    })
}

pub fn compatibility_graph(g: &Graph, q: u32, cap: u64) -> Result<CompatibilityGraph> {
    let n = g.n();
    let words = word_count(n, q, cap)? as usize;
    let ok = compatible_differences(g);
    let digits: Vec<Vec<u8>> = (0..words).map(|i| word_digits(i, n, q)).collect();
    let mut adj = vec![Bits::empty(words); words];
    for x in 0..words {
        for y in x + 1..words {
            let diff = (0..n).filter(|&v| digits[x][v] != digits[y][v]).fold(0u64, |m, v| m | 1 << v);
            if ok[diff as usize] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
    }
    Ok(CompatibilityGraph { q, n, adj })
}

/// A set of words together with the graph it is claimed to be a
/// fixed-point code for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessingCode {
    pub q: u32,
    #[serde(skip)]
    pub host: Option<Graph>,
    pub words: Vec<Vec<u8>>,
}

impl GuessingCode {
    pub fn new(q: u32, host: &Graph, words: Vec<Vec<u8>>) -> GuessingCode {
        GuessingCode { q, host: Some(host.clone()), words }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Words as digit strings, e.g. `"01101"` (digits above 9 in base 36).
    pub fn word_strings(&self) -> Vec<String> {
        self.words
            .iter()
            .map(|w| w.iter().map(|&d| char::from_digit(d as u32, 36).unwrap_or('?')).collect())
            .collect()
    }
}

/// Checks pairwise compatibility directly from the definition.
pub fn validate_code(code: &GuessingCode) -> Result<bool> {
    let host = code
        .host
        .as_ref()
        .ok_or_else(|| Error::Precondition("code has no host graph".into()))?;
    let n = host.n();
    for w in &code.words {
        if w.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "word of length {} on a {n}-vertex graph",
                w.len()
            )));
        }
        if let Some(&d) = w.iter().find(|&&d| d as u32 >= code.q) {
            return Err(Error::Precondition(format!("symbol {d} outside alphabet of size {}", code.q)));
        }
    }
    let nbrs: Vec<VertexSet> = (0..n).map(|v| host.neighbors(v)).collect();
    for (i, x) in code.words.iter().enumerate() {
        for y in &code.words[i + 1..] {
            if x == y {
                return Ok(false);
            }
            for v in 0..n {
                let agree = nbrs[v].iter().all(|u| x[u] == y[u]);
                if agree && x[v] != y[v] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuessingValue {
    pub q: u32,
    pub code_size: u64,
    /// `log_q(code_size)`, for display.
    pub guessing_number: String,
    pub approx: f64,
    pub optimal: bool,
}

impl GuessingValue {
    fn new(q: u32, code_size: u64) -> GuessingValue {
        GuessingValue {
            q,
            code_size,
            guessing_number: format!("log_{q}({code_size})"),
            approx: (code_size as f64).ln() / (q as f64).ln(),
            optimal: true,
        }
    }
}

/// Exact `gamma(g, q)` with an optimal code.
pub fn max_guessing(g: &Graph, q: u32, cap: u64) -> Result<(GuessingValue, GuessingCode)> {
    let cg = compatibility_graph(g, q, cap)?;
    let clique = max_clique(&cg);
    let words = clique.iter().map(|&i| cg.word(i)).collect();
    let code = GuessingCode::new(q, g, words);
    if !validate_code(&code)? {
        return Err(Error::Precondition("maximum clique failed code validation".into()));
    }
    Ok((GuessingValue::new(q, code.len() as u64), code))
}

/// Maximum clique by branch-and-bound with greedy colouring bounds. The
/// result is sorted; among equal sizes the first found in index order wins.
fn max_clique(cg: &CompatibilityGraph) -> Vec<usize> {
    let words = cg.num_words();
    let mut best = greedy_clique(cg);
    let mut current = Vec::new();
    expand(cg, &mut current, Bits::full(words), &mut best);
    best.sort_unstable();
    best
}

fn greedy_clique(cg: &CompatibilityGraph) -> Vec<usize> {
    let mut clique = Vec::new();
    let mut cand = Bits::full(cg.num_words());
    while let Some(v) = cand.first() {
        clique.push(v);
        cand = cand.and(&cg.adj[v]);
    }
    clique
}

/// Vertices of `p` paired with colour numbers, non-decreasing in colour.
fn colour_order(cg: &CompatibilityGraph, p: &Bits) -> Vec<(usize, usize)> {
    let mut order = Vec::new();
    let mut uncoloured = p.clone();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut avail = uncoloured.clone();
        while let Some(v) = avail.first() {
            avail.remove(v);
            avail.and_not_assign(&cg.adj[v]);
            uncoloured.remove(v);
            order.push((v, colour));
        }
    }
    order
}

fn expand(cg: &CompatibilityGraph, current: &mut Vec<usize>, mut p: Bits, best: &mut Vec<usize>) {
    let order = colour_order(cg, &p);
    for &(v, colour) in order.iter().rev() {
        if current.len() + colour <= best.len() {
            return;
        }
        current.push(v);
        let next = p.and(&cg.adj[v]);
        if next.is_empty() {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(cg, current, next, best);
        }
        current.pop();
        p.remove(v);
    }
}

/// Lifts a code for `g - d(S)` to `g`: each matched pair `(c_i, s_i)`
/// repeats a free symbol, unmatched members of `c(S)` read 0. The code
/// grows by a factor `q^|S|`.
pub fn extend_code(base: &GuessingCode, g: &Graph, d: &Decomposition) -> Result<GuessingCode> {
    d.validate(g)?;
    let remainder_host = base
        .host
        .as_ref()
        .ok_or_else(|| Error::Precondition("base code has no host graph".into()))?;
    if remainder_host != &d.remainder {
        return Err(Error::Precondition("base code is not for g - d(S)".into()));
    }
    if !validate_code(base)? {
        return Err(Error::Precondition("base code is not a valid code".into()));
    }
    let q = base.q;
    let k = d.matching.len();
    let choices = (q as usize).pow(k as u32);
    let mut words = Vec::with_capacity(base.len() * choices);
    for w in &base.words {
        for a in 0..choices {
            let symbols = word_digits(a, k, q);
            let mut x = vec![0u8; g.n()];
            for (i, &old) in d.remainder_map.iter().enumerate() {
                x[old] = w[i];
            }
            for (&(c, s), &sym) in d.matching.iter().zip(&symbols) {
                x[c] = sym;
                x[s] = sym;
            }
            words.push(x);
        }
    }
    words.sort_by_key(|w| word_index(w, q));
    let code = GuessingCode::new(q, g, words);
    if !validate_code(&code)? {
        return Err(Error::Precondition("extended code failed validation".into()));
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::find_reducible_set;
    use proptest::prelude::*;

    fn words(ws: &[&str]) -> Vec<Vec<u8>> {
        ws.iter().map(|w| w.bytes().map(|b| b - b'0').collect()).collect()
    }

    fn gamma(g: &Graph, q: u32) -> u64 {
        max_guessing(g, q, DEFAULT_WORD_CAP).unwrap().0.code_size
    }

    /// Largest fixed-point set over every function in F(g, 2), for n <= 3.
    fn brute_functions(g: &Graph) -> usize {
        let n = g.n();
        let nbrs: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
        // f_v is a truth table over the 2^|N(v)| patterns of its inputs
        let tables: Vec<u64> = nbrs.iter().map(|nv| 1u64 << (1 << nv.len())).collect();
        let total: u64 = tables.iter().product();
        let mut best = 0;
        for mut code in 0..total {
            let f: Vec<u64> = tables
                .iter()
                .map(|&t| {
                    let r = code % t;
                    code /= t;
                    r
                })
                .collect();
            let fixed = (0..1usize << n)
                .filter(|&x| {
                    (0..n).all(|v| {
                        let pattern =
                            nbrs[v].iter().enumerate().fold(0, |p, (k, &u)| p | (x >> u & 1) << k);
                        (f[v] >> pattern & 1) as usize == x >> v & 1
                    })
                })
                .count();
            best = best.max(fixed);
        }
        best
    }

    /// Exhaustive largest pairwise-compatible set, no pruning.
    fn brute_clique(g: &Graph, q: u32) -> usize {
        let n = g.n();
        let all: Vec<Vec<u8>> = (0..(q as usize).pow(n as u32)).map(|i| word_digits(i, n, q)).collect();
        let compatible = |x: &[u8], y: &[u8]| {
            (0..n).all(|v| !g.neighbors(v).iter().all(|u| x[u] == y[u]) || x[v] == y[v])
        };
        fn grow(all: &[Vec<u8>], from: usize, chosen: &mut Vec<usize>, ok: &dyn Fn(&[u8], &[u8]) -> bool) -> usize {
            let mut best = chosen.len();
            for i in from..all.len() {
                if chosen.iter().all(|&j| ok(&all[i], &all[j])) {
                    chosen.push(i);
                    best = best.max(grow(all, i + 1, chosen, ok));
                    chosen.pop();
                }
            }
            best
        }
        grow(&all, 0, &mut Vec::new(), &compatible)
    }

    #[test]
    fn compatibility_examples() {
        let k1 = compatibility_graph(&Graph::empty(1), 2, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(k1.num_words(), 2);
        assert_eq!(k1.edge_count(), 0);
        let k2 = compatibility_graph(&Graph::complete(2), 2, DEFAULT_WORD_CAP).unwrap();
        assert!(k2.are_compatible(0b00, 0b11));
        assert!(!k2.are_compatible(0b00, 0b01));
        let looped = Graph::directed(1, &[(0, 0)]).unwrap();
        assert!(compatibility_graph(&looped, 2, DEFAULT_WORD_CAP).unwrap().are_compatible(0, 1));
        assert!(matches!(
            compatibility_graph(&Graph::empty(13), 2, DEFAULT_WORD_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn guessing_examples() {
        assert_eq!(gamma(&Graph::complete(3), 2), 4);
        // e.g. {00000, 11000, 00110, 11011, 10111}
        assert_eq!(brute_clique(&Graph::cycle(5), 2), 5);
        assert_eq!(gamma(&Graph::cycle(5), 2), 5);
        let c5 = Graph::cycle(5);
        let pentagon_code = GuessingCode::new(2, &c5, words(&["00000", "11000", "00110", "11011", "10111"]));
        assert!(validate_code(&pentagon_code).unwrap());
        let looped_k2 = Graph::directed(2, &[(0, 0), (1, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(gamma(&looped_k2, 2), 4);
        let (value, code) = max_guessing(&Graph::complete(3), 2, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(value.guessing_number, "log_2(4)");
        assert!(validate_code(&code).unwrap());
        assert_eq!(gamma(&Graph::cycle(3), 3), 9);
    }

    #[test]
    fn complete_graphs() {
        for n in 2..=5 {
            assert_eq!(gamma(&Graph::complete(n), 2), 1 << (n - 1), "K{n}");
        }
    }

    #[test]
    fn pairwise_condition_matches_function_enumeration() {
        let graphs = [
            Graph::empty(2),
            Graph::complete(2),
            Graph::complete(3),
            Graph::path(3),
            Graph::directed(3, &[(0, 1), (1, 2), (2, 0)]).unwrap(),
            Graph::directed(3, &[(0, 1), (1, 2)]).unwrap(),
            Graph::directed(2, &[(0, 0), (0, 1)]).unwrap(),
        ];
        for g in &graphs {
            assert_eq!(gamma(g, 2) as usize, brute_functions(g), "{g:?}");
            assert_eq!(brute_clique(g, 2), brute_functions(g), "{g:?}");
        }
    }

    #[test]
    fn validate_examples() {
        let c5 = Graph::cycle(5);
        assert!(validate_code(&GuessingCode::new(2, &c5, words(&["00000", "11111"]))).unwrap());
        let k2 = Graph::complete(2);
        assert!(!validate_code(&GuessingCode::new(2, &k2, words(&["00", "01"]))).unwrap());
        assert!(validate_code(&GuessingCode::new(2, &k2, words(&["0"]))).is_err());
        assert!(validate_code(&GuessingCode::new(2, &k2, words(&["02"]))).is_err());
    }

    #[test]
    fn extend_pendant_pair() {
        let k2 = Graph::complete(2);
        let d = find_reducible_set(&k2, 16).unwrap().unwrap();
        let base = GuessingCode::new(2, &d.remainder, vec![vec![]]);
        let code = extend_code(&base, &k2, &d).unwrap();
        assert_eq!(code.word_strings(), vec!["00", "11"]);
    }

    #[test]
    fn extend_cycle_plus_edge() {
        let g = Graph::cycle(5).disjoint_union(&Graph::complete(2)).unwrap();
        let d = find_reducible_set(&g, 16).unwrap().unwrap();
        let (_, base) = max_guessing(&d.remainder, 2, DEFAULT_WORD_CAP).unwrap();
        let code = extend_code(&base, &g, &d).unwrap();
        assert_eq!(code.len(), base.len() * 2);
        assert_eq!(code.len(), 10);
        assert_eq!(code.len(), brute_clique(&Graph::cycle(5), 2) * 2);
    }

    fn arb_digraph(max_n: usize, loops: bool) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(move |n| {
            proptest::collection::vec(any::<u64>(), n).prop_map(move |masks| {
                let mut g = Graph::empty_directed(n);
                for (u, m) in masks.iter().enumerate() {
                    for v in 0..n {
                        if m >> v & 1 == 1 && (loops || u != v) && m >> (v + 32) & 1 == 1 {
                            g.add_arc(u, v).unwrap();
                        }
                    }
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn bounded_by_transversal(g in arb_digraph(5, true)) {
            let (tau, _) = crate::bounds::transversal_number(&g);
            prop_assert!(gamma(&g, 2) <= 1 << tau);
        }

        #[test]
        fn loop_reduction_is_exact(g in arb_digraph(4, true)) {
            let loops = g.loops();
            let (rest, _) = g.remove_vertices(loops).unwrap();
            prop_assert_eq!(gamma(&g, 2), gamma(&rest, 2) << loops.len());
        }

        #[test]
        fn monotone_under_subgraphs(g in arb_digraph(5, true), drop in any::<u64>()) {
            let arcs: Vec<_> = g.arcs().into_iter().enumerate()
                .filter(|(k, _)| drop >> (k % 64) & 1 == 0)
                .map(|(_, a)| a)
                .collect();
            let sub = Graph::directed(g.n(), &arcs).unwrap();
            prop_assert!(sub.is_subgraph_of(&g));
            prop_assert!(gamma(&sub, 2) <= gamma(&g, 2));
        }

        #[test]
        fn i_reduction_never_decreases(g in arb_digraph(5, false), pick in any::<u64>()) {
            // keep a random subset of I as long as it stays acyclic
            let mut i = VertexSet::EMPTY;
            for v in 0..g.n() {
                let mut next = i;
                next.insert(v);
                if pick >> v & 1 == 1 && g.is_acyclic_within(next) {
                    i = next;
                }
            }
            let reduced = g.i_reduction(i).unwrap();
            prop_assert!(gamma(&g, 2) <= gamma(&reduced, 2));
        }

        #[test]
        fn optimal_codes_validate(g in arb_digraph(4, true)) {
            let (value, code) = max_guessing(&g, 2, DEFAULT_WORD_CAP).unwrap();
            prop_assert!(validate_code(&code).unwrap());
            prop_assert_eq!(value.code_size as usize, brute_clique(&g, 2));
        }
    }
}
