//! Canonical labelling and isomorph-free generation of small simple graphs.
//!
//! The canonical form is the least upper-triangle bit string (graph6 order,
//! first pair most significant) over the labellings that respect an
//! equitable ordered partition of the vertices. The partition is computed
//! from degrees and refined by neighbour counts per cell, so it is itself
//! invariant; the search builds the labelling column by column and prunes
//! any prefix already larger than the best string found.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::render_graph6;
use crate::graph::Graph;

pub const DEFAULT_ENUMERATION_CAP: usize = 7;
pub const MAX_CANONICAL_VERTICES: usize = 16;

/// Canonical adjacency string of a simple graph. Equal forms iff isomorphic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub bits: u128,
}

impl CanonicalForm {
    pub fn graph(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        let total = pair_count(self.n);
        let mut k = 0;
        for j in 1..self.n {
            for i in 0..j {
                if self.bits >> (total - 1 - k) & 1 == 1 {
                    g.add_edge(i, j).expect("in range");
                }
                k += 1;
            }
        }
        g
    }

    pub fn graph6(&self) -> String {
        render_graph6(&self.graph()).expect("canonical graphs are simple")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.graph6())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.graph6())
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let g = crate::format::parse_graph6(&text).map_err(serde::de::Error::custom)?;
        canonical_form(&g).map_err(serde::de::Error::custom)
    }
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Ordered equitable partition as a cell index per vertex (cells numbered
/// in canonical order).
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut cell = vec![0usize; n];
    let mut cells = usize::from(n > 0);
    loop {
        let signature = |v: usize| {
            let mut counts = vec![0usize; cells];
            for u in g.mutual_neighbors(v).iter() {
                counts[cell[u]] += 1;
            }
            (cell[v], counts)
        };
        let sigs: Vec<_> = (0..n).map(signature).collect();
        let distinct: BTreeSet<_> = sigs.iter().cloned().collect();
        let ranked: Vec<_> = distinct.into_iter().collect();
        let next: Vec<usize> =
            sigs.iter().map(|s| ranked.binary_search(s).expect("present")).collect();
        if ranked.len() == cells {
            return next;
        }
        cells = ranked.len();
        cell = next;
    }
}

/// Canonical form and a labelling `perm` (canonical position -> vertex).
pub fn canonical_labelling(g: &Graph) -> Result<(CanonicalForm, Vec<usize>)> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    if g.has_loops() {
        return Err(Error::LoopedInput);
    }
    let n = g.n();
    if n > MAX_CANONICAL_VERTICES {
        return Err(Error::CapExceeded {
            what: "vertex count for canonical labelling",
            value: n as u64,
            cap: MAX_CANONICAL_VERTICES as u64,
        });
    }
    let cell = refine(g);
    let mut slots = cell.clone();
    slots.sort_unstable();
    let mut search = Search {
        g,
        cell: &cell,
        slots: &slots,
        total: pair_count(n),
        best: None,
        perm: Vec::with_capacity(n),
    };
    search.run(0, 0);
    let (bits, perm) = search.best.expect("at least one labelling");
    Ok((CanonicalForm { n, bits }, perm))
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    canonical_labelling(g).map(|(c, _)| c)
}

struct Search<'a> {
    g: &'a Graph,
    cell: &'a [usize],
    /// Cell required at each canonical position.
    slots: &'a [usize],
    total: usize,
    best: Option<(u128, Vec<usize>)>,
    perm: Vec<usize>,
}

impl Search<'_> {
    /// `bits` holds the columns fixed so far, left-aligned to the full width.
    fn run(&mut self, pos: usize, bits: u128) {
        let n = self.slots.len();
        if pos == n {
            if self.best.as_ref().is_none_or(|(b, _)| bits < *b) {
                self.best = Some((bits, self.perm.clone()));
            }
            return;
        }
        let filled = pair_count(pos + 1);
        for v in 0..n {
            if self.cell[v] != self.slots[pos] || self.perm.contains(&v) {
                continue;
            }
            let mut next = bits;
            let start = pair_count(pos);
            for (i, &u) in self.perm.iter().enumerate() {
                if self.g.has_edge(u, v) {
                    next |= 1u128 << (self.total - 1 - (start + i));
                }
            }
            if let Some((b, _)) = &self.best {
                let mask = prefix_mask(self.total, filled);
                if next & mask > b & mask {
                    continue;
                }
            }
            self.perm.push(v);
            self.run(pos + 1, next);
            self.perm.pop();
        }
    }
}

fn prefix_mask(total: usize, filled: usize) -> u128 {
    if filled == 0 {
        0
    } else {
        let ones = if filled >= 128 { u128::MAX } else { (1u128 << filled) - 1 };
        ones << (total - filled)
    }
}

/// The canonical representative graph of `g`.
pub fn canonical_graph(g: &Graph) -> Result<Graph> {
    Ok(canonical_form(g)?.graph())
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { what: "vertex count for enumeration", value: n as u64, cap: cap as u64 });
    }
    Ok(())
}

/// Connected classes on exactly `n` vertices, in canonical order. Each
/// connected graph on `n` vertices has a vertex whose removal leaves it
/// connected, so extending every connected class on `n - 1` vertices by a
/// vertex with nonempty neighbourhood reaches every class.
pub fn connected_classes(n: usize, cap: usize) -> Result<Vec<CanonicalForm>> {
    check_cap(n, cap)?;
    Ok(connected_table(n).pop().unwrap_or_default())
}

/// `table[k]` = connected classes on `k` vertices, for `k` in `0..=n`
/// (`table[0]` is empty: the null graph is not counted as connected).
fn connected_table(n: usize) -> Vec<Vec<CanonicalForm>> {
    let mut table: Vec<Vec<CanonicalForm>> = vec![Vec::new()];
    if n == 0 {
        return table;
    }
    table.push(vec![canonical_form(&Graph::empty(1)).expect("tiny")]);
    for k in 2..=n {
        let mut found = BTreeSet::new();
        for base in &table[k - 1] {
            let b = base.graph();
            for nbrs in 1u64..1 << (k - 1) {
                let mut g = b.disjoint_union(&Graph::empty(1)).expect("small");
                for u in 0..k - 1 {
                    if nbrs >> u & 1 == 1 {
                        g.add_edge(u, k - 1).expect("in range");
                    }
                }
                found.insert(canonical_form(&g).expect("small simple graph"));
            }
        }
        table.push(found.into_iter().collect());
    }
    table
}

/// All classes on exactly `n` vertices (one representative each, in
/// canonical order), or only the connected ones.
pub fn enumerate_graphs(n: usize, connected_only: bool, cap: usize) -> Result<Vec<Graph>> {
    Ok(enumerate_forms(n, connected_only, cap)?.iter().map(CanonicalForm::graph).collect())
}

pub fn enumerate_forms(n: usize, connected_only: bool, cap: usize) -> Result<Vec<CanonicalForm>> {
    check_cap(n, cap)?;
    let table = connected_table(n);
    if connected_only {
        return Ok(table[n].clone());
    }
    let mut found = BTreeSet::new();
    for parts in compositions(&table, n) {
        found.insert(compose(&parts));
    }
    Ok(found.into_iter().collect())
}

/// Multisets of connected classes with sizes summing to `n`, each listed in
/// non-increasing `(size, form)` order.
pub fn compositions(table: &[Vec<CanonicalForm>], n: usize) -> Vec<Vec<CanonicalForm>> {
    fn go(
        table: &[Vec<CanonicalForm>],
        left: usize,
        max: (usize, usize),
        cur: &mut Vec<CanonicalForm>,
        out: &mut Vec<Vec<CanonicalForm>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for size in (1..=left.min(max.0)).rev() {
            let classes = &table[size];
            let limit = if size == max.0 { max.1 + 1 } else { classes.len() };
            for idx in (0..limit.min(classes.len())).rev() {
                cur.push(classes[idx]);
                go(table, left - size, (size, idx), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    go(table, n, (n, usize::MAX - 1), &mut Vec::new(), &mut out);
    out
}

/// Canonical form of the disjoint union of the parts.
pub fn compose(parts: &[CanonicalForm]) -> CanonicalForm {
    let g = parts
        .iter()
        .fold(Graph::empty(0), |acc, p| acc.disjoint_union(&p.graph()).expect("small"));
    canonical_form(&g).expect("small simple graph")
}

/// Connected classes for every size `0..=n`.
pub fn connected_classes_up_to(n: usize, cap: usize) -> Result<Vec<Vec<CanonicalForm>>> {
    check_cap(n, cap)?;
    Ok(connected_table(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::g_family;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    /// Least edge mask over all n! relabellings.
    fn brute_canonical(g: &Graph, perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
        perms
            .iter()
            .map(|p| {
                let mut e: Vec<_> = g
                    .edges()
                    .into_iter()
                    .map(|(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                    .collect();
                e.sort_unstable();
                e
            })
            .min()
            .expect("nonempty")
    }

    fn labelled_graph(n: usize, mask: u64) -> Graph {
        let mut g = Graph::empty(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if mask >> k & 1 == 1 {
                    g.add_edge(i, j).unwrap();
                }
                k += 1;
            }
        }
        g
    }

    fn brute_class_count(n: usize) -> (usize, usize) {
        let perms = permutations(n);
        let mut all = BTreeSet::new();
        let mut connected = BTreeSet::new();
        for mask in 0..1u64 << pair_count(n) {
            let g = labelled_graph(n, mask);
            let key = brute_canonical(&g, &perms);
            if g.is_connected() {
                connected.insert(key.clone());
            }
            all.insert(key);
        }
        (all.len(), connected.len())
    }

    /// Burnside: average over S_n of 2^(cycles induced on vertex pairs).
    fn burnside_count(n: usize) -> u128 {
        let perms = permutations(n);
        let mut sum: u128 = 0;
        for p in &perms {
            let mut seen = BTreeSet::new();
            let mut cycles = 0;
            for j in 1..n {
                for i in 0..j {
                    if seen.contains(&(i, j)) {
                        continue;
                    }
                    cycles += 1;
                    let (mut a, mut b) = (i, j);
                    loop {
                        seen.insert((a.min(b), a.max(b)));
                        (a, b) = (p[a], p[b]);
                        if (a.min(b), a.max(b)) == (i, j) {
                            break;
                        }
                    }
                }
            }
            sum += 1u128 << cycles;
        }
        sum / perms.len() as u128
    }

    /// Connected counts from totals by the inverse Euler transform.
    fn connected_from_totals(totals: &[u128]) -> Vec<i128> {
        let m = totals.len() - 1;
        let a: Vec<i128> = totals.iter().map(|&t| t as i128).collect();
        // b_n = (1/n) (n a_n - sum_{k<n} b'_k a_{n-k}), with b'_k = sum_{d|k} d c_d
        let mut c = vec![0i128; m + 1];
        let mut bp = vec![0i128; m + 1];
        for n in 1..=m {
            let mut s = n as i128 * a[n];
            for k in 1..n {
                s -= bp[k] * a[n - k];
            }
            bp[n] = s;
            let divisors: i128 = (1..n).filter(|d| n % d == 0).map(|d| d as i128 * c[d]).sum();
            c[n] = (bp[n] - divisors) / n as i128;
        }
        c
    }

    #[test]
    fn class_counts_match_brute_force() {
        for n in 1..=5 {
            let (all, conn) = brute_class_count(n);
            assert_eq!(enumerate_forms(n, false, 7).unwrap().len(), all, "n={n}");
            assert_eq!(enumerate_forms(n, true, 7).unwrap().len(), conn, "n={n}");
        }
    }

    #[test]
    fn class_counts_match_orbit_arithmetic() {
        let totals: Vec<u128> = (0..=7).map(burnside_count).collect();
        assert_eq!(totals, vec![1, 1, 2, 4, 11, 34, 156, 1044]);
        let connected = connected_from_totals(&totals);
        assert_eq!(&connected[1..], &[1, 1, 2, 6, 21, 112, 853]);
        for n in 1..=7 {
            assert_eq!(enumerate_forms(n, false, 7).unwrap().len() as u128, totals[n], "n={n}");
            assert_eq!(enumerate_forms(n, true, 7).unwrap().len() as i128, connected[n], "n={n}");
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_graphs(1, false, 7).unwrap(), vec![Graph::empty(1)]);
        assert_eq!(enumerate_graphs(4, false, 7).unwrap().len(), 11);
        assert_eq!(enumerate_graphs(4, true, 7).unwrap().len(), 6);
        assert!(matches!(enumerate_graphs(8, false, 7), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn canonical_form_detects_isomorphism() {
        let perms: Vec<Vec<Vec<usize>>> = (0..=6).map(permutations).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..400 {
            let n = rng.gen_range(1..=6);
            let a = labelled_graph(n, rng.gen::<u64>() & ((1 << pair_count(n)) - 1));
            let b = if rng.gen_bool(0.5) {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(&mut rng);
                a.permuted(&p)
            } else {
                labelled_graph(n, rng.gen::<u64>() & ((1 << pair_count(n)) - 1))
            };
            let iso = brute_canonical(&a, &perms[n]) == brute_canonical(&b, &perms[n]);
            assert_eq!(canonical_form(&a).unwrap() == canonical_form(&b).unwrap(), iso);
        }
    }

    #[test]
    fn canonical_form_is_relabelling_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for n in 1..=7 {
            for _ in 0..100 {
                let g = labelled_graph(n, rng.gen::<u64>() & ((1 << pair_count(n)) - 1));
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(&mut rng);
                let (form, perm) = canonical_labelling(&g).unwrap();
                assert_eq!(form, canonical_form(&g.permuted(&p)).unwrap());
                // perm is a genuine isomorphism onto the canonical graph
                let mut inverse = vec![0; n];
                for (pos, &v) in perm.iter().enumerate() {
                    inverse[v] = pos;
                }
                assert_eq!(g.permuted(&inverse), form.graph());
            }
        }
    }

    #[test]
    fn canonical_round_trip() {
        let g1 = canonical_form(&g_family(1)).unwrap();
        assert_eq!(canonical_form(&g1.graph()).unwrap(), g1);
        let json = serde_json::to_string(&g1).unwrap();
        assert_eq!(serde_json::from_str::<CanonicalForm>(&json).unwrap(), g1);
        assert_ne!(g1, canonical_form(&g_family(2)).unwrap());
        assert!(canonical_form(&Graph::empty_directed(2)).is_err());
    }

    #[test]
    fn compositions_cover_each_multiset_once() {
        let table = connected_classes_up_to(5, 7).unwrap();
        let comps = compositions(&table, 5);
        assert_eq!(comps.len(), 34);
        let forms: BTreeSet<_> = comps.iter().map(|c| compose(c)).collect();
        assert_eq!(forms.len(), 34);
    }
}
