//! Brackets for every small graph, memoized by canonical form.
//!
//! Connected classes are bounded directly (optionally through an on-disk
//! cache); every other graph is a multiset of connected classes and its
//! bracket is the sum of theirs. Brackets that stay open are retried
//! through a reducible-set decomposition.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::{bracket_with, component_bracket, BracketOptions, EntropyBracket};
use crate::enumerate::{self, canonical_labelling, compose, compositions, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rational;
use crate::structure::{apply_decomposition, find_reducible_set, DEFAULT_REDUCIBLE_CAP};

pub const CACHE_ENV: &str = "GRAPH_ENTROPY_CACHE";
const CACHE_VERSION: u32 = 1;

/// Content-addressed store of component brackets: one JSON file per
/// canonical graph, named by the hex of its graph6 string.
#[derive(Debug, Clone, Default)]
pub struct BracketCache {
    dir: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    version: u32,
    graph: String,
    shannon_cap: usize,
    bracket: EntropyBracket,
}

impl BracketCache {
    pub fn disabled() -> Self {
        BracketCache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)
            .map_err(|e| Error::Io(format!("cannot create cache directory {}: {e}", dir.display())))?;
        Ok(BracketCache { dir: Some(dir) })
    }

    /// Directory from `GRAPH_ENTROPY_CACHE`, if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => BracketCache::at(PathBuf::from(d)),
            _ => Ok(BracketCache::disabled()),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, form: &CanonicalForm) -> Option<PathBuf> {
        let name: String = form.graph6().bytes().map(|b| format!("{b:02x}")).collect();
        self.dir.as_ref().map(|d| d.join(format!("{}-{name}.json", form.n)))
    }

    /// Unreadable or stale entries count as misses.
    pub fn get(&self, form: &CanonicalForm, opts: &BracketOptions) -> Option<EntropyBracket> {
        let text = fs::read_to_string(self.path(form)?).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.version == CACHE_VERSION
            && entry.graph == form.graph6()
            && entry.shannon_cap == opts.shannon_cap)
            .then_some(entry.bracket)
    }

    /// Writes through a temporary file and a rename, so concurrent writers
    /// of the same (deterministic) entry never leave a torn file.
    pub fn put(&self, form: &CanonicalForm, opts: &BracketOptions, b: &EntropyBracket) -> Result<()> {
        let Some(path) = self.path(form) else { return Ok(()) };
        let entry = CacheEntry {
            version: CACHE_VERSION,
            graph: form.graph6(),
            shannon_cap: opts.shannon_cap,
            bracket: b.clone(),
        };
        let text = serde_json::to_string(&entry).map_err(|e| Error::Io(e.to_string()))?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, text)
            .and_then(|()| fs::rename(&tmp, &path))
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Default)]
pub struct SurveyOptions {
    pub bracket: BracketOptions,
    pub cache: BracketCache,
    /// Worker threads; `None` uses the default pool.
    pub jobs: Option<usize>,
    pub cap: usize,
}

impl SurveyOptions {
    pub fn new() -> Self {
        SurveyOptions { cap: enumerate::DEFAULT_ENUMERATION_CAP, ..Default::default() }
    }
}

/// Brackets of all connected classes up to some size, in canonical labels.
#[derive(Debug, Clone, Default)]
pub struct BracketTable {
    /// Bounds of the graph itself, no decomposition.
    pub direct: HashMap<CanonicalForm, EntropyBracket>,
    /// After retrying open brackets through decompositions.
    pub resolved: HashMap<CanonicalForm, EntropyBracket>,
    pub classes: Vec<Vec<CanonicalForm>>,
}

impl BracketTable {
    pub fn build(n_max: usize, opts: &SurveyOptions) -> Result<BracketTable> {
        let classes = enumerate::connected_classes_up_to(n_max, opts.cap)?;
        let all: Vec<CanonicalForm> = classes.iter().flatten().copied().collect();
        let brackets = run_jobs(opts.jobs, &all, |form| {
            if let Some(b) = opts.cache.get(form, &opts.bracket) {
                return Ok(b);
            }
            let b = component_bracket(&form.graph(), &opts.bracket)?;
            opts.cache.put(form, &opts.bracket, &b)?;
            Ok(b)
        })?;
        let mut table = BracketTable {
            direct: all.iter().copied().zip(brackets).collect(),
            resolved: HashMap::new(),
            classes,
        };
        // Remainders are smaller, so increasing size order has them ready.
        for form in &all {
            let b = table.direct[form].clone();
            let b = if b.exact { b } else { table.decompose(&form.graph(), b)? };
            table.resolved.insert(*form, b);
        }
        Ok(table)
    }

    fn decompose(&self, g: &Graph, b: EntropyBracket) -> Result<EntropyBracket> {
        match find_reducible_set(g, DEFAULT_REDUCIBLE_CAP)? {
            Some(d) => {
                let rest = self.lookup(&d.remainder, true)?;
                Ok(b.intersect(apply_decomposition(g, &d, &rest)?))
            }
            None => Ok(b),
        }
    }

    /// Bracket of any simple graph whose components are in the table.
    pub fn lookup(&self, g: &Graph, resolved: bool) -> Result<EntropyBracket> {
        let map = if resolved { &self.resolved } else { &self.direct };
        bracket_with(g, &mut |c: &Graph| {
            let (form, perm) = canonical_labelling(c)?;
            let b = map.get(&form).ok_or_else(|| {
                Error::Precondition(format!("component {form} is outside the bracket table"))
            })?;
            Ok(b.relabel(&perm))
        })
    }
}

#[cfg(feature = "parallel")]
fn run_jobs<T, F>(jobs: Option<usize>, items: &[CanonicalForm], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&CanonicalForm) -> Result<T> + Sync,
{
    use rayon::prelude::*;
    let work = || items.par_iter().map(&f).collect::<Result<Vec<T>>>();
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Io(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_jobs<T, F>(_jobs: Option<usize>, items: &[CanonicalForm], f: F) -> Result<Vec<T>>
where
    F: Fn(&CanonicalForm) -> Result<T>,
{
    items.iter().map(f).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub graph: CanonicalForm,
    pub n: usize,
    pub connected: bool,
    pub lower: Rational,
    pub upper: Rational,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueWitnesses {
    pub value: Rational,
    /// Fractional part of the value.
    pub fraction: Rational,
    /// Smallest graph (fewest vertices, then canonical order) with this value.
    pub first: CanonicalForm,
    pub connected: Vec<CanonicalForm>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueSurvey {
    pub n_max: usize,
    pub connected_only: bool,
    pub graphs: usize,
    /// Distinct values of collapsed brackets, ascending.
    pub values: Vec<Rational>,
    pub values_up_to_four: Vec<Rational>,
    /// Distinct fractional parts of the collapsed values.
    pub fractions: Vec<Rational>,
    pub witnesses: Vec<ValueWitnesses>,
    pub unresolved: Vec<SurveyRecord>,
    pub records: Vec<SurveyRecord>,
}

pub fn survey_entropy_values(
    n_max: usize,
    connected_only: bool,
    opts: &SurveyOptions,
) -> Result<ValueSurvey> {
    let table = BracketTable::build(n_max, opts)?;
    Ok(survey_from_table(&table, n_max, connected_only))
}

pub fn survey_from_table(table: &BracketTable, n_max: usize, connected_only: bool) -> ValueSurvey {
    let mut records = Vec::new();
    for n in 1..=n_max {
        let mut level = Vec::new();
        for parts in compositions(&table.classes, n) {
            let connected = parts.len() == 1;
            if connected_only && !connected {
                continue;
            }
            let (lower, upper) = parts.iter().fold((Rational::zero(), Rational::zero()), |(l, u), p| {
                let b = &table.resolved[p];
                (l + &b.lower, u + &b.upper)
            });
            let exact = lower == upper;
            level.push(SurveyRecord { graph: compose(&parts), n, connected, lower, upper, exact });
        }
        level.sort_by_key(|r| r.graph);
        records.extend(level);
    }

    let mut by_value: BTreeMap<Rational, ValueWitnesses> = BTreeMap::new();
    for r in records.iter().filter(|r| r.exact) {
        let w = by_value.entry(r.lower.clone()).or_insert_with(|| ValueWitnesses {
            value: r.lower.clone(),
            fraction: r.lower.fract(),
            first: r.graph,
            connected: Vec::new(),
            count: 0,
        });
        w.count += 1;
        if r.connected {
            w.connected.push(r.graph);
        }
    }
    let values: Vec<Rational> = by_value.keys().cloned().collect();
    let four = Rational::from(4usize);
    let mut fractions: Vec<Rational> = values.iter().map(Rational::fract).collect();
    fractions.sort();
    fractions.dedup();
    ValueSurvey {
        n_max,
        connected_only,
        graphs: records.len(),
        values_up_to_four: values.iter().filter(|v| **v <= four).cloned().collect(),
        values,
        fractions,
        witnesses: by_value.into_values().collect(),
        unresolved: records.iter().filter(|r| !r.exact).cloned().collect(),
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::entropy_bracket;
    use rand::{Rng, SeedableRng};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn survey_up_to_five() {
        let s = survey_entropy_values(5, false, &SurveyOptions::new()).unwrap();
        assert_eq!(s.graphs, 1 + 2 + 4 + 11 + 34);
        for v in [r(0, 1), r(1, 1), r(2, 1), r(5, 2), r(3, 1)] {
            assert!(s.values.contains(&v), "{v}");
        }
        let three = r(3, 1);
        let small: Vec<_> = s.values.iter().filter(|v| **v <= three).cloned().collect();
        assert_eq!(small, vec![r(0, 1), r(1, 1), r(2, 1), r(5, 2), r(3, 1)]);
        let half = s.witnesses.iter().find(|w| w.value == r(5, 2)).unwrap();
        assert_eq!(half.connected, vec![enumerate::canonical_form(&Graph::cycle(5)).unwrap()]);
    }

    #[test]
    fn composed_brackets_match_direct() {
        let opts = SurveyOptions::new();
        let table = BracketTable::build(7, &opts).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        while checked < 50 {
            let n = rng.gen_range(2..=7);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.3) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            if g.is_connected() {
                continue;
            }
            let via_table = table.lookup(&g, false).unwrap();
            let direct = entropy_bracket(&g, &opts.bracket).unwrap();
            assert_eq!((via_table.lower, via_table.upper), (direct.lower, direct.upper), "{g:?}");
            checked += 1;
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let opts = SurveyOptions { cache: BracketCache::at(dir.path()).unwrap(), ..SurveyOptions::new() };
        let first = survey_entropy_values(4, false, &opts).unwrap();
        let files = fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(files, 1 + 1 + 2 + 6);
        let second = survey_entropy_values(4, false, &opts).unwrap();
        assert_eq!(first, second);

        let c5 = enumerate::canonical_form(&Graph::cycle(5)).unwrap();
        assert_eq!(opts.cache.get(&c5, &opts.bracket), None);
        let b = entropy_bracket(&Graph::cycle(5), &opts.bracket).unwrap();
        opts.cache.put(&c5, &opts.bracket, &b).unwrap();
        assert_eq!(opts.cache.get(&c5, &opts.bracket), Some(b));
        let other = BracketOptions { shannon_cap: 9, ..opts.bracket };
        assert_eq!(opts.cache.get(&c5, &other), None);
    }
}
