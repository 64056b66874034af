//! Exhaustive generation of templates and of bounded long-edge graphs.
//!
//! Both searches enumerate multisets of long-edge types whose cogenera sum to
//! the target. Every edge type costs `(b − a) r − 1 ≥ 1`, so the search is
//! finite once the endpoints are confined to a window.
//!
//! For templates the window is `[0, δ + 1]`: the edge `{a, b}` of weight `r`
//! straddles `b − a − 1` vertices and costs `(b − a) r − 1 ≥ b − a − 1`, and
//! all `l − 1` interior vertices must be straddled, so `δ ≥ l − 1`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{EdgeRecord, EdgeType, Mode, TauGraph, Template};

/// Version of the on-disk template cache format.
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Long-edge types with endpoints in `[0, max_vertex]` and cogenus in
/// `1..=max_cost`, in canonical order.
fn edge_types(max_vertex: u32, max_cost: u64) -> Vec<EdgeType> {
    let mut out = Vec::new();
    for a in 0..max_vertex {
        for b in a + 1..=max_vertex {
            let len = (b - a) as u64;
            let mut r = 1u32;
            while len * r as u64 <= max_cost + 1 {
                let t = EdgeType::interval(a, b, r).unwrap();
                if t.is_long_edge() {
                    out.push(t);
                }
                r += 1;
            }
        }
    }
    out.sort();
    out
}

/// Calls `visit` on every multiset (as `(type index, count)` pairs) of
/// `types[start..]` with total cogenus exactly `remaining`.
fn multisets(
    types: &[EdgeType],
    start: usize,
    remaining: u64,
    current: &mut Vec<(usize, u64)>,
    visit: &mut dyn FnMut(&[(usize, u64)]),
) {
    if remaining == 0 {
        visit(current);
        return;
    }
    for i in start..types.len() {
        let cost = types[i].cogenus();
        let mut c = 1;
        while c * cost <= remaining {
            current.push((i, c));
            multisets(types, i + 1, remaining - c * cost, current, visit);
            current.pop();
            c += 1;
        }
    }
}

fn graph_of(types: &[EdgeType], picks: &[(usize, u64)]) -> TauGraph {
    let m: BTreeMap<EdgeType, u64> = picks.iter().map(|&(i, c)| (types[i].clone(), c)).collect();
    TauGraph::from_multiset(m, Mode::LongEdge).expect("enumerated types are long edges")
}

/// All long-edge graphs of cogenus `delta` with endpoints in `[0, window]`
/// accepted by `keep`, sorted canonically. The search is split by the first
/// (smallest) edge type and run in parallel.
fn search(delta: u64, window: u32, keep: impl Fn(&TauGraph) -> bool + Sync) -> Vec<TauGraph> {
    if delta == 0 {
        return Vec::new();
    }
    let types = edge_types(window, delta);
    let mut out: Vec<TauGraph> = (0..types.len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut found = Vec::new();
            let cost = types[first].cogenus();
            let mut c = 1;
            while c * cost <= delta {
                let mut current = vec![(first, c)];
                multisets(&types, first + 1, delta - c * cost, &mut current, &mut |picks| {
                    let g = graph_of(&types, picks);
                    if keep(&g) {
                        found.push(g);
                    }
                });
                c += 1;
            }
            found
        })
        .collect();
    out.sort();
    out
}

/// Templates of cogenus `delta` with endpoints confined to `[0, window]`.
pub fn templates_in_window(delta: u64, window: u32) -> Vec<Template> {
    search(delta, window, |g| g.is_template())
        .into_iter()
        .map(|g| Template::new(g).unwrap())
        .collect()
}

/// Generates every template of cogenus `delta`, canonically ordered, without
/// consulting any cache.
pub fn generate_templates(delta: u64) -> Vec<Template> {
    templates_in_window(delta, delta as u32 + 1)
}

fn memo() -> &'static Mutex<HashMap<u64, Arc<Vec<Template>>>> {
    static MEMO: OnceLock<Mutex<HashMap<u64, Arc<Vec<Template>>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All templates of cogenus `delta` in canonical order, memoized in-process.
/// `delta = 0` gives the empty list.
pub fn templates_of_cogenus(delta: u64) -> Arc<Vec<Template>> {
    if let Some(t) = memo().lock().unwrap().get(&delta) {
        return t.clone();
    }
    let t = Arc::new(generate_templates(delta));
    memo().lock().unwrap().insert(delta, t.clone());
    t
}

/// All long-edge graphs of cogenus `delta` with `maxv ≤ max_vertex`.
pub fn graphs_of_cogenus_bounded(delta: u64, max_vertex: u32) -> Vec<TauGraph> {
    search(delta, max_vertex, |_| true)
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    delta: u64,
    templates: Vec<Vec<EdgeRecord>>,
}

/// Optional on-disk template cache: one JSON file per cogenus.
#[derive(Clone, Debug)]
pub struct TemplateCache {
    dir: PathBuf,
}

impl TemplateCache {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        TemplateCache { dir: dir.as_ref().to_path_buf() }
    }

    pub fn path(&self, delta: u64) -> PathBuf {
        self.dir.join(format!("templates-{delta}.json"))
    }

    pub fn store(&self, delta: u64, templates: &[Template]) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let file = CacheFile {
            format_version: CACHE_FORMAT_VERSION,
            delta,
            templates: templates.iter().map(|t| t.records()).collect(),
        };
        fs::write(self.path(delta), serde_json::to_string_pretty(&file)?)?;
        Ok(())
    }

    /// Reads a cached list. Returns `None` if no file exists; rejects files of
    /// another format version or whose entries are not distinct templates of
    /// cogenus `delta`.
    pub fn load(&self, delta: u64) -> Result<Option<Vec<Template>>> {
        let path = self.path(delta);
        if !path.exists() {
            return Ok(None);
        }
        let file: CacheFile = serde_json::from_str(&fs::read_to_string(&path)?)?;
        if file.format_version != CACHE_FORMAT_VERSION || file.delta != delta {
            return Err(Error::Domain(format!("{} has an incompatible header", path.display())));
        }
        let mut out = Vec::with_capacity(file.templates.len());
        for recs in &file.templates {
            let t = Template::new(TauGraph::from_records(recs)?)?;
            if t.cogenus() != delta {
                return Err(Error::Domain(format!("cached template {t} has the wrong cogenus")));
            }
            out.push(t);
        }
        if out.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!("{} is not in canonical order", path.display())));
        }
        Ok(Some(out))
    }

    /// Cached templates if present and valid, otherwise a fresh enumeration
    /// that is then written back. With `verify`, a cached list is also
    /// compared against regeneration. A cache hit also seeds the in-process
    /// memo used by [`templates_of_cogenus`].
    pub fn templates(&self, delta: u64, verify: bool) -> Result<Arc<Vec<Template>>> {
        if let Ok(Some(cached)) = self.load(delta) {
            if !verify || cached == *templates_of_cogenus(delta) {
                let cached = Arc::new(cached);
                memo().lock().unwrap().entry(delta).or_insert_with(|| cached.clone());
                return Ok(cached);
            }
        }
        let fresh = templates_of_cogenus(delta);
        self.store(delta, &fresh)?;
        Ok(fresh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn template_counts() {
        assert_eq!(templates_of_cogenus(0).len(), 0);
        assert_eq!(templates_of_cogenus(1).len(), 2);
        assert_eq!(templates_of_cogenus(2).len(), 7);
    }

    #[test]
    fn cogenus_one_templates() {
        let t = templates_of_cogenus(1);
        assert_eq!(t[0], Template::from_edges(&[(0, 1, 2)]).unwrap());
        assert_eq!(t[1], Template::from_edges(&[(0, 2, 1)]).unwrap());
    }

    #[test]
    fn bounded_graph_examples() {
        let g = graphs_of_cogenus_bounded(1, 1);
        assert_eq!(g, vec![TauGraph::from_edges(&[(0, 1, 2)]).unwrap()]);
        let g = graphs_of_cogenus_bounded(1, 2);
        assert_eq!(g.len(), 3);
        assert!(g.contains(&TauGraph::from_edges(&[(1, 2, 2)]).unwrap()));
        assert!(g.contains(&TauGraph::from_edges(&[(0, 2, 1)]).unwrap()));
        let g = graphs_of_cogenus_bounded(2, 1);
        assert_eq!(
            g,
            vec![
                TauGraph::from_edges(&[(0, 1, 2), (0, 1, 2)]).unwrap(),
                TauGraph::from_edges(&[(0, 1, 3)]).unwrap(),
            ]
        );
    }

    #[test]
    fn wider_window_finds_nothing_new() {
        for delta in 1..=4 {
            let wide = templates_in_window(delta, delta as u32 + 3);
            assert_eq!(wide, *templates_of_cogenus(delta), "delta = {delta}");
        }
    }

    #[test]
    fn outputs_are_valid_and_distinct() {
        for delta in 1..=4 {
            let ts = templates_of_cogenus(delta);
            let set: HashSet<_> = ts.iter().collect();
            assert_eq!(set.len(), ts.len());
            assert!(ts.iter().all(|t| t.is_template() && t.cogenus() == delta));
            assert!(ts.windows(2).all(|w| w[0] < w[1]));
        }
        for (delta, m) in [(2, 4), (3, 5)] {
            let gs = graphs_of_cogenus_bounded(delta, m);
            let set: HashSet<_> = gs.iter().collect();
            assert_eq!(set.len(), gs.len());
            assert!(gs.iter().all(|g| g.cogenus() == delta && g.maxv().unwrap() <= m));
        }
    }

    #[test]
    fn conjugation_permutes_templates() {
        for delta in 1..=3 {
            let ts = templates_of_cogenus(delta);
            let mut conj: Vec<Template> = ts.iter().map(|t| t.conjugate()).collect();
            conj.sort();
            assert_eq!(conj, *ts);
            for t in ts.iter() {
                let c = t.conjugate();
                assert_eq!(c.multiplicity(), t.multiplicity());
                assert_eq!(c.len(), t.len());
                assert_eq!((c.eps0(), c.eps1()), (t.eps1(), t.eps0()));
            }
        }
    }

    #[test]
    fn bounded_graphs_are_shifted_unions_of_templates() {
        // Every graph splits into connected pieces, each a shifted template
        // of smaller or equal cogenus.
        for g in graphs_of_cogenus_bounded(3, 4) {
            let mut pieces: Vec<Vec<(EdgeType, u64)>> = Vec::new();
            for (t, c) in g.edges() {
                let hit: Vec<usize> = (0..pieces.len())
                    .filter(|&p| {
                        pieces[p].iter().any(|(u, _)| u.support().iter().any(|&j| t.contains(j)))
                    })
                    .collect();
                let mut merged = vec![(t, c)];
                for &p in hit.iter().rev() {
                    merged.extend(pieces.remove(p));
                }
                pieces.push(merged);
            }
            for piece in pieces {
                let pg = TauGraph::from_multiset(piece.into_iter().collect(), Mode::LongEdge).unwrap();
                let m = pg.minv().unwrap();
                let edges: Vec<(u32, u32, u32)> = pg
                    .edges()
                    .iter()
                    .flat_map(|(t, c)| {
                        std::iter::repeat_n((t.start() - m, t.end() - m, t.weight()), *c as usize)
                    })
                    .collect();
                let t = Template::from_edges(&edges).unwrap();
                assert!(templates_of_cogenus(t.cogenus()).contains(&t));
            }
        }
    }

    #[test]
    fn disk_cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TemplateCache::new(dir.path());
        assert!(cache.load(2).unwrap().is_none());
        let first = cache.templates(2, true).unwrap();
        assert!(cache.path(2).exists());
        let loaded = cache.load(2).unwrap().unwrap();
        assert_eq!(loaded, *first);
        let text = fs::read_to_string(cache.path(2)).unwrap();
        assert!(text.contains("\"format_version\": 1"));
    }

    #[test]
    fn corrupt_cache_is_replaced() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TemplateCache::new(dir.path());
        // A valid-looking file that is missing one template.
        let mut partial = (*templates_of_cogenus(2)).clone();
        partial.pop();
        cache.store(2, &partial).unwrap();
        let got = cache.templates(2, true).unwrap();
        assert_eq!(got.len(), 7);
        assert_eq!(cache.load(2).unwrap().unwrap().len(), 7);

        fs::write(cache.path(2), "{\"format_version\": 99, \"delta\": 2, \"templates\": []}").unwrap();
        assert!(cache.load(2).is_err());
        assert_eq!(cache.templates(2, false).unwrap().len(), 7);
    }
}
