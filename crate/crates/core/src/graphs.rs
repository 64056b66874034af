//! Long-edge graphs and τ-graphs stored as a type list τ with a
//! multiplicity vector n.
//!
//! An edge type `t = (I, r)` has a support `I ⊂ {1, 2, ...}` and a weight
//! `r`. The edge `{a, b}` of a long-edge graph has `I = {a+1, ..., b}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// One edge type `(I, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeType {
    support: Vec<u32>,
    weight: u32,
}

impl EdgeType {
    /// The edge `{start, end}` of weight `weight`, i.e. `I = {start+1..end}`.
    pub fn interval(start: u32, end: u32, weight: u32) -> Result<Self> {
        if end <= start {
            return domain(format!("edge {{{start},{end}}} needs start < end"));
        }
        if weight == 0 {
            return domain("edge weight must be positive");
        }
        Ok(EdgeType { support: (start + 1..=end).collect(), weight })
    }

    /// A general τ-graph edge type with an arbitrary nonempty support.
    pub fn from_support(support: &[u32], weight: u32) -> Result<Self> {
        let mut s = support.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.is_empty() || s[0] == 0 {
            return domain("support must be a nonempty set of positive integers");
        }
        if weight == 0 {
            return domain("edge weight must be positive");
        }
        Ok(EdgeType { support: s, weight })
    }

    pub fn support(&self) -> &[u32] {
        &self.support
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Left endpoint `min(I) − 1`.
    pub fn start(&self) -> u32 {
        self.support[0] - 1
    }

    /// Right endpoint `max(I)`.
    pub fn end(&self) -> u32 {
        *self.support.last().unwrap()
    }

    pub fn contains(&self, j: u32) -> bool {
        self.support.binary_search(&j).is_ok()
    }

    /// `|I|`.
    pub fn size(&self) -> u32 {
        self.support.len() as u32
    }

    pub fn is_interval(&self) -> bool {
        self.end() - self.start() == self.size()
    }

    /// Satisfies both long-edge conditions: consecutive support and
    /// `r·|I| > 1`.
    pub fn is_long_edge(&self) -> bool {
        self.is_interval() && self.weight * self.size() > 1
    }

    /// `r·|I| − 1`, the cogenus of one edge of this type.
    pub fn cogenus(&self) -> u64 {
        (self.weight as u64) * (self.size() as u64) - 1
    }

    pub fn shifted(&self, k: u32) -> EdgeType {
        EdgeType { support: self.support.iter().map(|j| j + k).collect(), weight: self.weight }
    }

    fn sort_key(&self) -> (u32, u32, u32, &[u32]) {
        (self.start(), self.end(), self.weight, &self.support)
    }
}

impl PartialOrd for EdgeType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EdgeType {
    /// By (start, end, weight), then support for non-interval types.
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_interval() {
            write!(f, "{{{},{}}}w{}", self.start(), self.end(), self.weight)
        } else {
            let s: Vec<String> = self.support.iter().map(|j| j.to_string()).collect();
            write!(f, "I[{}]w{}", s.join(","), self.weight)
        }
    }
}

/// Whether τ must satisfy the long-edge conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    LongEdge,
    General,
}

/// An ordered list of distinct edge types.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tau {
    types: Vec<EdgeType>,
    mode: Mode,
}

impl Tau {
    pub fn new(types: Vec<EdgeType>, mode: Mode) -> Result<Self> {
        for (i, t) in types.iter().enumerate() {
            if types[..i].contains(t) {
                return domain(format!("edge type {t} listed twice"));
            }
            if mode == Mode::LongEdge && !t.is_long_edge() {
                return domain(format!("edge type {t} violates the long-edge conditions"));
            }
        }
        Ok(Tau { types, mode })
    }

    /// Long-edge τ from `(start, end, weight)` triples, kept in the given order.
    pub fn long_edge(triples: &[(u32, u32, u32)]) -> Result<Self> {
        let types = triples
            .iter()
            .map(|&(a, b, r)| EdgeType::interval(a, b, r))
            .collect::<Result<Vec<_>>>()?;
        Tau::new(types, Mode::LongEdge)
    }

    pub fn types(&self) -> &[EdgeType] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Largest integer in any support (0 for the empty τ).
    pub fn maxv(&self) -> u32 {
        self.types.iter().map(|t| t.end()).max().unwrap_or(0)
    }

    /// `λ_j(τ, n) = Σ_{i: j ∈ I_i} r_i n_i`.
    pub fn lambda(&self, n: &[u64], j: u32) -> u64 {
        self.types
            .iter()
            .zip(n)
            .filter(|(t, _)| t.contains(j))
            .map(|(t, &c)| t.weight as u64 * c)
            .sum()
    }

    /// `λ̄_j(τ, n) = λ_j − Σ_{i: I_i = {j}} n_i`.
    pub fn lambda_bar(&self, n: &[u64], j: u32) -> u64 {
        let singles: u64 = self
            .types
            .iter()
            .zip(n)
            .filter(|(t, _)| t.support == [j])
            .map(|(_, &c)| c)
            .sum();
        self.lambda(n, j) - singles
    }

    /// `(λ_1, ..., λ_ell)`.
    pub fn lambda_vec(&self, n: &[u64], ell: u32) -> Vec<u64> {
        (1..=ell).map(|j| self.lambda(n, j)).collect()
    }

    pub fn lambda_bar_vec(&self, n: &[u64], ell: u32) -> Vec<u64> {
        (1..=ell).map(|j| self.lambda_bar(n, j)).collect()
    }
}

/// The graph `G_τ(n)`.
#[derive(Clone, Debug)]
pub struct TauGraph {
    tau: Tau,
    counts: Vec<u64>,
}

/// Serialized form of one edge type with its count. `support` is present
/// only for non-interval types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub start: u32,
    pub end: u32,
    pub weight: u32,
    pub count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<u32>>,
}

impl TauGraph {
    pub fn new(tau: Tau, counts: Vec<u64>) -> Result<Self> {
        if tau.len() != counts.len() {
            return domain(format!(
                "τ has {} types but n has {} entries",
                tau.len(),
                counts.len()
            ));
        }
        Ok(TauGraph { tau, counts })
    }

    pub fn empty() -> Self {
        TauGraph { tau: Tau { types: vec![], mode: Mode::LongEdge }, counts: vec![] }
    }

    /// A long-edge graph from an edge list `(start, end, weight)`; repeated
    /// edges raise the count.
    pub fn from_edges(edges: &[(u32, u32, u32)]) -> Result<Self> {
        let mut m: BTreeMap<EdgeType, u64> = BTreeMap::new();
        for &(a, b, r) in edges {
            *m.entry(EdgeType::interval(a, b, r)?).or_default() += 1;
        }
        Self::from_multiset(m, Mode::LongEdge)
    }

    /// Builds the canonical graph for an edge-type multiset.
    pub fn from_multiset(m: BTreeMap<EdgeType, u64>, mode: Mode) -> Result<Self> {
        let (types, counts): (Vec<_>, Vec<_>) = m.into_iter().filter(|(_, c)| *c > 0).unzip();
        TauGraph::new(Tau::new(types, mode)?, counts)
    }

    pub fn from_records(records: &[EdgeRecord]) -> Result<Self> {
        let mut m: BTreeMap<EdgeType, u64> = BTreeMap::new();
        let mut mode = Mode::LongEdge;
        for rec in records {
            let t = match &rec.support {
                Some(s) => EdgeType::from_support(s, rec.weight)?,
                None => EdgeType::interval(rec.start, rec.end, rec.weight)?,
            };
            if !t.is_long_edge() {
                mode = Mode::General;
            }
            if t.start() != rec.start || t.end() != rec.end {
                return domain(format!("record endpoints disagree with support for {t}"));
            }
            *m.entry(t).or_default() += rec.count;
        }
        Self::from_multiset(m, mode)
    }

    pub fn tau(&self) -> &Tau {
        &self.tau
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn mode(&self) -> Mode {
        self.tau.mode
    }

    /// The same τ with another multiplicity vector.
    pub fn with_counts(&self, counts: Vec<u64>) -> Result<TauGraph> {
        TauGraph::new(self.tau.clone(), counts)
    }

    /// `(type, count)` pairs with positive count, in canonical order.
    pub fn edges(&self) -> Vec<(EdgeType, u64)> {
        let mut m: BTreeMap<EdgeType, u64> = BTreeMap::new();
        for (t, &c) in self.tau.types.iter().zip(&self.counts) {
            if c > 0 {
                *m.entry(t.clone()).or_default() += c;
            }
        }
        m.into_iter().collect()
    }

    /// The canonical representative: supported types sorted, counts aligned.
    pub fn canonical(&self) -> TauGraph {
        let (types, counts): (Vec<_>, Vec<_>) = self.edges().into_iter().unzip();
        TauGraph { tau: Tau { types, mode: self.tau.mode }, counts }
    }

    pub fn records(&self) -> Vec<EdgeRecord> {
        self.edges()
            .into_iter()
            .map(|(t, count)| EdgeRecord {
                start: t.start(),
                end: t.end(),
                weight: t.weight,
                count,
                support: (!t.is_interval()).then(|| t.support.clone()),
            })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Number of edges `|n|`.
    pub fn num_edges(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `μ = Π (r_i²)^{n_i}`.
    pub fn multiplicity(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (t, &c) in self.tau.types.iter().zip(&self.counts) {
            acc *= BigUint::from(t.weight).pow(2 * c as u32);
        }
        acc
    }

    /// `δ = Σ n_i (r_i |I_i| − 1)`.
    pub fn cogenus(&self) -> u64 {
        self.tau.types.iter().zip(&self.counts).map(|(t, &c)| c * t.cogenus()).sum()
    }

    pub fn lambda(&self, j: u32) -> u64 {
        self.tau.lambda(&self.counts, j)
    }

    pub fn lambda_bar(&self, j: u32) -> u64 {
        self.tau.lambda_bar(&self.counts, j)
    }

    pub fn lambda_vec(&self, ell: u32) -> Vec<u64> {
        self.tau.lambda_vec(&self.counts, ell)
    }

    pub fn lambda_bar_vec(&self, ell: u32) -> Vec<u64> {
        self.tau.lambda_bar_vec(&self.counts, ell)
    }

    fn supported(&self) -> impl Iterator<Item = &EdgeType> {
        self.tau.types.iter().zip(&self.counts).filter(|(_, &c)| c > 0).map(|(t, _)| t)
    }

    fn require_nonempty(&self, what: &str) -> Result<()> {
        if self.is_empty() {
            return domain(format!("{what} is undefined for the empty graph"));
        }
        Ok(())
    }

    pub fn minv(&self) -> Result<u32> {
        self.require_nonempty("minv")?;
        Ok(self.supported().map(|t| t.start()).min().unwrap())
    }

    pub fn maxv(&self) -> Result<u32> {
        self.require_nonempty("maxv")?;
        Ok(self.supported().map(|t| t.end()).max().unwrap())
    }

    /// `l(G) = maxv − minv`.
    pub fn length(&self) -> Result<u32> {
        Ok(self.maxv()? - self.minv()?)
    }

    /// Moves every edge `k` units to the right.
    pub fn shift(&self, k: u32) -> TauGraph {
        let types = self.tau.types.iter().map(|t| t.shifted(k)).collect();
        TauGraph { tau: Tau { types, mode: self.tau.mode }, counts: self.counts.clone() }
    }

    /// No split of the supported types into two groups with disjoint union
    /// of supports. The empty graph is not a τ-template.
    pub fn is_tau_template(&self) -> bool {
        let sup: Vec<&EdgeType> = self.supported().collect();
        if sup.is_empty() {
            return false;
        }
        let mut seen = vec![false; sup.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for k in 0..sup.len() {
                if !seen[k] && sup[i].support.iter().any(|&j| sup[k].contains(j)) {
                    seen[k] = true;
                    stack.push(k);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A long-edge graph every interior vertex of which is straddled by an
    /// edge; in long-edge mode this is the τ-template test.
    pub fn is_shifted_template(&self) -> bool {
        self.mode() == Mode::LongEdge && self.is_tau_template()
    }

    pub fn is_template(&self) -> bool {
        self.is_shifted_template() && self.minv().ok() == Some(0)
    }

    /// 1 if every edge at `minv` has weight 1.
    pub fn epsilon0(&self) -> Result<u32> {
        let v = self.minv()?;
        Ok(self.supported().filter(|t| t.start() == v).all(|t| t.weight == 1) as u32)
    }

    /// 1 if every edge at `maxv` has weight 1.
    pub fn epsilon1(&self) -> Result<u32> {
        let v = self.maxv()?;
        Ok(self.supported().filter(|t| t.end() == v).all(|t| t.weight == 1) as u32)
    }

    /// Mirror image on `[minv, maxv]`: edge `{a, b}` goes to
    /// `{minv + maxv − b, minv + maxv − a}`.
    pub fn conjugate(&self) -> Result<TauGraph> {
        if self.mode() != Mode::LongEdge {
            return Err(Error::Unsupported("conjugation needs a long-edge graph".into()));
        }
        let s = self.minv()? + self.maxv()?;
        let mut m: BTreeMap<EdgeType, u64> = BTreeMap::new();
        for (t, c) in self.edges() {
            *m.entry(EdgeType::interval(s - t.end(), s - t.start(), t.weight)?).or_default() += c;
        }
        Self::from_multiset(m, Mode::LongEdge)
    }
}

impl PartialEq for TauGraph {
    fn eq(&self, other: &Self) -> bool {
        self.edges() == other.edges()
    }
}

impl Eq for TauGraph {}

impl Hash for TauGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.edges().hash(state);
    }
}

impl PartialOrd for TauGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TauGraph {
    /// Lexicographic on the canonical `(type, count)` list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges().cmp(&other.edges())
    }
}

impl fmt::Display for TauGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges()
            .into_iter()
            .map(|(t, c)| if c == 1 { t.to_string() } else { format!("{t}x{c}") })
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// A long-edge graph with `minv = 0` that passes the template test.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Template(TauGraph);

impl Template {
    pub fn new(g: TauGraph) -> Result<Self> {
        if !g.is_template() {
            return domain(format!("{g} is not a template"));
        }
        Ok(Template(g.canonical()))
    }

    pub fn from_edges(edges: &[(u32, u32, u32)]) -> Result<Self> {
        Template::new(TauGraph::from_edges(edges)?)
    }

    pub fn graph(&self) -> &TauGraph {
        &self.0
    }

    /// `l(Γ) = maxv(Γ)`.
    pub fn len(&self) -> u32 {
        self.0.maxv().unwrap()
    }

    pub fn eps0(&self) -> u32 {
        self.0.epsilon0().unwrap()
    }

    pub fn eps1(&self) -> u32 {
        self.0.epsilon1().unwrap()
    }

    pub fn conjugate(&self) -> Template {
        Template(self.0.conjugate().expect("templates conjugate to templates"))
    }
}

impl Deref for Template {
    type Target = TauGraph;
    fn deref(&self) -> &TauGraph {
        &self.0
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
