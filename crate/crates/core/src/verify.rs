//! Oracle suites that cross-check independent routes through the library.
//! Each suite counts its checks and records a message for every failure.

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::algebra::rational::sign;
use crate::algebra::{int, MultiPoly, Rational};
use crate::counting::{p_poly, s_poly, t_vars};
use crate::enumerate::{graphs_of_cogenus_bounded, templates_of_cogenus};
use crate::error::Result;
use crate::graphs::{EdgeType, Mode, Tau};
use crate::phi::{linear_form, phi_poly, phi_value, phi_value_strict, LinearForm};
use crate::severi::{
    a1_coefficient, a2_coefficient, q_poly_delta, q_poly_gamma, q_value, severi_direct,
    severi_via_exp,
};
use crate::words::{phi_closed_m1, PickRule, TauWord, WordSpace};

/// Outcome of one suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.to_string(), checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// Records an error as a failed check and returns the value otherwise.
    fn ok<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{}: {e}", what()));
                None
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Scale of a verification run.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub max_delta: u64,
    pub max_d: u64,
    /// Largest number of edge types in the reciprocity sweep.
    pub reciprocity_types: usize,
    /// Largest `|n|` in the word suites.
    pub word_n: u64,
    /// Largest `n` in the three-way φ comparison.
    pub phi_n: u64,
    pub random_points: usize,
    pub vanishing_graphs: usize,
    pub seed: u64,
    /// Added to every linear form and Q polynomial before comparison; a
    /// correct build must then fail.
    pub perturb: Option<Rational>,
}

impl VerifyConfig {
    pub fn quick() -> Self {
        VerifyConfig {
            max_delta: 2,
            max_d: 4,
            reciprocity_types: 1,
            word_n: 2,
            phi_n: 3,
            random_points: 10,
            vanishing_graphs: 10,
            seed: 7,
            perturb: None,
        }
    }

    pub fn full() -> Self {
        VerifyConfig {
            max_delta: 3,
            max_d: 5,
            reciprocity_types: 3,
            word_n: 3,
            phi_n: 4,
            random_points: 50,
            vanishing_graphs: 20,
            seed: 7,
            perturb: None,
        }
    }
}

/// All suites in a fixed order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    let shift = cfg.perturb.clone().unwrap_or_else(Rational::zero);
    vec![
        reciprocity(3, 2, cfg.reciprocity_types, 4),
        linearity(cfg.max_delta, cfg.random_points, cfg.seed, &shift),
        vanishing(cfg.max_delta, cfg.vanishing_graphs, cfg.seed),
        word_counts(cfg.word_n),
        fis_decomposition(cfg.word_n),
        phi_agreement(3, 3, cfg.phi_n),
        pipeline(cfg.max_d, cfg.max_delta),
        statistics(cfg.max_delta, &shift),
    ]
}

/// Long-edge types `{a,b}` with `b ≤ max_vertex` and weight `≤ max_weight`.
pub fn small_edge_types(max_vertex: u32, max_weight: u32) -> Vec<EdgeType> {
    let mut out = Vec::new();
    for a in 0..max_vertex {
        for b in a + 1..=max_vertex {
            for r in 1..=max_weight {
                let t = EdgeType::interval(a, b, r).unwrap();
                if t.is_long_edge() {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Every τ made of at most `max_types` distinct types from `types`.
pub fn small_taus(types: &[EdgeType], max_types: usize) -> Vec<Tau> {
    fn rec(types: &[EdgeType], start: usize, left: usize, cur: &mut Vec<EdgeType>, out: &mut Vec<Tau>) {
        if !cur.is_empty() {
            out.push(Tau::new(cur.clone(), Mode::LongEdge).unwrap());
        }
        if left == 0 {
            return;
        }
        for i in start..types.len() {
            cur.push(types[i].clone());
            rec(types, i + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(types, 0, max_types, &mut Vec::new(), &mut out);
    out
}

/// All `n ∈ ℕ^m` with `|n| ≤ total`.
pub fn count_vectors(m: usize, total: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..m {
        let mut next = Vec::new();
        for v in out {
            let used: u64 = v.iter().sum();
            for c in 0..=total - used {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// `p(β) = (−1)^{|n|} s(−β − 1)` as polynomials.
pub fn reciprocity(max_vertex: u32, max_weight: u32, max_types: usize, max_n: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("reciprocity");
    for tau in small_taus(&small_edge_types(max_vertex, max_weight), max_types) {
        let ell = tau.maxv();
        let beta = crate::counting::beta_vars(ell);
        let images: Vec<MultiPoly> = (0..ell as usize)
            .map(|j| &(-&MultiPoly::var(&beta, j)) - &MultiPoly::scalar(int(1)))
            .collect();
        for n in count_vectors(tau.len(), max_n) {
            let ctx = || format!("τ = {:?}, n = {n:?}", tau.types().iter().map(|t| t.to_string()).collect::<Vec<_>>());
            let Some(p) = rep.ok(p_poly(&tau, &n, ell), ctx) else { continue };
            let Some(s) = rep.ok(s_poly(&tau, &n, ell), ctx) else { continue };
            debug_assert_eq!(s.vars(), t_vars(ell).as_slice());
            let Some(sr) = rep.ok(s.compose(&images), ctx) else { continue };
            let rhs = sr.scale(&sign(n.iter().sum()));
            rep.check(p == rhs, || format!("{}: p = {p}, reflected s = {rhs}", ctx()));
        }
    }
    rep
}

/// Φ equals its linear form on the shell `λ̄ ≤ β ≤ λ̄ + 2` and at random
/// points beyond it, for every template of cogenus `≤ max_delta`.
pub fn linearity(max_delta: u64, random_points: usize, seed: u64, shift: &Rational) -> SuiteReport {
    let mut rep = SuiteReport::new("linearity");
    let mut rng = StdRng::seed_from_u64(seed);
    for delta in 1..=max_delta {
        for t in templates_of_cogenus(delta).iter() {
            let Some(mut f) = rep.ok(linear_form(t), || format!("{t}")) else { continue };
            f.a0 += shift;
            let lb = t.lambda_bar_vec(t.len());
            let mut points = Vec::new();
            for offs in count_box(lb.len(), 2) {
                points.push(lb.iter().zip(&offs).map(|(a, b)| a + b).collect::<Vec<u64>>());
            }
            for _ in 0..random_points {
                points.push(lb.iter().map(|a| a + rng.gen_range(3..=10)).collect());
            }
            for beta in points {
                check_form(&mut rep, t, &f, &beta);
            }
        }
    }
    rep
}

fn check_form(rep: &mut SuiteReport, t: &crate::graphs::Template, f: &LinearForm, beta: &[u64]) {
    if let Some(v) = rep.ok(phi_value(t, beta), || format!("{t} at {beta:?}")) {
        let e = f.eval(beta);
        rep.check(v == e, || format!("{t} at {beta:?}: Φ = {v}, form gives {e}"));
    }
}

/// All vectors in `{0..=k}^m`.
fn count_box(m: usize, k: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=k).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// `φ` and `Φ^s` vanish on long-edge graphs that are not shifted templates.
pub fn vanishing(max_delta: u64, count: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("vanishing");
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pool = Vec::new();
    for delta in 1..=max_delta {
        pool.extend(
            graphs_of_cogenus_bounded(delta, delta as u32 + 3)
                .into_iter()
                .filter(|g| !g.is_shifted_template()),
        );
    }
    pool.shuffle(&mut rng);
    pool.truncate(count);
    rep.check(pool.len() == count, || format!("only {} non-templates generated", pool.len()));
    for g in pool {
        let ell = g.maxv().unwrap();
        if let Some(p) = rep.ok(phi_poly(g.tau(), g.counts(), ell), || format!("{g}")) {
            rep.check(p.is_zero(), || format!("φ({g}) = {p}"));
        }
        let beta: Vec<u64> = (0..ell + 2).map(|_| rng.gen_range(0..=8)).collect();
        if let Some(v) = rep.ok(phi_value_strict(&g, &beta), || format!("{g}")) {
            rep.check(v.is_zero(), || format!("Φ^s({g}) at {beta:?} = {v}"));
        }
    }
    rep
}

/// The τ used by the word suites.
pub fn word_taus() -> Vec<Tau> {
    [
        vec![(0, 1, 2)],
        vec![(0, 2, 1)],
        vec![(0, 1, 2), (0, 2, 1)],
        vec![(0, 2, 1), (1, 2, 2)],
    ]
    .iter()
    .map(|t| Tau::long_edge(t).unwrap())
    .collect()
}

const WORD_BUDGET: usize = 32;

/// `|S_τ(n, t)| = s_τ(n, t)`, decomposition cardinalities and the Catalan
/// counts.
pub fn word_counts(max_n: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("words");
    for tau in word_taus() {
        let ws = WordSpace::new(tau.clone()).with_budget(WORD_BUDGET);
        let ell = ws.ell();
        let ts = count_box(ell, 2);
        for n in count_vectors(tau.len(), max_n) {
            let Some(s) = rep.ok(s_poly(&tau, &n, ell as u32), || format!("s_poly {n:?}")) else { continue };
            for t in &ts {
                let ti: Vec<i64> = t.iter().map(|&x| x as i64).collect();
                let ctx = || format!("τ = {tau:?}, n = {n:?}, t = {t:?}");
                let Some(c) = rep.ok(ws.count_s(&n, t), ctx) else { continue };
                let expect = s.eval_int(&ti).unwrap();
                rep.check(int(c) == expect, || format!("{}: {c} words, s = {expect}", ctx()));
                if let Some(d) = rep.ok(decomp_q(&ws, &n, t), ctx) {
                    rep.check(d == c, || format!("{}: irreducible × balanced gives {d}, not {c}", ctx()));
                }
                let parts = unit_parts(t);
                if let (Some(a), Some(b)) = (
                    rep.ok(ws.count_irreducible(&n, t), ctx),
                    rep.ok(split_irreducible(&ws, &n, &parts), ctx),
                ) {
                    rep.check(a == b, || format!("{}: |S^irr| = {a}, product split gives {b}", ctx()));
                }
            }
        }
    }
    let ws = WordSpace::new(Tau::long_edge(&[(0, 1, 2)]).unwrap()).with_budget(WORD_BUDGET);
    let cat: Vec<u64> = (0..=4).map(|n| ws.count_irreducible(&[n], &[1]).unwrap_or(0)).collect();
    rep.check(cat == [1, 1, 2, 5, 14], || format!("Catalan counts {cat:?}"));
    rep
}

/// `Σ_{n1 + n0 = n} |S^irr(n1, t)| · |S(n0, 0)|`.
pub fn decomp_q(ws: &WordSpace, n: &[u64], t: &[u64]) -> Result<u64> {
    let zero = vec![0; ws.ell()];
    let mut acc = 0;
    for n1 in below(n) {
        let n0: Vec<u64> = n.iter().zip(&n1).map(|(a, b)| a - b).collect();
        acc += ws.count_irreducible(&n1, t)? * ws.count_s(&n0, &zero)?;
    }
    Ok(acc)
}

/// `t` as the weak composition `(e_1, …, e_1, e_2, …)`.
pub fn unit_parts(t: &[u64]) -> Vec<Vec<u64>> {
    let mut parts = Vec::new();
    for (j, &k) in t.iter().enumerate() {
        for _ in 0..k {
            let mut e = vec![0; t.len()];
            e[j] = 1;
            parts.push(e);
        }
    }
    parts
}

/// `Σ Π_i |S^irr(n_i, t_i)|` over weak compositions `(n_1, …, n_k)` of `n`.
pub fn split_irreducible(ws: &WordSpace, n: &[u64], parts: &[Vec<u64>]) -> Result<u64> {
    match parts.split_first() {
        None => Ok(u64::from(n.iter().all(|&c| c == 0))),
        Some((t, rest)) => {
            let mut acc = 0;
            for n1 in below(n) {
                let c = ws.count_irreducible(&n1, t)?;
                if c > 0 {
                    let n2: Vec<u64> = n.iter().zip(&n1).map(|(a, b)| a - b).collect();
                    acc += c * split_irreducible(ws, &n2, rest)?;
                }
            }
            Ok(acc)
        }
    }
}

fn below(n: &[u64]) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![vec![]];
    for &k in n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=k).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every initial subword of `w`.
fn prefixes(w: &TauWord) -> Vec<TauWord> {
    let lens: Vec<u64> = w.lengths();
    below(&lens)
        .into_iter()
        .map(|cut| w.prefix(&cut.iter().map(|&c| c as usize).collect::<Vec<_>>()))
        .collect()
}

/// For each word and admissible target height, exactly one initial subword
/// of that height is irreducible, and FIS returns it under both pick rules.
pub fn fis_decomposition(max_n: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("fis");
    for tau in word_taus() {
        let ws = WordSpace::new(tau.clone()).with_budget(WORD_BUDGET);
        let ell = ws.ell();
        for n in count_vectors(tau.len(), max_n.min(2)) {
            for t in count_box(ell, 1) {
                let Some(words) = rep.ok(ws.enumerate_s(&n, &t), || format!("{n:?} {t:?}")) else { continue };
                for w in words.iter() {
                    let hw = ws.height(w).unwrap();
                    let pre = prefixes(w);
                    for h in count_box(ell, 2) {
                        let h: Vec<i64> = h.iter().map(|&x| -(x as i64)).collect();
                        if hw.iter().zip(&h).any(|(a, b)| a > b) {
                            continue;
                        }
                        let irr: Vec<&TauWord> = pre
                            .iter()
                            .filter(|u| ws.height(u).unwrap() == h && ws.is_irreducible(u).unwrap())
                            .collect();
                        let ctx = || format!("w = {w}, h = {h:?}");
                        rep.check(irr.len() == 1, || format!("{}: {} irreducible prefixes", ctx(), irr.len()));
                        let (Some(a), Some(b)) = (
                            rep.ok(ws.fis(w, &h, PickRule::Smallest), ctx),
                            rep.ok(ws.fis(w, &h, PickRule::Largest), ctx),
                        ) else {
                            continue;
                        };
                        rep.check(a == b, || format!("{}: pick rules disagree", ctx()));
                        rep.check(irr.first() == Some(&&a.0), || format!("{}: FIS gave {}", ctx(), a.0));
                        rep.check(a.0.concat(&a.1) == *w, || format!("{}: u ∘ v ≠ w", ctx()));
                    }
                }
            }
        }
    }
    rep
}

/// Closed form, contingency polynomial and word series give the same φ for
/// single-type τ; the last two also agree on the mixed τ of the word suite.
pub fn phi_agreement(max_r: u32, max_ell: u32, max_n: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("phi-three-way");
    for r in 1..=max_r {
        for ell in 1..=max_ell {
            if r * ell == 1 {
                continue;
            }
            let tau = Tau::long_edge(&[(0, ell, r)]).unwrap();
            let ws = WordSpace::new(tau.clone()).with_budget(64);
            for n in 1..=max_n {
                let ctx = || format!("r = {r}, ℓ = {ell}, n = {n}");
                let Some(c) = rep.ok(phi_closed_m1(r, ell, n), ctx) else { continue };
                let c = c.to_poly();
                if let Some(p) = rep.ok(phi_poly(&tau, &[n], ell), ctx) {
                    rep.check(p == c, || format!("{}: polynomial {p}, closed form {c}", ctx()));
                }
                if let Some(w) = rep.ok(ws.phi_via_words(&[n]), ctx) {
                    rep.check(w == c, || format!("{}: words {w}, closed form {c}", ctx()));
                }
            }
        }
    }
    for tau in word_taus() {
        let ws = WordSpace::new(tau.clone()).with_budget(WORD_BUDGET);
        for n in count_vectors(tau.len(), 3) {
            let g = crate::graphs::TauGraph::new(tau.clone(), n.clone()).unwrap();
            if g.cogenus() > 3 {
                continue;
            }
            let ctx = || format!("τ = {tau:?}, n = {n:?}");
            if let (Some(p), Some(w)) = (
                rep.ok(phi_poly(&tau, &n, ws.ell() as u32), ctx),
                rep.ok(ws.phi_via_words(&n), ctx),
            ) {
                rep.check(p == w, || format!("{}: polynomial {p}, words {w}", ctx()));
            }
        }
    }
    rep
}

/// `severi_direct = severi_via_exp` on the grid.
pub fn pipeline(max_d: u64, max_delta: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("pipeline");
    for delta in 1..=max_delta {
        for d in 1..=max_d {
            let ctx = || format!("d = {d}, δ = {delta}");
            if let (Some(a), Some(b)) = (rep.ok(severi_direct(d, delta), ctx), rep.ok(severi_via_exp(d, delta), ctx)) {
                rep.check(a == b && a >= 0.into(), || format!("{}: direct {a}, exp {b}", ctx()));
            }
        }
    }
    rep
}

/// Thresholds, polynomial against exact values, and the A₁/A₂ identities.
pub fn statistics(max_delta: u64, shift: &Rational) -> SuiteReport {
    let mut rep = SuiteReport::new("statistics");
    for delta in 1..=max_delta {
        for t in templates_of_cogenus(delta).iter() {
            if let Some(q) = rep.ok(q_poly_gamma(t), || format!("{t}")) {
                rep.check(q.threshold <= delta, || format!("{t}: threshold {}", q.threshold));
            }
        }
        let Some(mut q) = rep.ok(q_poly_delta(delta), || format!("Q_{delta}")) else { continue };
        q.poly = &q.poly + &MultiPoly::scalar(shift.clone());
        for d in delta..delta + 3 {
            if let Some(v) = rep.ok(q_value(delta, d), || format!("Q^{{{d},{delta}}}")) {
                let e = q.eval(d as i64);
                rep.check(v == e, || format!("Q_{delta}({d}) = {e}, exact {v}"));
            }
        }
        let cs = q.coeffs();
        let get = |i: usize| cs.get(i).cloned().unwrap_or_else(Rational::zero);
        if let (Some(a1), Some(a2)) = (
            rep.ok(a1_coefficient(delta), || format!("A₁ at {delta}")),
            rep.ok(a2_coefficient(delta), || format!("A₂ at {delta}")),
        ) {
            rep.check(get(2) == a1, || format!("[d²]Q_{delta} = {}, A₁ gives {a1}", get(2)));
            rep.check(get(1) == -a2.clone() * int(3), || format!("[d]Q_{delta} = {}, A₂ gives {a2}", get(1)));
        }
    }
    rep
}
