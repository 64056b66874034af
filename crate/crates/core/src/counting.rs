//! Ordering counts `P_β`, `P^s_β` and their polynomial forms via
//! τ-compatible contingency tables.
//!
//! An ordering places each weighted edge of type `t_i` into one gap
//! `j ∈ I_i`; with `a_{ij}` edges of type `i` and `c_j = Σ_i a_{ij}` weighted
//! edges in gap `j`, the gap also holds `β_j − λ_j` unweighted edges, giving
//! `C(β_j − λ_j + c_j, c_j) · multinomial(c_j; a_{·j})` arrangements.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{binomial, binomial_poly, int, multinomial, MultiPoly, Rational};
use crate::error::{domain, Error, Result};
use crate::graphs::{Mode, Tau, TauGraph};

/// A τ-compatible `m × ℓ` table with row sums `n` and column sums `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContingencyTable {
    pub entries: Vec<Vec<u64>>,
    pub row_margin: Vec<u64>,
    pub col_margin: Vec<u64>,
}

/// Distributes row `i` of the table over its allowed columns, recursing on
/// rows; `visit` receives every completed table.
fn fill_rows(
    tau: &Tau,
    n: &[u64],
    ell: u32,
    cap: Option<&[u64]>,
    row: usize,
    table: &mut Vec<Vec<u64>>,
    cols: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[Vec<u64>], &[u64]),
) {
    if row == n.len() {
        if cap.is_none_or(|c| c == cols.as_slice()) {
            visit(table, cols);
        }
        return;
    }
    let allowed: Vec<usize> = tau.types()[row]
        .support()
        .iter()
        .filter(|&&j| j <= ell)
        .map(|&j| (j - 1) as usize)
        .collect();
    let mut entries = vec![0u64; ell as usize];
    distribute(&allowed, 0, n[row], &mut entries, cap, cols, &mut |entries, cols| {
        table.push(entries.to_vec());
        fill_rows(tau, n, ell, cap, row + 1, table, cols, visit);
        table.pop();
    });
}

/// Splits `remaining` over the columns `allowed[k..]` respecting `cap`.
fn distribute(
    allowed: &[usize],
    k: usize,
    remaining: u64,
    entries: &mut Vec<u64>,
    cap: Option<&[u64]>,
    cols: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64], &mut Vec<u64>),
) {
    if k == allowed.len() {
        if remaining == 0 {
            visit(entries, cols);
        }
        return;
    }
    let j = allowed[k];
    let room = cap.map_or(remaining, |c| remaining.min(c[j] - cols[j]));
    for a in 0..=room {
        entries[j] = a;
        cols[j] += a;
        distribute(allowed, k + 1, remaining - a, entries, cap, cols, visit);
        cols[j] -= a;
    }
    entries[j] = 0;
}

/// All τ-compatible contingency tables with margins `(n, c)`; `ℓ = |c|`.
pub fn enumerate_contingency_tables(
    tau: &Tau,
    n: &[u64],
    c: &[u64],
) -> Result<Vec<ContingencyTable>> {
    if n.len() != tau.len() {
        return domain("row margin length must equal the number of edge types");
    }
    if n.iter().sum::<u64>() != c.iter().sum::<u64>() {
        return domain("margins must have equal totals");
    }
    let ell = c.len() as u32;
    let mut out = Vec::new();
    let mut cols = vec![0u64; c.len()];
    fill_rows(tau, n, ell, Some(c), 0, &mut Vec::new(), &mut cols, &mut |t, _| {
        out.push(ContingencyTable {
            entries: t.to_vec(),
            row_margin: n.to_vec(),
            col_margin: c.to_vec(),
        });
    });
    Ok(out)
}

/// `W(c) = Σ_A Π_j multinomial(c_j; a_{1j}, ..., a_{mj})` for every column
/// margin `c` reachable by a τ-compatible table with row margin `n`.
pub fn column_weights(tau: &Tau, n: &[u64], ell: u32) -> BTreeMap<Vec<u64>, BigUint> {
    let mut out: BTreeMap<Vec<u64>, BigUint> = BTreeMap::new();
    let mut cols = vec![0u64; ell as usize];
    fill_rows(tau, n, ell, None, 0, &mut Vec::new(), &mut cols, &mut |table, cols| {
        let mut w = BigUint::one();
        for j in 0..ell as usize {
            let column: Vec<u64> = table.iter().map(|row| row[j]).collect();
            w *= multinomial(&column);
        }
        *out.entry(cols.to_vec()).or_insert_with(BigUint::zero) += w;
    });
    out
}

/// True when every edge fits in the gaps `1..=ℓ` and `β_j ≥ λ_j`.
pub fn is_allowable(g: &TauGraph, beta: &[u64]) -> bool {
    if g.is_empty() {
        return true;
    }
    let ell = beta.len() as u32;
    g.maxv().unwrap() <= ell && g.lambda_vec(ell).iter().zip(beta).all(|(l, b)| b >= l)
}

/// `P_β(G)`: the number of β-extended orderings up to equivalence, 0 when
/// `G` is not β-allowable and 1 for the empty graph.
pub fn count_orderings(g: &TauGraph, beta: &[u64]) -> BigInt {
    if !is_allowable(g, beta) {
        return BigInt::zero();
    }
    if g.is_empty() {
        return BigInt::one();
    }
    let ell = beta.len() as u32;
    let lambda = g.lambda_vec(ell);
    let mut total = BigInt::zero();
    for (c, w) in column_weights(g.tau(), g.counts(), ell) {
        let mut term = BigInt::from(w);
        for j in 0..ell as usize {
            let top = BigInt::from(beta[j]) - BigInt::from(lambda[j]) + BigInt::from(c[j]);
            term *= binomial(&top, c[j]);
        }
        total += term;
    }
    total
}

fn require_long_edge(g: &TauGraph) -> Result<()> {
    if g.mode() != Mode::LongEdge {
        return Err(Error::Unsupported("strict counts need a long-edge graph".into()));
    }
    Ok(())
}

/// Strict β-allowability: β-allowable, and every edge at vertex 0 and at
/// vertex `M + 1 = ℓ` has weight 1.
pub fn is_strictly_allowable(g: &TauGraph, beta: &[u64]) -> Result<bool> {
    require_long_edge(g)?;
    if !is_allowable(g, beta) {
        return Ok(false);
    }
    let last = beta.len() as u32;
    Ok(g.edges()
        .iter()
        .filter(|(t, _)| t.start() == 0 || t.end() == last)
        .all(|(t, _)| t.weight() == 1))
}

/// `P^s_β(G)`, from the definition of strict allowability.
pub fn count_orderings_strict(g: &TauGraph, beta: &[u64]) -> Result<BigInt> {
    if is_strictly_allowable(g, beta)? {
        Ok(count_orderings(g, beta))
    } else {
        Ok(BigInt::zero())
    }
}

/// Whether `M ≥ maxv − ε₁` and `1 ≤ minv + ε₀`, with `M = ℓ − 1`. Always true
/// for the empty graph.
pub fn boundary_ok(g: &TauGraph, beta: &[u64]) -> Result<bool> {
    require_long_edge(g)?;
    if g.is_empty() {
        return Ok(true);
    }
    let m = beta.len() as i64 - 1;
    let right = m >= g.maxv()? as i64 - g.epsilon1()? as i64;
    let left = 1 <= g.minv()? + g.epsilon0()?;
    Ok(right && left)
}

/// `P^s_β(G)` via the boundary criterion: `P_β(G)` when [`boundary_ok`],
/// otherwise 0.
pub fn count_orderings_strict_shortcut(g: &TauGraph, beta: &[u64]) -> Result<BigInt> {
    if boundary_ok(g, beta)? {
        Ok(count_orderings(g, beta))
    } else {
        Ok(BigInt::zero())
    }
}

/// Variables `b1..b_ell`.
pub fn beta_vars(ell: u32) -> Vec<String> {
    MultiPoly::indexed_vars("b", ell as usize)
}

/// Variables `t1..t_ell`.
pub fn t_vars(ell: u32) -> Vec<String> {
    MultiPoly::indexed_vars("t", ell as usize)
}

fn check_ell(tau: &Tau, n: &[u64], ell: u32) -> Result<()> {
    if n.len() != tau.len() {
        return domain("n must have one entry per edge type");
    }
    if ell < tau.maxv() {
        return domain(format!("ℓ = {ell} is below maxv(τ) = {}", tau.maxv()));
    }
    Ok(())
}

/// `Σ_c W(c) Π_j C(x_j + top(j, c_j), c_j)` in the variables `vars`.
fn contingency_poly(
    tau: &Tau,
    n: &[u64],
    ell: u32,
    vars: &[String],
    top: impl Fn(usize, u64) -> i64,
) -> MultiPoly {
    let mut total = MultiPoly::zero(vars);
    for (c, w) in column_weights(tau, n, ell) {
        let mut term = MultiPoly::constant(vars, Rational::from_integer(BigInt::from(w)));
        for j in 0..ell as usize {
            if c[j] == 0 {
                continue;
            }
            let x = &MultiPoly::var(vars, j) + &MultiPoly::scalar(int(top(j, c[j])));
            term = &term * &binomial_poly(&x, c[j] as u32);
        }
        total = &total + &term;
    }
    total
}

/// `p_τ(n, β)` in variables `b1..b_ell`: agrees with `P_β(G_τ(n))` for all
/// `β ≥ λ̄`.
pub fn p_poly(tau: &Tau, n: &[u64], ell: u32) -> Result<MultiPoly> {
    check_ell(tau, n, ell)?;
    let lambda = tau.lambda_vec(n, ell);
    Ok(contingency_poly(tau, n, ell, &beta_vars(ell), |j, c| c as i64 - lambda[j] as i64))
}

/// `s_τ(n, t)` in variables `t1..t_ell`: the number of words in `S_τ(n, t)`.
pub fn s_poly(tau: &Tau, n: &[u64], ell: u32) -> Result<MultiPoly> {
    check_ell(tau, n, ell)?;
    let lambda = tau.lambda_vec(n, ell);
    Ok(contingency_poly(tau, n, ell, &t_vars(ell), |j, _| lambda[j] as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::EdgeType;
    use std::collections::HashSet;

    /// Brute-force `P_β`: every assignment of edges to gaps, then every
    /// distinct word of labels in each gap (label = type index, unweighted
    /// edges labelled `usize::MAX`).
    fn brute_orderings(g: &TauGraph, beta: &[u64]) -> u64 {
        if !is_allowable(g, beta) {
            return 0;
        }
        let ell = beta.len();
        let lambda = g.lambda_vec(ell as u32);
        let mut edges: Vec<(usize, Vec<usize>)> = Vec::new();
        for (i, (t, &c)) in g.tau().types().iter().zip(g.counts()).enumerate() {
            for _ in 0..c {
                edges.push((i, t.support().iter().map(|&j| j as usize - 1).collect()));
            }
        }
        let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
        let mut gaps: Vec<Vec<usize>> = (0..ell)
            .map(|j| vec![usize::MAX; (beta[j] - lambda[j]) as usize])
            .collect();
        fn assign(
            edges: &[(usize, Vec<usize>)],
            k: usize,
            gaps: &mut Vec<Vec<usize>>,
            seen: &mut HashSet<Vec<Vec<usize>>>,
        ) {
            if k == edges.len() {
                let mut per_gap: Vec<Vec<Vec<usize>>> = Vec::new();
                for g in gaps.iter() {
                    let mut perms = HashSet::new();
                    permute(&mut g.clone(), 0, &mut perms);
                    per_gap.push(perms.into_iter().collect());
                }
                let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![]];
                for options in per_gap {
                    let mut next = Vec::new();
                    for prefix in &acc {
                        for o in &options {
                            let mut p = prefix.clone();
                            p.push(o.clone());
                            next.push(p);
                        }
                    }
                    acc = next;
                }
                seen.extend(acc);
                return;
            }
            for &j in &edges[k].1 {
                gaps[j].push(edges[k].0);
                assign(edges, k + 1, gaps, seen);
                gaps[j].pop();
            }
        }
        fn permute(v: &mut Vec<usize>, k: usize, out: &mut HashSet<Vec<usize>>) {
            if k == v.len() {
                out.insert(v.clone());
                return;
            }
            for i in k..v.len() {
                v.swap(k, i);
                permute(v, k + 1, out);
                v.swap(k, i);
            }
        }
        assign(&edges, 0, &mut gaps, &mut seen);
        seen.len() as u64
    }

    fn ge(edges: &[(u32, u32, u32)]) -> TauGraph {
        TauGraph::from_edges(edges).unwrap()
    }

    #[test]
    fn count_examples() {
        let g = ge(&[(0, 1, 2), (0, 1, 2)]);
        assert_eq!(count_orderings(&g, &[5]), BigInt::from(3));
        assert_eq!(count_orderings(&g, &[3]), BigInt::from(0));
        let g1 = ge(&[(0, 1, 2)]);
        assert_eq!(count_orderings(&g1, &[2]), BigInt::from(1));
        assert_eq!(count_orderings(&TauGraph::empty(), &[0, 0]), BigInt::from(1));
        assert_eq!(count_orderings(&ge(&[(0, 2, 1)]), &[1]), BigInt::from(0));
    }

    #[test]
    fn strict_examples() {
        let g1 = ge(&[(0, 1, 2), (0, 2, 1)]);
        for ell in 1..6u32 {
            let beta: Vec<u64> = (0..ell as u64).map(|j| j + 4).collect();
            assert_eq!(count_orderings_strict(&g1, &beta).unwrap(), BigInt::zero());
        }
        let g2 = g1.shift(3);
        for ell in 1..8u32 {
            let beta: Vec<u64> = vec![3; ell as usize];
            let strict = count_orderings_strict(&g2, &beta).unwrap();
            if ell >= 5 {
                assert_eq!(strict, count_orderings(&g2, &beta));
                assert!(strict > BigInt::zero());
            } else {
                assert_eq!(strict, BigInt::zero());
            }
        }
        assert_eq!(count_orderings_strict(&TauGraph::empty(), &[0]).unwrap(), BigInt::one());
        let general = TauGraph::new(
            Tau::new(vec![EdgeType::interval(0, 1, 1).unwrap()], Mode::General).unwrap(),
            vec![1],
        )
        .unwrap();
        assert!(matches!(count_orderings_strict(&general, &[1]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn contingency_examples() {
        let tau = Tau::long_edge(&[(0, 2, 1)]).unwrap();
        let t = enumerate_contingency_tables(&tau, &[2], &[1, 1]).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].entries, vec![vec![1, 1]]);
        assert!(enumerate_contingency_tables(&tau, &[2], &[1]).is_err());
        let tau2 = Tau::long_edge(&[(0, 1, 2), (0, 2, 1)]).unwrap();
        let t = enumerate_contingency_tables(&tau2, &[1, 1], &[2, 0]).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].entries, vec![vec![1, 0], vec![1, 0]]);
    }

    #[test]
    fn p_poly_examples() {
        let tau = Tau::long_edge(&[(0, 1, 2)]).unwrap();
        let p = p_poly(&tau, &[2], 1).unwrap();
        let b = beta_vars(1);
        let expected = binomial_poly(&(&MultiPoly::var(&b, 0) - &MultiPoly::scalar(int(2))), 2);
        assert_eq!(p, expected);
        assert_eq!(p_poly(&tau, &[0], 1).unwrap().as_constant(), Some(int(1)));
        let tau = Tau::long_edge(&[(0, 2, 1)]).unwrap();
        let b = beta_vars(2);
        assert_eq!(
            p_poly(&tau, &[1], 2).unwrap(),
            &MultiPoly::var(&b, 0) + &MultiPoly::var(&b, 1)
        );
        assert!(p_poly(&tau, &[1], 1).is_err());
    }

    #[test]
    fn s_poly_examples() {
        let tau = Tau::long_edge(&[(0, 1, 2)]).unwrap();
        assert_eq!(s_poly(&tau, &[0], 1).unwrap().as_constant(), Some(int(1)));
        for r in 1..=3u32 {
            if r == 1 {
                continue;
            }
            let tau = Tau::long_edge(&[(0, 1, r)]).unwrap();
            for n in 0..5u64 {
                let s = s_poly(&tau, &[n], 1).unwrap();
                let expect = crate::algebra::binomial_u(r as u64 * n, n);
                assert_eq!(s.eval_int(&[0]).unwrap(), Rational::from_integer(expect.into()));
            }
        }
    }

    fn small_taus() -> Vec<Tau> {
        // Every long-edge τ with one or two types, endpoints ≤ 3, weight ≤ 2.
        let mut types = Vec::new();
        for a in 0..3u32 {
            for b in a + 1..=3 {
                for r in 1..=2 {
                    if let Ok(t) = EdgeType::interval(a, b, r) {
                        if t.is_long_edge() {
                            types.push(t);
                        }
                    }
                }
            }
        }
        let mut out = Vec::new();
        for i in 0..types.len() {
            out.push(Tau::new(vec![types[i].clone()], Mode::LongEdge).unwrap());
            for k in i + 1..types.len() {
                out.push(Tau::new(vec![types[i].clone(), types[k].clone()], Mode::LongEdge).unwrap());
            }
        }
        out
    }

    fn compositions(m: usize, max_total: u64) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..m {
            let mut next = Vec::new();
            for p in &out {
                let used: u64 = p.iter().sum();
                for v in 0..=max_total - used {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn formula_matches_brute_force() {
        for tau in small_taus() {
            for n in compositions(tau.len(), 3) {
                let g = TauGraph::new(tau.clone(), n.clone()).unwrap();
                let ell = tau.maxv();
                let lam = g.lambda_vec(ell);
                for extra in 0..2u64 {
                    let beta: Vec<u64> = lam.iter().map(|l| l + extra).collect();
                    assert_eq!(
                        count_orderings(&g, &beta),
                        BigInt::from(brute_orderings(&g, &beta)),
                        "{g} at {beta:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn strict_definition_matches_shortcut() {
        for tau in small_taus() {
            for n in compositions(tau.len(), 2) {
                let g = TauGraph::new(tau.clone(), n).unwrap();
                for ell in 1..=5u32 {
                    for base in 0..4u64 {
                        let beta: Vec<u64> = (0..ell as u64).map(|j| base + j).collect();
                        assert_eq!(
                            count_orderings_strict(&g, &beta).unwrap(),
                            count_orderings_strict_shortcut(&g, &beta).unwrap(),
                            "{g} at {beta:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn polynomial_agrees_above_lambda_bar() {
        for tau in small_taus() {
            for n in compositions(tau.len(), 3) {
                let g = TauGraph::new(tau.clone(), n.clone()).unwrap();
                let ell = tau.maxv();
                let p = p_poly(&tau, &n, ell).unwrap();
                assert_eq!(p.total_degree().unwrap_or(0) as u64, n.iter().sum::<u64>());
                let lb = g.lambda_bar_vec(ell);
                let la = g.lambda_vec(ell);
                let shell = compositions(ell as usize, 2);
                for off in shell {
                    let beta: Vec<u64> = lb.iter().zip(&off).map(|(a, b)| a + b).collect();
                    let pt: Vec<i64> = beta.iter().map(|&x| x as i64).collect();
                    let count = count_orderings(&g, &beta);
                    assert_eq!(p.eval_int(&pt).unwrap(), Rational::from_integer(count.clone()));
                    let allowable = beta.iter().zip(&la).all(|(b, l)| b >= l);
                    assert_eq!(count.is_zero(), !allowable);
                }
            }
        }
    }

    #[test]
    fn reciprocity_small() {
        let tau = Tau::long_edge(&[(0, 1, 2)]).unwrap();
        let p = p_poly(&tau, &[2], 1).unwrap();
        let s = s_poly(&tau, &[2], 1).unwrap();
        let b = beta_vars(1);
        let image = &(-&MultiPoly::var(&b, 0)) - &MultiPoly::scalar(int(1));
        assert_eq!(p, s.compose(&[image]).unwrap());
    }
}
