//! Logarithmic statistics `Φ_β`, `Φ^s_β`, the polynomial `φ_τ(n, β)` and the
//! linear form of a template with its derived statistics.
//!
//! All three come from one kernel: the `x^n` coefficient of the logarithm of
//! `Σ_{n' ≤ n} P(n') x^{n'}`, with `P` numeric or polynomial in β.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{int, series_log, MultiPoly, Rational, TruncSeries};
use crate::counting::{
    beta_vars, boundary_ok, count_orderings, count_orderings_strict, p_poly,
};
use crate::error::{Error, Result};
use crate::graphs::{Tau, TauGraph, Template};

/// `v(d) = (0, 1, ..., d)`.
pub fn v_d(d: u64) -> Vec<u64> {
    (0..=d).collect()
}

/// `v(k, ℓ) = (k, k+1, ..., k+ℓ−1)`.
pub fn v_k(k: u64, ell: u32) -> Vec<u64> {
    (k..k + ell as u64).collect()
}

fn series_vars(m: usize) -> Vec<String> {
    MultiPoly::indexed_vars("x", m)
}

fn bound_of(n: &[u64]) -> Vec<u32> {
    n.iter().map(|&c| c as u32).collect()
}

/// `[x^n] log Σ_{n' ≤ n} f(n') x^{n'}` for numeric `f` with `f(0) = 1`.
fn log_coefficient(n: &[u64], f: impl FnMut(&[u32]) -> Rational) -> Result<Rational> {
    if n.iter().all(|&c| c == 0) {
        return Ok(Rational::zero());
    }
    let b = bound_of(n);
    let s = TruncSeries::from_fn(&series_vars(n.len()), &b, f);
    Ok(series_log(&s)?.coeff(&b))
}

fn counts_u64(n: &[u32]) -> Vec<u64> {
    n.iter().map(|&c| c as u64).collect()
}

/// `Φ_β(G)` for any τ-graph; 0 for the empty graph.
pub fn phi_value(g: &TauGraph, beta: &[u64]) -> Result<Rational> {
    log_coefficient(g.counts(), |np| {
        let sub = g.with_counts(counts_u64(np)).unwrap();
        Rational::from_integer(count_orderings(&sub, beta))
    })
}

/// `Φ^s_β(G)` from its definition: the same logarithm with `P^s` in place of
/// `P`. Long-edge graphs only.
pub fn phi_value_strict(g: &TauGraph, beta: &[u64]) -> Result<Rational> {
    let mut err = None;
    let v = log_coefficient(g.counts(), |np| {
        let sub = g.with_counts(counts_u64(np)).unwrap();
        match count_orderings_strict(&sub, beta) {
            Ok(c) => Rational::from_integer(c),
            Err(e) => {
                err = Some(e);
                Rational::zero()
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => v,
    }
}

/// `Φ^s_β(G)` as `Φ_β(G)` or 0 by the boundary criterion.
pub fn phi_value_strict_shortcut(g: &TauGraph, beta: &[u64]) -> Result<Rational> {
    if boundary_ok(g, beta)? {
        phi_value(g, beta)
    } else {
        Ok(Rational::zero())
    }
}

/// `φ_τ(n, β)` in `b1..b_ell`. Its total degree is at most one; anything
/// else is reported as an internal invariant violation.
pub fn phi_poly(tau: &Tau, n: &[u64], ell: u32) -> Result<MultiPoly> {
    let vars = beta_vars(ell);
    if n.iter().all(|&c| c == 0) {
        p_poly(tau, n, ell)?;
        return Ok(MultiPoly::zero(&vars));
    }
    let b = bound_of(n);
    let mut err = None;
    let s = TruncSeries::from_fn(&series_vars(n.len()), &b, |np| {
        match p_poly(tau, &counts_u64(np), ell) {
            Ok(p) => p,
            Err(e) => {
                err = Some(e);
                MultiPoly::zero(&vars)
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let phi = series_log(&s)?.coeff(&b);
    let phi = if phi.vars().is_empty() {
        MultiPoly::constant(&vars, phi.as_constant().unwrap())
    } else {
        phi
    };
    if phi.total_degree().unwrap_or(0) > 1 {
        return Err(Error::InternalInvariant(format!(
            "φ for n = {n:?} has degree {}: {phi}",
            phi.total_degree().unwrap()
        )));
    }
    Ok(phi)
}

/// `Φ(Γ, β) = a₀ + Σ a_j β_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LinearForm {
    #[serde(serialize_with = "crate::algebra::rational::ser_rational")]
    pub a0: Rational,
    #[serde(serialize_with = "crate::algebra::rational::ser_rationals")]
    pub coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn from_poly(p: &MultiPoly) -> Result<Self> {
        let (a0, coeffs) = p.affine_parts().ok_or_else(|| {
            Error::InternalInvariant(format!("{p} is not affine"))
        })?;
        Ok(LinearForm { a0, coeffs })
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::affine(&beta_vars(self.coeffs.len() as u32), &self.a0, &self.coeffs)
    }

    pub fn ell(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn eval(&self, beta: &[u64]) -> Rational {
        self.coeffs
            .iter()
            .zip(beta)
            .fold(self.a0.clone(), |acc, (a, &b)| acc + a * int(b))
    }

    /// `ζ⁰ = Σ a_j`.
    pub fn zeta0(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    /// `ζ¹ = Σ (j − 1) a_j`.
    pub fn zeta1(&self) -> Rational {
        self.coeffs.iter().enumerate().map(|(j, a)| a * int(j as i64)).sum()
    }

    /// `η₀ = a₀`.
    pub fn eta0(&self) -> Rational {
        self.a0.clone()
    }

    /// `Φ(Γ, v(k, ℓ)) = ζ⁰ k + ζ¹ + η₀` as a polynomial in `k`.
    pub fn along_shift(&self) -> MultiPoly {
        let k = vec!["k".to_string()];
        &(&MultiPoly::var(&k, 0).scale(&self.zeta0())
            + &MultiPoly::scalar(self.zeta1()))
            + &MultiPoly::scalar(self.eta0())
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_poly().fmt(f)
    }
}

fn form_memo() -> &'static Mutex<HashMap<Template, LinearForm>> {
    static MEMO: OnceLock<Mutex<HashMap<Template, LinearForm>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The linear form of a template over `β_1..β_{l(Γ)}`.
pub fn linear_form(t: &Template) -> Result<LinearForm> {
    if let Some(f) = form_memo().lock().unwrap().get(t) {
        return Ok(f.clone());
    }
    let p = phi_poly(t.tau(), t.counts(), t.len())?;
    let f = LinearForm::from_poly(&p)?;
    form_memo().lock().unwrap().insert(t.clone(), f.clone());
    Ok(f)
}

pub fn zeta0(t: &Template) -> Result<Rational> {
    Ok(linear_form(t)?.zeta0())
}

pub fn zeta1(t: &Template) -> Result<Rational> {
    Ok(linear_form(t)?.zeta1())
}

pub fn eta0(t: &Template) -> Result<Rational> {
    Ok(linear_form(t)?.eta0())
}

/// `k_min = max(1, max_j(λ̄_j − j + 1))`.
pub fn k_min(t: &Template) -> u64 {
    let lb = t.lambda_bar_vec(t.len());
    lb.iter()
        .enumerate()
        .map(|(j, &l)| l as i64 - j as i64)
        .max()
        .unwrap_or(1)
        .max(1) as u64
}

/// `Φ_{v(k, l)}(Γ)`: the linear form for `k ≥ k_min`, the definition below.
pub fn phi_at_shift(t: &Template, k: u64) -> Result<Rational> {
    let beta = v_k(k, t.len());
    if k >= k_min(t) {
        Ok(linear_form(t)?.eval(&beta))
    } else {
        phi_value(t, &beta)
    }
}
