//! Severi degrees `N^{d,δ}`, their logarithmic counterparts `Q^{d,δ}`, the
//! polynomials `Q_Γ`, `Q_δ`, `N_δ` and the coefficients of `A₁`, `A₂`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::rational::as_integer;
use crate::algebra::{binomial_poly, int, rational, series_exp, MultiPoly, Rational, TruncSeries};
use crate::counting::count_orderings_strict;
use crate::enumerate::{graphs_of_cogenus_bounded, templates_of_cogenus};
use crate::error::{Error, Result};
use crate::graphs::Template;
use crate::phi::{k_min, linear_form, phi_at_shift, phi_value, v_d, v_k};

/// A polynomial in `d` together with the smallest `d` from which it gives
/// exact values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPolynomial {
    pub poly: MultiPoly,
    pub threshold: u64,
}

pub fn d_var() -> Vec<String> {
    vec!["d".to_string()]
}

impl QPolynomial {
    pub fn eval(&self, d: i64) -> Rational {
        self.poly.eval_int(&[d]).unwrap()
    }

    /// Coefficients `[c0, c1, c2, ..]`.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.poly.univariate_coeffs()
    }

    pub fn degree(&self) -> u32 {
        self.poly.total_degree().unwrap_or(0)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}  (d >= {})", self.poly, self.threshold)
    }
}

impl Serialize for QPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QPolynomial", 3)?;
        st.serialize_field("poly", &self.poly.to_string())?;
        let cs: Vec<String> = self.coeffs().iter().map(|c| c.to_string()).collect();
        st.serialize_field("coeffs", &cs)?;
        st.serialize_field("threshold", &self.threshold)?;
        st.end()
    }
}

fn mu(t: &Template) -> Rational {
    Rational::from_integer(BigInt::from(t.multiplicity()))
}

/// Upper summation limit `d + ε₁ − l`, negative when the sum is empty.
fn upper(t: &Template, d: u64) -> i64 {
    d as i64 + t.eps1() as i64 - t.len() as i64
}

/// `Q^{d,Γ} = μ Σ_{k=1}^{d+ε₁−l} Φ_{v(k,l)}(Γ)`.
pub fn q_d_gamma(t: &Template, d: u64) -> Result<Rational> {
    let top = upper(t, d);
    let mut acc = Rational::zero();
    for k in 1..=top.max(0) as u64 {
        acc += phi_at_shift(t, k)?;
    }
    Ok(mu(t) * acc)
}

/// `Q_Γ(d)`: the prefix below `k_min` plus the Faulhaber sum of the linear
/// form from `k_min` to `d + ε₁ − l`.
pub fn q_poly_gamma(t: &Template) -> Result<QPolynomial> {
    let f = linear_form(t)?;
    let km = k_min(t);
    let mut prefix = Rational::zero();
    for k in 1..km {
        prefix += phi_value(t, &v_k(k, t.len()))?;
    }
    let dv = d_var();
    let y = &MultiPoly::var(&dv, 0)
        + &MultiPoly::scalar(int(t.eps1() as i64 - t.len() as i64));
    let a = km as i64;
    // Σ_{k=a}^{y} k = C(y+1, 2) − C(a, 2)
    let sum_k = &binomial_poly(&(&y + &MultiPoly::scalar(int(1))), 2)
        - &MultiPoly::scalar(rational(a * (a - 1), 2));
    let count = &y - &MultiPoly::scalar(int(a - 1));
    let body = &sum_k.scale(&f.zeta0()) + &count.scale(&(f.zeta1() + f.eta0()));
    let poly = (&body + &MultiPoly::scalar(prefix)).scale(&mu(t));
    let threshold = (km as i64 + t.len() as i64 - t.eps1() as i64 - 1).max(1) as u64;
    Ok(QPolynomial { poly: poly.lift_to(&dv), threshold })
}

/// `Q_δ(d) = Σ_Γ Q_Γ(d)` over templates of cogenus `δ`.
pub fn q_poly_delta(delta: u64) -> Result<QPolynomial> {
    let dv = d_var();
    let mut poly = MultiPoly::zero(&dv);
    let mut threshold = 1;
    for t in templates_of_cogenus(delta).iter() {
        let q = q_poly_gamma(t)?;
        poly = &poly + &q.poly;
        threshold = threshold.max(q.threshold);
    }
    if threshold > delta.max(1) {
        return Err(Error::InternalInvariant(format!(
            "Q_{delta} threshold {threshold} exceeds δ"
        )));
    }
    Ok(QPolynomial { poly: poly.lift_to(&dv), threshold })
}

/// `Q^{d,δ}`, exact for every `d ≥ 1`.
pub fn q_value(delta: u64, d: u64) -> Result<Rational> {
    let ts = templates_of_cogenus(delta);
    let parts: Result<Vec<Rational>> = ts.par_iter().map(|t| q_d_gamma(t, d)).collect();
    Ok(parts?.into_iter().sum())
}

/// `N^{d,δ} = Σ μ(G) P^s_{v(d)}(G)` over long-edge graphs of cogenus `δ`
/// fitting on the vertices `0..=d+1`.
pub fn severi_direct(d: u64, delta: u64) -> Result<BigInt> {
    let beta = v_d(d);
    let graphs = graphs_of_cogenus_bounded(delta, d as u32 + 1);
    let parts: Result<Vec<BigInt>> = graphs
        .par_iter()
        .map(|g| Ok(BigInt::from(g.multiplicity()) * count_orderings_strict(g, &beta)?))
        .collect();
    Ok(parts?.into_iter().sum())
}

fn t_series(coeffs: impl Fn(u64) -> Result<Rational>, delta: u64) -> Result<TruncSeries<Rational>> {
    let tv = vec!["t".to_string()];
    let mut s = TruncSeries::zero(&tv, &[delta as u32]);
    for k in 1..=delta {
        s.set(&[k as u32], coeffs(k)?);
    }
    Ok(s)
}

/// `[t^δ] exp(Σ_{δ'} Q^{d,δ'} t^{δ'})`, checked to be an integer.
pub fn severi_via_exp(d: u64, delta: u64) -> Result<BigInt> {
    let s = t_series(|k| q_value(k, d), delta)?;
    let n = series_exp(&s)?.coeff(&[delta as u32]);
    as_integer(&n).ok_or_else(|| {
        Error::InternalInvariant(format!("N^{{{d},{delta}}} = {n} is not an integer"))
    })
}

/// `N_δ(d)`: the `t^δ` coefficient of `exp(Σ Q_δ'(d) t^δ')`.
pub fn node_polynomial(delta: u64) -> Result<QPolynomial> {
    let tv = vec!["t".to_string()];
    let dv = d_var();
    let mut s: TruncSeries<MultiPoly> = TruncSeries::zero(&tv, &[delta as u32]);
    let mut threshold = 1;
    for k in 1..=delta {
        let q = q_poly_delta(k)?;
        threshold = threshold.max(q.threshold);
        s.set(&[k as u32], q.poly);
    }
    let poly = series_exp(&s)?.coeff(&[delta as u32]);
    Ok(QPolynomial { poly: poly.lift_to(&dv), threshold })
}

/// `[t^δ] A₁ = ½ Σ μ ζ⁰`.
pub fn a1_coefficient(delta: u64) -> Result<Rational> {
    let mut acc = Rational::zero();
    for t in templates_of_cogenus(delta).iter() {
        acc += mu(t) * linear_form(t)?.zeta0();
    }
    Ok(acc / int(2))
}

/// `[t^δ] A₂` by `⅓ Σ μ (½(l − ε₀ − ε₁) ζ⁰ − η₀)`.
pub fn a2_from_statistics(delta: u64) -> Result<Rational> {
    let mut acc = Rational::zero();
    for t in templates_of_cogenus(delta).iter() {
        let f = linear_form(t)?;
        let span = int(t.len() as i64 - t.eps0() as i64 - t.eps1() as i64);
        acc += mu(t) * (span * f.zeta0() / int(2) - f.eta0());
    }
    Ok(acc / int(3))
}

/// `[t^δ] A₂` by `−½ Σ μ η₀`.
pub fn a2_from_eta(delta: u64) -> Result<Rational> {
    let mut acc = Rational::zero();
    for t in templates_of_cogenus(delta).iter() {
        acc += mu(t) * linear_form(t)?.eta0();
    }
    Ok(-acc / int(2))
}

/// `[t^δ] A₂`, computed both ways and required to agree.
pub fn a2_coefficient(delta: u64) -> Result<Rational> {
    let a = a2_from_statistics(delta)?;
    let b = a2_from_eta(delta)?;
    if a != b {
        return Err(Error::InternalInvariant(format!(
            "A₂ coefficient at δ = {delta}: {a} from statistics, {b} from η₀"
        )));
    }
    Ok(a)
}

/// `([t^δ]A₁, [t^δ]A₂)` for `δ = 1..=order`.
pub fn a_series(order: u64) -> Result<Vec<(Rational, Rational)>> {
    (1..=order).map(|k| Ok((a1_coefficient(k)?, a2_coefficient(k)?))).collect()
}
