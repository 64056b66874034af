//! Multivariate formal power series truncated to a coefficient box.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::rational::{int, Rational};
use crate::error::{domain, Result};

/// Coefficient ring for [`TruncSeries`]: the rationals, or polynomials over
/// them. Division is only ever by nonzero integers, via [`Coefficient::scaled`].
pub trait Coefficient: Clone + std::fmt::Debug + PartialEq {
    fn zero_coeff() -> Self;
    fn one_coeff() -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;
    fn from_rational(c: Rational) -> Self;
}

impl Coefficient for Rational {
    fn zero_coeff() -> Self {
        Zero::zero()
    }
    fn one_coeff() -> Self {
        One::one()
    }
    fn is_zero_coeff(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: &Rational) -> Self {
        self * c
    }
    fn from_rational(c: Rational) -> Self {
        c
    }
}

impl Coefficient for MultiPoly {
    fn zero_coeff() -> Self {
        MultiPoly::scalar(Rational::zero())
    }
    fn one_coeff() -> Self {
        MultiPoly::scalar(Rational::one())
    }
    fn is_zero_coeff(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn from_rational(c: Rational) -> Self {
        MultiPoly::scalar(c)
    }
}

/// A power series in `x_1..x_m` keeping only the coefficients of `x^n` with
/// `n <= bound` componentwise.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C: Coefficient> {
    vars: Vec<String>,
    bound: Vec<u32>,
    coeffs: BTreeMap<Vec<u32>, C>,
}

/// All `n <= bound`, in lexicographic order. Every `k <= n` with `k != n`
/// precedes `n`, which the log/exp recurrences rely on.
pub fn box_indices(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(bound.len())];
    for &b in bound {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for prefix in &out {
            for v in 0..=b {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// All `k <= n` componentwise, in lexicographic order.
pub fn sub_indices(n: &[u32]) -> Vec<Vec<u32>> {
    box_indices(n)
}

impl<C: Coefficient> TruncSeries<C> {
    pub fn zero(vars: &[String], bound: &[u32]) -> Self {
        assert_eq!(vars.len(), bound.len(), "one bound per variable");
        TruncSeries { vars: vars.to_vec(), bound: bound.to_vec(), coeffs: BTreeMap::new() }
    }

    pub fn one(vars: &[String], bound: &[u32]) -> Self {
        let mut s = Self::zero(vars, bound);
        s.set(&vec![0; bound.len()], C::one_coeff());
        s
    }

    /// Builds a series from `f(n)` for every `n` in the box.
    pub fn from_fn(vars: &[String], bound: &[u32], mut f: impl FnMut(&[u32]) -> C) -> Self {
        let mut s = Self::zero(vars, bound);
        for n in box_indices(bound) {
            let c = f(&n);
            s.set(&n, c);
        }
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn bound(&self) -> &[u32] {
        &self.bound
    }

    fn in_box(&self, n: &[u32]) -> bool {
        n.len() == self.bound.len() && n.iter().zip(&self.bound).all(|(a, b)| a <= b)
    }

    /// Sets a coefficient; indices outside the box are discarded.
    pub fn set(&mut self, n: &[u32], c: C) {
        if !self.in_box(n) {
            return;
        }
        if c.is_zero_coeff() {
            self.coeffs.remove(n);
        } else {
            self.coeffs.insert(n.to_vec(), c);
        }
    }

    pub fn coeff(&self, n: &[u32]) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero_coeff)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.bound.len()])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.coeffs.iter()
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "series variable mismatch");
        assert_eq!(self.bound, other.bound, "series bound mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (n, c) in &other.coeffs {
            let v = out.coeff(n).plus(c);
            out.set(n, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.vars, &self.bound);
        for (n, a) in &self.coeffs {
            out.set(n, a.scaled(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(&self.vars, &self.bound);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let n: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if !out.in_box(&n) {
                    continue;
                }
                let v = out.coeff(&n).plus(&ca.times(cb));
                out.set(&n, v);
            }
        }
        out
    }

    /// Natural logarithm. The constant term must be exactly 1.
    ///
    /// Uses the Euler operator `E = Σ x_i ∂_i`: from `E(log s)·s = E(s)`,
    /// `|n| L_n = |n| s_n − Σ_{0<k<n} |k| L_k s_{n−k}`.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().minus(&C::one_coeff()).is_zero_coeff() {
            return domain("series_log requires constant term 1");
        }
        let mut out = Self::zero(&self.vars, &self.bound);
        for n in box_indices(&self.bound) {
            let deg: u32 = n.iter().sum();
            if deg == 0 {
                continue;
            }
            let mut acc = self.coeff(&n).scaled(&int(deg));
            for k in sub_indices(&n) {
                let dk: u32 = k.iter().sum();
                if dk == 0 || k == n {
                    continue;
                }
                let lk = match out.coeffs.get(&k) {
                    Some(c) => c,
                    None => continue,
                };
                let rest: Vec<u32> = n.iter().zip(&k).map(|(a, b)| a - b).collect();
                let sr = match self.coeffs.get(&rest) {
                    Some(c) => c,
                    None => continue,
                };
                acc = acc.minus(&lk.times(sr).scaled(&int(dk)));
            }
            out.set(&n, acc.scaled(&Rational::new(1.into(), deg.into())));
        }
        Ok(out)
    }

    /// Exponential. The constant term must be exactly 0.
    ///
    /// `|n| e_n = Σ_{0<k<=n} |k| s_k e_{n−k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero_coeff() {
            return domain("series_exp requires constant term 0");
        }
        let mut out = Self::one(&self.vars, &self.bound);
        for n in box_indices(&self.bound) {
            let deg: u32 = n.iter().sum();
            if deg == 0 {
                continue;
            }
            let mut acc = C::zero_coeff();
            for k in sub_indices(&n) {
                let dk: u32 = k.iter().sum();
                if dk == 0 {
                    continue;
                }
                let sk = match self.coeffs.get(&k) {
                    Some(c) => c,
                    None => continue,
                };
                let rest: Vec<u32> = n.iter().zip(&k).map(|(a, b)| a - b).collect();
                let er = match out.coeffs.get(&rest) {
                    Some(c) => c,
                    None => continue,
                };
                acc = acc.plus(&sk.times(er).scaled(&int(dk)));
            }
            out.set(&n, acc.scaled(&Rational::new(1.into(), deg.into())));
        }
        Ok(out)
    }

    /// Integer power. Negative exponents need constant term 1 and go through
    /// `exp(k log s)`.
    pub fn pow_int(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            let mut acc = Self::one(&self.vars, &self.bound);
            for _ in 0..k {
                acc = acc.mul(self);
            }
            Ok(acc)
        } else {
            self.log()?.scale(&int(k)).exp()
        }
    }
}

pub fn series_log<C: Coefficient>(s: &TruncSeries<C>) -> Result<TruncSeries<C>> {
    s.log()
}

pub fn series_exp<C: Coefficient>(s: &TruncSeries<C>) -> Result<TruncSeries<C>> {
    s.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rational;
    use proptest::prelude::*;

    fn x() -> Vec<String> {
        vec!["x".to_string()]
    }

    fn uni(coeffs: &[Rational], bound: u32) -> TruncSeries<Rational> {
        let mut s = TruncSeries::zero(&x(), &[bound]);
        for (i, c) in coeffs.iter().enumerate() {
            s.set(&[i as u32], c.clone());
        }
        s
    }

    /// Σ_{i≥1} (−1)^{i+1}/i (s−1)^i, summed until the powers leave the box.
    fn naive_log<C: Coefficient>(s: &TruncSeries<C>) -> TruncSeries<C> {
        let one = TruncSeries::one(s.vars(), s.bound());
        let u = s.sub(&one);
        let mut out = TruncSeries::zero(s.vars(), s.bound());
        let mut power = one.clone();
        let max_deg: u32 = s.bound().iter().sum();
        for i in 1..=max_deg.max(1) {
            power = power.mul(&u);
            let sign = if i % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&rational(sign, i as i64)));
        }
        out
    }

    #[test]
    fn mercator_series() {
        let s = uni(&[int(1), int(1)], 3);
        let l = series_log(&s).unwrap();
        assert_eq!(l, uni(&[int(0), int(1), rational(-1, 2), rational(1, 3)], 3));
    }

    #[test]
    fn log_of_one_is_zero() {
        let s = uni(&[int(1)], 3);
        assert!(series_log(&s).unwrap().iter().next().is_none());
    }

    #[test]
    fn exp_examples() {
        let z = uni(&[], 3);
        assert_eq!(series_exp(&z).unwrap(), uni(&[int(1)], 3));
        let s = uni(&[int(0), int(1)], 3);
        let e = series_exp(&s).unwrap();
        assert_eq!(e, uni(&[int(1), int(1), rational(1, 2), rational(1, 6)], 3));
    }

    #[test]
    fn exp_log_roundtrip_fixed() {
        let s = uni(&[int(1), int(3), int(5)], 4);
        let back = series_exp(&series_log(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn domain_errors() {
        assert!(series_log(&uni(&[int(2)], 2)).is_err());
        assert!(series_exp(&uni(&[int(1)], 2)).is_err());
    }

    #[test]
    fn polynomial_coefficients() {
        let d = vec!["d".to_string()];
        let dv = MultiPoly::var(&d, 0);
        let q1 = (&dv - &MultiPoly::scalar(int(1))).pow(2).scale(&int(3));
        let t = vec!["t".to_string()];
        let mut s: TruncSeries<MultiPoly> = TruncSeries::zero(&t, &[1]);
        s.set(&[1], q1.clone());
        let e = series_exp(&s).unwrap();
        assert_eq!(e.coeff(&[1]), q1);
        assert_eq!(e.constant_term(), MultiPoly::scalar(int(1)));
    }

    #[test]
    fn truncation_discards_outside_box() {
        let mut s: TruncSeries<Rational> = TruncSeries::zero(&x(), &[2]);
        s.set(&[3], int(5));
        assert!(s.iter().next().is_none());
        let a = uni(&[int(0), int(0), int(1)], 2);
        assert!(a.mul(&a).iter().next().is_none());
    }

    #[test]
    fn negative_power_inverts() {
        let s = uni(&[int(1), int(2), int(-1)], 5);
        let inv = s.pow_int(-1).unwrap();
        assert_eq!(inv.mul(&s), uni(&[int(1)], 5));
    }

    fn arb_bivariate(constant: i64) -> impl Strategy<Value = TruncSeries<Rational>> {
        prop::collection::vec((-4i64..5, 1i64..4), 9).prop_map(move |cs| {
            let vars = vec!["x1".to_string(), "x2".to_string()];
            let mut s = TruncSeries::zero(&vars, &[2, 2]);
            for (idx, (n, d)) in cs.into_iter().enumerate() {
                let e = [idx as u32 / 3, idx as u32 % 3];
                if e == [0, 0] {
                    s.set(&e, int(constant));
                } else {
                    s.set(&e, rational(n, d));
                }
            }
            s
        })
    }

    proptest! {
        #[test]
        fn exp_of_log_is_identity(s in arb_bivariate(1)) {
            let back = series_exp(&series_log(&s).unwrap()).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn log_of_exp_is_identity(s in arb_bivariate(0)) {
            let back = series_log(&series_exp(&s).unwrap()).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn log_matches_definition(s in arb_bivariate(1)) {
            prop_assert_eq!(series_log(&s).unwrap(), naive_log(&s));
        }

        #[test]
        fn log_turns_products_into_sums(a in arb_bivariate(1), b in arb_bivariate(1)) {
            let lhs = series_log(&a.mul(&b)).unwrap();
            let rhs = series_log(&a).unwrap().add(&series_log(&b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
