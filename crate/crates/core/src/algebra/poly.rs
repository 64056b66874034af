//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use crate::error::{domain, Result};

/// A polynomial in a fixed, ordered list of named variables.
///
/// Terms are keyed by exponent vectors whose length equals the number of
/// variables; zero coefficients are never stored. A polynomial over the empty
/// variable list is a plain constant and combines with any other polynomial.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &[String]) -> Self {
        MultiPoly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    /// A constant with no variables.
    pub fn scalar(c: Rational) -> Self {
        Self::constant(&[], c)
    }

    /// The `i`-th variable as a polynomial.
    pub fn var(vars: &[String], i: usize) -> Self {
        assert!(i < vars.len(), "variable index {i} out of range");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, Rational::one());
        p
    }

    /// `a0 + Σ a_j x_j`.
    pub fn affine(vars: &[String], a0: &Rational, coeffs: &[Rational]) -> Self {
        assert_eq!(coeffs.len(), vars.len());
        let mut p = Self::constant(vars, a0.clone());
        for (i, a) in coeffs.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            p.add_term(e, a.clone());
        }
        p
    }

    /// Variables named `prefix1, prefix2, ...`.
    pub fn indexed_vars(prefix: &str, count: usize) -> Vec<String> {
        (1..=count).map(|j| format!("{prefix}{j}")).collect()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Coefficient of the monomial with exponents `exps` (missing → 0).
    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses a constant over `vars`; non-constant polynomials must
    /// already use exactly those variables.
    /// The same polynomial over `vars`; only constants may change variable list.
    pub fn lift_to(&self, vars: &[String]) -> MultiPoly {
        if self.vars == vars {
            return self.clone();
        }
        assert!(
            self.vars.is_empty(),
            "variable mismatch: {:?} vs {:?}",
            self.vars,
            vars
        );
        MultiPoly::constant(vars, self.as_constant().unwrap())
    }

    fn common_vars<'a>(&'a self, other: &'a MultiPoly) -> &'a [String] {
        if self.vars.is_empty() {
            &other.vars
        } else {
            &self.vars
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(&self.vars, Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at `point`.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars.len() {
            return domain(format!(
                "evaluation point has {} entries, polynomial has {} variables",
                point.len(),
                self.vars.len()
            ));
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    m *= num_traits::pow::pow(x.clone(), k as usize);
                }
            }
            total += m;
        }
        Ok(total)
    }

    /// Evaluation at integer points.
    pub fn eval_int(&self, point: &[i64]) -> Result<Rational> {
        let p: Vec<Rational> = point.iter().map(|&x| int(x)).collect();
        self.eval(&p)
    }

    /// Substitutes `images[i]` for the `i`-th variable. All images must share
    /// one variable list (or be constants).
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.vars.len() {
            return domain(format!(
                "composition needs {} images, got {}",
                self.vars.len(),
                images.len()
            ));
        }
        let target: Vec<String> = images
            .iter()
            .find(|p| !p.vars.is_empty())
            .map(|p| p.vars.clone())
            .unwrap_or_default();
        let mut out = MultiPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut m = MultiPoly::constant(&target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    m = &m * &img.lift_to(&target).pow(k);
                }
            }
            out = &out + &m;
        }
        Ok(out)
    }

    /// Reads off `(a0, [a1..ak])` when the total degree is at most one.
    pub fn affine_parts(&self) -> Option<(Rational, Vec<Rational>)> {
        if self.total_degree().unwrap_or(0) > 1 {
            return None;
        }
        let k = self.vars.len();
        let a0 = self.coeff(&vec![0; k]);
        let coeffs = (0..k)
            .map(|i| {
                let mut e = vec![0; k];
                e[i] = 1;
                self.coeff(&e)
            })
            .collect();
        Some((a0, coeffs))
    }

    /// Coefficients `[c0, c1, ..]` of a univariate polynomial.
    pub fn univariate_coeffs(&self) -> Vec<Rational> {
        assert!(self.vars.len() <= 1, "not univariate");
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut out = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            let k = e.first().copied().unwrap_or(0) as usize;
            out[k] = c.clone();
        }
        out
    }
}

impl PartialEq for MultiPoly {
    /// Constants compare by value regardless of the variable list they carry.
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        if self.vars.is_empty() || other.vars.is_empty() {
            return match (self.as_constant(), other.as_constant()) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            };
        }
        false
    }
}

impl Eq for MultiPoly {}

/// `expr (expr-1) ... (expr-k+1) / k!`, i.e. the binomial coefficient with a
/// polynomial top argument. Returns 1 for `k = 0`.
pub fn binomial_poly(expr: &MultiPoly, k: u32) -> MultiPoly {
    let mut acc = MultiPoly::constant(expr.vars(), Rational::one());
    let mut fact = BigInt::one();
    for i in 0..k {
        let shifted = expr - &MultiPoly::scalar(int(i));
        acc = &acc * &shifted;
        fact *= BigInt::from(i + 1);
    }
    acc.scale(&Rational::from_integer(fact).recip())
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let vars = self.common_vars(rhs).to_vec();
        let mut out = self.lift_to(&vars);
        for (e, c) in rhs.lift_to(&vars).terms {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let vars = self.common_vars(rhs).to_vec();
        let a = self.lift_to(&vars);
        let b = rhs.lift_to(&vars);
        let mut out = MultiPoly::zero(&vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

fn fmt_rational_abs(c: &Rational) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in decreasing total degree, e.g. `-21*d^2 + 117/2*d - 75/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, v)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            let cabs = fmt_rational_abs(c);
            if mono.is_empty() {
                write!(f, "{cabs}")?;
            } else if c.abs().is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{cabs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rational;
    use proptest::prelude::*;

    fn d() -> Vec<String> {
        vec!["d".to_string()]
    }

    fn b2() -> Vec<String> {
        MultiPoly::indexed_vars("b", 2)
    }

    #[test]
    fn display_matches_expected_text() {
        let v = d();
        let x = MultiPoly::var(&v, 0);
        let p = &(&x.pow(2).scale(&int(3)) - &x.scale(&int(6))) + &MultiPoly::scalar(int(3));
        assert_eq!(p.to_string(), "3*d^2 - 6*d + 3");
        let q = &(&x.pow(2).scale(&int(-21)) + &x.scale(&rational(117, 2)))
            - &MultiPoly::scalar(rational(75, 2));
        assert_eq!(q.to_string(), "-21*d^2 + 117/2*d - 75/2");
        assert_eq!(MultiPoly::zero(&v).to_string(), "0");
        let aff = MultiPoly::affine(&b2(), &int(1), &[rational(-3, 2), rational(-3, 2)]);
        assert_eq!(aff.to_string(), "-3/2*b1 - 3/2*b2 + 1");
    }

    #[test]
    fn eval_examples() {
        let v = b2();
        let p = &MultiPoly::var(&v, 0) + &MultiPoly::var(&v, 1);
        assert_eq!(p.eval_int(&[1, 2]).unwrap(), int(3));
        assert!(p.eval_int(&[1]).is_err());

        let b = MultiPoly::indexed_vars("b", 1);
        let phi = (&MultiPoly::var(&b, 0).scale(&int(3)) - &MultiPoly::scalar(int(5)))
            .scale(&rational(-1, 2));
        assert_eq!(phi.eval_int(&[2]).unwrap(), rational(-1, 2));

        let x = MultiPoly::var(&d(), 0);
        let q = (&x - &MultiPoly::scalar(int(1))).pow(2).scale(&int(3));
        assert_eq!(q.eval_int(&[4]).unwrap(), int(27));
    }

    #[test]
    fn binomial_poly_examples() {
        let b = MultiPoly::indexed_vars("b", 1);
        let e = &MultiPoly::var(&b, 0) - &MultiPoly::scalar(int(2));
        let c = binomial_poly(&e, 2);
        assert_eq!(c.eval_int(&[4]).unwrap(), int(1));
        assert_eq!(c.eval_int(&[6]).unwrap(), int(6));
        let x = MultiPoly::var(&["x".to_string()], 0);
        assert_eq!(binomial_poly(&x, 3).eval_int(&[-1]).unwrap(), int(-1));
        assert_eq!(binomial_poly(&x, 0).as_constant(), Some(int(1)));
    }

    #[test]
    fn compose_substitutes() {
        let v = b2();
        let p = &MultiPoly::var(&v, 0) * &MultiPoly::var(&v, 1);
        let y = vec!["y".to_string()];
        let yv = MultiPoly::var(&y, 0);
        let images = [&yv + &MultiPoly::scalar(int(1)), MultiPoly::scalar(int(2))];
        let r = p.compose(&images).unwrap();
        assert_eq!(r.to_string(), "2*y + 2");
    }

    #[test]
    fn affine_parts_roundtrip() {
        let v = b2();
        let p = MultiPoly::affine(&v, &int(7), &[int(1), rational(1, 3)]);
        let (a0, a) = p.affine_parts().unwrap();
        assert_eq!(a0, int(7));
        assert_eq!(a, vec![int(1), rational(1, 3)]);
        assert!(p.pow(2).affine_parts().is_none());
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..3, 0u32..3), -5i64..6, 1i64..4), 0..5).prop_map(|ts| {
            let v = b2();
            let mut p = MultiPoly::zero(&v);
            for ((e1, e2), n, den) in ts {
                p.add_term(vec![e1, e2], rational(n, den));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_a_ring_homomorphism(a in arb_poly(), b in arb_poly(), x in -4i64..5, y in -4i64..5) {
            let pt = [int(x), int(y)];
            let prod = (&a * &b).eval(&pt).unwrap();
            prop_assert_eq!(prod, a.eval(&pt).unwrap() * b.eval(&pt).unwrap());
            let sum = (&a + &b).eval(&pt).unwrap();
            prop_assert_eq!(sum, a.eval(&pt).unwrap() + b.eval(&pt).unwrap());
        }

        #[test]
        fn no_zero_terms_stored(a in arb_poly(), b in arb_poly()) {
            let p = &(&a * &b) - &(&b * &a);
            prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
            prop_assert!(p.is_zero());
        }
    }
}
