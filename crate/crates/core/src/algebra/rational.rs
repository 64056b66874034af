//! Exact rational helpers and integer binomials.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// `num / den` as an exact rational.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// An integer as a rational.
pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Generalized binomial coefficient `C(top, k) = top (top-1) ... (top-k+1) / k!`
/// for an arbitrary (possibly negative) integer `top`.
pub fn binomial(top: &BigInt, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        // C(top, i+1) = C(top, i) * (top - i) / (i + 1), exact at every step
        acc = acc * (top - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

/// `C(n, k)` for machine-size naturals.
pub fn binomial_u(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Multinomial coefficient `(Σ parts)! / Π parts!`, computed as a product of
/// binomials.
pub fn multinomial(parts: &[u64]) -> BigUint {
    let mut total = 0u64;
    let mut acc = BigUint::one();
    for &p in parts {
        total += p;
        acc *= binomial_u(total, p);
    }
    acc
}

/// Returns the integer value when `r` has denominator 1.
pub fn as_integer(r: &Rational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// Returns `r` as an `i64` if it is an integer in range.
pub fn as_i64(r: &Rational) -> Option<i64> {
    as_integer(r).and_then(|i| i.to_i64())
}

/// `(-1)^n` as a rational.
pub fn sign(n: u64) -> Rational {
    if n.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Serializes a rational as its display string (`"-3/2"`, `"4"`).
pub fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn ser_rationals<S: serde::Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(|r| r.to_string()))
}

/// Parses `"a"` or `"a/b"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}
