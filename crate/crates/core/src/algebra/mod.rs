//! Exact arithmetic kernel: rationals, sparse polynomials and truncated
//! multivariate power series.

pub mod poly;
pub mod rational;
pub mod series;

pub use poly::{binomial_poly, MultiPoly};
pub use rational::{binomial, binomial_u, int, multinomial, rational, Rational};
pub use series::{box_indices, series_exp, series_log, Coefficient, TruncSeries};
