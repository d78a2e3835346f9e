//! Exact rational substrate: scalars, open intervals, symmetric matrices,
//! univariate polynomials and the exact positive-semidefiniteness test.

mod interval;
mod matrix;
mod poly;
mod rational;

pub use interval::{interval_combine, interval_distance, Combine, RatInterval};
pub use matrix::{psd_check, RationalMatrix};
pub use poly::{Poly, RootEnclosure};
pub use rational::{
    abs, ceil_int, floor_int, from_int, int, max, min, parse_rational, pow2, rat, round_dyadic,
    sqrt_exact, sqrt_lower, sqrt_upper, Rational, RoundMode,
};
