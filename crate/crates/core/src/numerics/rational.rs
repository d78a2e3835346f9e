
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_int(n: BigInt) -> Rational {
    BigRational::from_integer(n)
}

/// `2^k` for any integer `k`.
pub fn pow2(k: i64) -> Rational {
    let p = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn floor_int(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil_int(q: &Rational) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

/// Parses `"p/q"` or `"p"`; whitespace around the tokens is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundMode {
    Up,
    Down,
}

/// Nearest multiple of `2^-k` at or below (`Down`) or at or above (`Up`) `q`.
pub fn round_dyadic(q: &Rational, k: u32, mode: RoundMode) -> Rational {
    let scale = BigInt::one() << k;
    let scaled = q * BigRational::from_integer(scale.clone());
    let n = match mode {
        RoundMode::Down => floor_int(&scaled),
        RoundMode::Up => ceil_int(&scaled),
    };
    BigRational::new(n, scale)
}

fn isqrt_ceil(x: &BigInt) -> BigInt {
    let r = x.sqrt();
    if &r * &r < *x {
        r + 1
    } else {
        r
    }
}

/// A rational `s >= sqrt(q)` with `s - sqrt(q) <= 2^-bits`. Requires `q >= 0`.
pub fn sqrt_upper(q: &Rational, bits: u32) -> Rational {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    let scale = BigInt::one() << (2 * bits);
    let x = ceil_int(&(q * BigRational::from_integer(scale)));
    BigRational::new(isqrt_ceil(&x), BigInt::one() << bits)
}

/// A rational `s <= sqrt(q)` with `sqrt(q) - s <= 2^-bits`. Requires `q >= 0`.
pub fn sqrt_lower(q: &Rational, bits: u32) -> Rational {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    let scale = BigInt::one() << (2 * bits);
    let x = floor_int(&(q * BigRational::from_integer(scale)));
    BigRational::new(x.sqrt(), BigInt::one() << bits)
}

/// `sqrt(q)` when it is rational.
pub fn sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    let r = BigRational::new(n, d);
    (&r * &r == *q).then_some(r)
}
