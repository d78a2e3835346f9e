use num_traits::Zero;

use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// Open interval `(lo, hi)` with rational endpoints, `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Join,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo < q && q < &self.hi
    }
}

impl std::fmt::Display for RatInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

pub fn interval_combine(i: &RatInterval, j: &RatInterval, mode: Combine) -> RatInterval {
    match mode {
        Combine::Sum => RatInterval {
            lo: &i.lo + &j.lo,
            hi: &i.hi + &j.hi,
        },
        Combine::Join => RatInterval {
            lo: rational::max(&i.lo, &j.lo),
            hi: rational::max(&i.hi, &j.hi),
        },
    }
}

/// Gap between the closed hulls; zero when they touch or overlap.
pub fn interval_distance(i: &RatInterval, j: &RatInterval) -> Rational {
    let a = &j.lo - &i.hi;
    let b = &i.lo - &j.hi;
    rational::max(&rational::max(&a, &b), &Rational::zero())
}
