use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{unpair_tuple, zigzag};
use crate::error::{Error, Result};
use crate::numerics::{self, Rational};
use crate::riesz::{LocatedCut, MultiplierBound, RieszSpace, Verdict};

/// Piecewise-linear functions on `[0, 1]` with rational breakpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PlSpace;

/// Breakpoints `(x, y)` with `x` strictly increasing from 0 to 1, kept in
/// canonical form (no breakpoint collinear with its neighbours), so equal
/// functions have identical representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlElement {
    points: Vec<(Rational, Rational)>,
}

impl PlElement {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument("a PL function needs at least two breakpoints".into()));
        }
        if !points[0].0.is_zero() || !points[points.len() - 1].0.is_one() {
            return Err(Error::InvalidArgument("breakpoints must start at x=0 and end at x=1".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument("breakpoint x-coordinates must increase strictly".into()));
        }
        Ok(Self::canonical(points))
    }

    pub fn from_i64(points: &[(i64, i64, i64)]) -> Result<Self> {
        // (x numerator, x denominator, y) with integer y; handy for tests
        Self::new(
            points
                .iter()
                .map(|&(n, d, y)| (numerics::rat(n, d), numerics::int(y)))
                .collect(),
        )
    }

    pub fn constant(c: Rational) -> Self {
        PlElement {
            points: vec![(Rational::zero(), c.clone()), (Rational::one(), c)],
        }
    }

    /// The identity function `x`.
    pub fn identity() -> Self {
        PlElement {
            points: vec![(Rational::zero(), Rational::zero()), (Rational::one(), Rational::one())],
        }
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    fn canonical(points: Vec<(Rational, Rational)>) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
        for p in points {
            while out.len() >= 2 {
                let (x0, y0) = &out[out.len() - 2];
                let (x1, y1) = &out[out.len() - 1];
                if (y1 - y0) * (&p.0 - x1) == (&p.1 - y1) * (x1 - x0) {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        PlElement { points: out }
    }

    /// Value at `x ∈ [0, 1]`.
    pub fn eval(&self, x: &Rational) -> Rational {
        let i = match self.points.binary_search_by(|(px, _)| px.cmp(x)) {
            Ok(i) => return self.points[i].1.clone(),
            Err(i) => i,
        };
        let i = i.clamp(1, self.points.len() - 1);
        let (x0, y0) = &self.points[i - 1];
        let (x1, y1) = &self.points[i];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn max_value(&self) -> Rational {
        self.points.iter().map(|(_, y)| y).max().expect("nonempty").clone()
    }
}

/// Both functions at the union of their breakpoints, by one merge walk
/// (every element has breakpoints at 0 and 1).
fn merged_values(a: &PlElement, b: &PlElement) -> Vec<(Rational, Rational, Rational)> {
    fn at(pts: &[(Rational, Rational)], i: usize, x: &Rational) -> Rational {
        let (x1, y1) = &pts[i];
        if x1 == x {
            return y1.clone();
        }
        let (x0, y0) = &pts[i - 1];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
    let (pa, pb) = (&a.points, &b.points);
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(pa.len() + pb.len());
    while i < pa.len() && j < pb.len() {
        let x = if pa[i].0 <= pb[j].0 { pa[i].0.clone() } else { pb[j].0.clone() };
        let ya = at(pa, i, &x);
        let yb = at(pb, j, &x);
        if pa[i].0 == x {
            i += 1;
        }
        if pb[j].0 == x {
            j += 1;
        }
        out.push((x, ya, yb));
    }
    out
}

fn pointwise(a: &PlElement, b: &PlElement, f: impl Fn(Rational, Rational) -> Rational) -> PlElement {
    let pts = merged_values(a, b)
        .into_iter()
        .map(|(x, ya, yb)| (x, f(ya, yb)))
        .collect();
    PlElement::canonical(pts)
}

/// Merged breakpoints plus every crossing of `a` and `b`, with both values.
fn with_crossings(a: &PlElement, b: &PlElement) -> Vec<(Rational, Rational, Rational)> {
    let merged = merged_values(a, b);
    let mut out: Vec<(Rational, Rational, Rational)> = Vec::with_capacity(merged.len() * 2);
    for (x, fa, fb) in merged {
        if let Some((x0, a0, b0)) = out.last() {
            let d0 = a0 - b0;
            let d1 = &fa - &fb;
            if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
                // both are linear on [x0, x], so they meet at one value
                let t = &d0 / (&d0 - &d1);
                let xc = x0 + (&x - x0) * &t;
                let yc = a0 + (&fa - a0) * &t;
                out.push((xc, yc.clone(), yc));
            }
        }
        out.push((x, fa, fb));
    }
    out
}

/// `a` with a breakpoint added wherever it crosses the level `c`, then
/// mapped through `f`; exact when `f` is linear on each side of `c`.
fn map_across(a: &PlElement, c: &Rational, f: impl Fn(&Rational) -> Rational) -> PlElement {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(a.points.len() + 2);
    for (i, (x, y)) in a.points.iter().enumerate() {
        if i > 0 {
            let (x0, y0) = &a.points[i - 1];
            if (y0 < c && y > c) || (y0 > c && y < c) {
                let xc = x0 + (x - x0) * (c - y0) / (y - y0);
                out.push((xc, f(c)));
            }
        }
        out.push((x.clone(), f(y)));
    }
    PlElement::canonical(out)
}

/// Smallest `n >= 1` with `a <= n b` given the finitely many points where the
/// condition must be checked, or `Impossible`.
pub(crate) fn multiplier_from_pairs<'a>(
    pairs: impl Iterator<Item = (&'a Rational, &'a Rational)>,
) -> MultiplierBound {
    let mut lower = BigInt::one();
    let mut upper: Option<BigInt> = None;
    for (x, y) in pairs {
        if y.is_positive() {
            lower = lower.max(numerics::ceil_int(&(x / y)));
        } else if y.is_zero() {
            if x.is_positive() {
                return MultiplierBound::Impossible;
            }
        } else {
            let u = numerics::floor_int(&(x / y));
            upper = Some(match upper {
                Some(v) => v.min(u),
                None => u,
            });
        }
    }
    match upper {
        Some(u) if u < lower => MultiplierBound::Impossible,
        _ => MultiplierBound::AtMost(lower),
    }
}

impl RieszSpace for PlSpace {
    type Elem = PlElement;

    fn tag(&self) -> &'static str {
        "pl"
    }

    fn contains(&self, _a: &PlElement) -> Result<()> {
        Ok(())
    }

    fn zero(&self) -> PlElement {
        PlElement::constant(Rational::zero())
    }

    fn unit(&self) -> PlElement {
        PlElement::constant(Rational::one())
    }

    fn add(&self, a: &PlElement, b: &PlElement) -> PlElement {
        pointwise(a, b, |x, y| x + y)
    }

    fn scale(&self, q: &Rational, a: &PlElement) -> PlElement {
        PlElement::canonical(a.points.iter().map(|(x, y)| (x.clone(), y * q)).collect())
    }

    fn join(&self, a: &PlElement, b: &PlElement) -> PlElement {
        let pts = with_crossings(a, b)
            .into_iter()
            .map(|(x, ya, yb)| (x, if ya >= yb { ya } else { yb }))
            .collect();
        PlElement::canonical(pts)
    }

    fn meet(&self, a: &PlElement, b: &PlElement) -> PlElement {
        let pts = with_crossings(a, b)
            .into_iter()
            .map(|(x, ya, yb)| (x, if ya <= yb { ya } else { yb }))
            .collect();
        PlElement::canonical(pts)
    }

    fn positive_part(&self, a: &PlElement) -> PlElement {
        map_across(a, &Rational::zero(), |y| if y.is_positive() { y.clone() } else { Rational::zero() })
    }

    fn in_interval(&self, a: &PlElement, p: &Rational, q: &Rational) -> PlElement {
        let mid = (p + q) / numerics::int(2);
        map_across(a, &mid, |y| if y <= &mid { y - p } else { q - y })
    }

    fn leq(&self, a: &PlElement, b: &PlElement) -> Verdict {
        Verdict::from_bool(merged_values(a, b).iter().all(|(_, ya, yb)| ya <= yb))
    }

    fn sup_cut(&self, a: &PlElement) -> LocatedCut {
        LocatedCut::exact(a.max_value())
    }

    fn unit_bound(&self, a: &PlElement) -> BigInt {
        numerics::ceil_int(&a.max_value()).max(BigInt::zero())
    }

    fn multiplier_bound(&self, a: &PlElement, b: &PlElement) -> MultiplierBound {
        let vals: Vec<(Rational, Rational)> = merged_values(a, b).into_iter().map(|(_, x, y)| (x, y)).collect();
        multiplier_from_pairs(vals.iter().map(|(x, y)| (x, y)))
    }

    /// Equispaced rational grids of every size with zigzag-coded values over
    /// a common denominator; dense in `C[0, 1]`.
    fn dense_element(&self, k: u64) -> Option<PlElement> {
        let t = unpair_tuple(k, 3);
        let den = t[0] as i64 + 1;
        let g = (t[1] as usize).min(62) + 2;
        let vals = unpair_tuple(t[2], g);
        let step = (g - 1) as i64;
        let pts = vals
            .iter()
            .enumerate()
            .map(|(i, &v)| (numerics::rat(i as i64, step), numerics::rat(zigzag(v), den)))
            .collect();
        Some(PlElement::canonical(pts))
    }
}
