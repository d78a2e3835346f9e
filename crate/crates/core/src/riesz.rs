//! The Riesz-space capability contract shared by every concrete instance,
//! the derived lattice operations, and located cuts for suprema.

use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{self, Rational};

/// Outcome of an order query. Exact instances never answer `Unknown`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

/// What an instance can say up front about `a <= n b` for some integer `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultiplierBound {
    /// No `n` exists.
    Impossible,
    /// If any `n` exists, one `n <= bound` does.
    AtMost(BigInt),
    /// Search without a ceiling (caller applies its own cap).
    Unknown,
}

type Refiner = dyn Fn(&Rational) -> Result<(Rational, Rational)> + Send + Sync;

#[derive(Clone)]
enum CutSource {
    Exact(Rational),
    Refine(Arc<Refiner>),
}

/// A located upper cut: the only access to its real value `v` is through
/// `approx(eps)`, which returns `s` with `s - eps < v <= s`.
///
/// Refinements are cached; the cache always holds the intersection of all
/// brackets seen so far.
pub struct LocatedCut {
    source: CutSource,
    cache: Mutex<Option<(Rational, Rational)>>,
}

impl fmt::Debug for LocatedCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            CutSource::Exact(v) => write!(f, "LocatedCut(exact {v})"),
            CutSource::Refine(_) => {
                let c = self.cache.lock().unwrap();
                match &*c {
                    Some((lo, hi)) => write!(f, "LocatedCut(({lo}, {hi}])"),
                    None => write!(f, "LocatedCut(unrefined)"),
                }
            }
        }
    }
}

impl LocatedCut {
    /// A cut whose value is known exactly; every query returns it.
    pub fn exact(v: Rational) -> Self {
        Self {
            source: CutSource::Exact(v),
            cache: Mutex::new(None),
        }
    }

    /// A cut driven by a refiner returning `(lo, hi)` with `lo < v <= hi`
    /// and `hi - lo <= eps`.
    pub fn from_refiner<F>(f: F) -> Self
    where
        F: Fn(&Rational) -> Result<(Rational, Rational)> + Send + Sync + 'static,
    {
        Self {
            source: CutSource::Refine(Arc::new(f)),
            cache: Mutex::new(None),
        }
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        match &self.source {
            CutSource::Exact(v) => Some(v),
            CutSource::Refine(_) => None,
        }
    }

    /// `(lo, hi)` with `lo < v <= hi` and `hi - lo <= eps`.
    pub fn bracket(&self, eps: &Rational) -> Result<(Rational, Rational)> {
        if !eps.is_positive() {
            return Err(Error::InvalidArgument(format!("precision must be positive, got {eps}")));
        }
        let refiner = match &self.source {
            CutSource::Exact(v) => return Ok((v - eps, v.clone())),
            CutSource::Refine(r) => r,
        };
        let mut cache = self.cache.lock().unwrap();
        if let Some((lo, hi)) = &*cache {
            if &(hi - lo) <= eps {
                return Ok((lo.clone(), hi.clone()));
            }
        }
        let (mut lo, mut hi) = refiner(eps)?;
        if let Some((clo, chi)) = &*cache {
            lo = numerics::max(&lo, clo);
            hi = numerics::min(&hi, chi);
        }
        *cache = Some((lo.clone(), hi.clone()));
        Ok((lo, hi))
    }

    pub fn approx(&self, eps: &Rational) -> Result<Rational> {
        match &self.source {
            CutSource::Exact(v) => {
                if !eps.is_positive() {
                    return Err(Error::InvalidArgument(format!(
                        "precision must be positive, got {eps}"
                    )));
                }
                Ok(v.clone())
            }
            CutSource::Refine(_) => Ok(self.bracket(eps)?.1),
        }
    }
}

/// A Riesz space with strong unit. Elements are plain values; the space
/// carries whatever context its elements need (dimension, algebra, tolerances).
pub trait RieszSpace: Clone + Send + Sync {
    type Elem: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    /// Short instance tag used in reports and errors.
    fn tag(&self) -> &'static str;

    /// Rejects elements that do not belong to this space.
    fn contains(&self, a: &Self::Elem) -> Result<()>;

    fn zero(&self) -> Self::Elem;
    fn unit(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, q: &Rational, a: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> Verdict;
    /// Located cut of `sup a`.
    fn sup_cut(&self, a: &Self::Elem) -> LocatedCut;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.scale(&-Rational::one(), a)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// `a ∧ b := −(−a ∨ −b)`.
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.neg(&self.join(&self.neg(a), &self.neg(b)))
    }

    fn constant(&self, q: &Rational) -> Self::Elem {
        self.scale(q, &self.unit())
    }

    /// `a − q·1`.
    fn shift_down(&self, a: &Self::Elem, q: &Rational) -> Self::Elem {
        self.sub(a, &self.constant(q))
    }

    /// `a⁺ = a ∨ 0`.
    fn positive_part(&self, a: &Self::Elem) -> Self::Elem {
        self.join(a, &self.zero())
    }

    /// `(a − p·1) ∧ (q·1 − a)` for `p < q`.
    fn in_interval(&self, a: &Self::Elem, p: &Rational, q: &Rational) -> Self::Elem {
        self.meet(&self.shift_down(a, p), &self.sub(&self.constant(q), a))
    }

    /// Smallest-found `n >= 0` with `a <= n·1` certified.
    fn unit_bound(&self, a: &Self::Elem) -> BigInt {
        unit_bound_by_cut(self, a)
    }

    /// Operator-norm style error radius; zero for exact instances.
    fn error_radius(&self, _a: &Self::Elem) -> Rational {
        Rational::zero()
    }

    fn multiplier_bound(&self, _a: &Self::Elem, _b: &Self::Elem) -> MultiplierBound {
        MultiplierBound::Unknown
    }

    /// The `k`-th element of a fixed enumeration dense in the space.
    fn dense_element(&self, _k: u64) -> Option<Self::Elem> {
        None
    }
}

/// Generic strong-unit bound: ceiling of a sup upper bound, then walked
/// down while the smaller integer still certifies.
pub fn unit_bound_by_cut<S: RieszSpace + ?Sized>(space: &S, a: &S::Elem) -> BigInt {
    let cut = space.sup_cut(a);
    let mut eps = Rational::one() + space.error_radius(a) * numerics::int(4);
    let s = loop {
        match cut.approx(&eps) {
            Ok(s) => break s,
            Err(_) => eps *= numerics::int(2),
        }
    };
    let mut n = numerics::ceil_int(&s).max(BigInt::zero());
    while n.is_positive() {
        let lower = numerics::from_int(&n - 1);
        if space.leq(a, &space.constant(&lower)).is_true() {
            n -= 1;
        } else {
            break;
        }
    }
    // The cut already certified `a <= s <= n`; the walk only shrinks while certified.
    n
}

fn check2<S: RieszSpace>(space: &S, a: &S::Elem, b: &S::Elem) -> Result<()> {
    space.contains(a)?;
    space.contains(b)
}

/// Lattice meet of two elements of the same space.
pub fn meet<S: RieszSpace>(space: &S, a: &S::Elem, b: &S::Elem) -> Result<S::Elem> {
    check2(space, a, b)?;
    Ok(space.meet(a, b))
}

pub fn join<S: RieszSpace>(space: &S, a: &S::Elem, b: &S::Elem) -> Result<S::Elem> {
    check2(space, a, b)?;
    Ok(space.join(a, b))
}

/// Positive part, negative part and absolute value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<E> {
    pub pos: E,
    pub neg: E,
    pub abs: E,
}

pub fn positive_part<S: RieszSpace>(space: &S, a: &S::Elem) -> S::Elem {
    space.positive_part(a)
}

pub fn decompose<S: RieszSpace>(space: &S, a: &S::Elem) -> Result<Decomposition<S::Elem>> {
    space.contains(a)?;
    let pos = positive_part(space, a);
    let neg = positive_part(space, &space.neg(a));
    let abs = space.add(&pos, &neg);
    Ok(Decomposition { pos, neg, abs })
}

pub fn abs_value<S: RieszSpace>(space: &S, a: &S::Elem) -> S::Elem {
    let pos = positive_part(space, a);
    let neg = positive_part(space, &space.neg(a));
    space.add(&pos, &neg)
}

/// `a ∈ (p, q) := (a − p) ∧ (q − a)`.
pub fn in_interval<S: RieszSpace>(space: &S, a: &S::Elem, p: &Rational, q: &Rational) -> Result<S::Elem> {
    space.contains(a)?;
    if p >= q {
        return Err(Error::InvalidInterval {
            lo: p.to_string(),
            hi: q.to_string(),
        });
    }
    Ok(in_interval_unchecked(space, a, p, q))
}

pub(crate) fn in_interval_unchecked<S: RieszSpace>(space: &S, a: &S::Elem, p: &Rational, q: &Rational) -> S::Elem {
    space.in_interval(a, p, q)
}

/// Located cut of `‖a‖ := sup |a|`.
pub fn norm_cut<S: RieszSpace>(space: &S, a: &S::Elem) -> Result<LocatedCut> {
    space.contains(a)?;
    Ok(space.sup_cut(&abs_value(space, a)))
}

pub fn unit_bound<S: RieszSpace>(space: &S, a: &S::Elem) -> Result<BigInt> {
    space.contains(a)?;
    Ok(space.unit_bound(a))
}

/// Lower bound on `inf a = −sup(−a)` certified at precision `eps`.
pub fn inf_lower_bound<S: RieszSpace>(space: &S, a: &S::Elem, eps: &Rational) -> Result<Rational> {
    Ok(-space.sup_cut(&space.neg(a)).approx(eps)?)
}

/// Pairwise reduction: operands stay balanced in size, which keeps
/// representations such as breakpoint lists from being rebuilt `n` times.
fn reduce_balanced<E: Clone>(items: &[E], op: impl Fn(&E, &E) -> E) -> Option<E> {
    let mut level: Vec<E> = items.to_vec();
    if level.is_empty() {
        return None;
    }
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|c| if c.len() == 2 { op(&c[0], &c[1]) } else { c[0].clone() })
            .collect();
    }
    level.pop()
}

pub fn join_all<S: RieszSpace>(space: &S, items: &[S::Elem]) -> Option<S::Elem> {
    reduce_balanced(items, |a, b| space.join(a, b))
}

pub fn meet_all<S: RieszSpace>(space: &S, items: &[S::Elem]) -> Option<S::Elem> {
    reduce_balanced(items, |a, b| space.meet(a, b))
}
