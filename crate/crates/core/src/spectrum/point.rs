use indexmap::IndexMap;
use num_traits::{One, Signed};

use super::pos::PosOutcome;
use crate::error::{Error, Result};
use crate::lattice;
use crate::numerics::{self, RatInterval, Rational};
use crate::riesz::{self, RieszSpace};

/// A point of the spectrum, built lazily: a finite meet of interval
/// constraints with a certified positive margin, extended on demand by a
/// deterministic choice (argmax of approximate suprema, lowest index on ties).
#[derive(Debug, Clone)]
pub struct Representation<S: RieszSpace> {
    space: S,
    constraints: Vec<(S::Elem, RatInterval)>,
    meet: S::Elem,
    /// Certified strict lower bound on `sup meet`.
    margin: Rational,
    cache: IndexMap<S::Elem, Vec<(u32, RatInterval)>>,
}

/// Starts a point with `σ(a) > 0` from a certified `Pos(w)`.
pub fn point_new<S: RieszSpace>(space: &S, a: &S::Elem, out: &PosOutcome) -> Result<Representation<S>> {
    space.contains(a)?;
    let w = match out {
        PosOutcome::Pos(w) if w.is_positive() => w.clone(),
        PosOutcome::Pos(w) => return Err(Error::NotPositive(format!("witness {w} is not positive"))),
        PosOutcome::Below(r) => return Err(Error::NotPositive(format!("element certified below {r}"))),
    };
    let lo = &w / numerics::int(2);
    let hi = numerics::from_int(space.unit_bound(a)) + Rational::one();
    let iv = RatInterval::new(lo.clone(), hi.clone())?;
    let meet = riesz::in_interval_unchecked(space, a, &lo, &hi);
    // sup of the cell is at least min(w/2, 1) > 0 wherever a is near its sup
    let mu = numerics::min(&lo, &Rational::one()) / numerics::int(4);
    let s = space.sup_cut(&meet).approx(&mu)?;
    let margin = s - &mu;
    if !margin.is_positive() {
        return Err(Error::MarginCollapse);
    }
    Ok(Representation {
        space: space.clone(),
        constraints: vec![(a.clone(), iv)],
        meet,
        margin,
        cache: IndexMap::new(),
    })
}

impl<S: RieszSpace> Representation<S> {
    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn margin(&self) -> &Rational {
        &self.margin
    }

    pub fn constraints(&self) -> &[(S::Elem, RatInterval)] {
        &self.constraints
    }

    pub fn meet_element(&self) -> &S::Elem {
        &self.meet
    }

    /// Chosen cells per evaluated element, in evaluation order.
    pub fn cache(&self) -> &IndexMap<S::Elem, Vec<(u32, RatInterval)>> {
        &self.cache
    }

    fn push_constraint(&mut self, b: &S::Elem, iv: RatInterval, cand: S::Elem, margin: Rational) {
        self.constraints.push((b.clone(), iv.clone()));
        self.meet = cand;
        self.margin = margin;
        let levels = self.cache.entry(b.clone()).or_default();
        let level = levels.len() as u32;
        levels.push((level, iv));
    }

    /// Records `b ∈ iv` when the current meet already lies below the
    /// interval element of `b` on `iv`, so no new choice is made.
    pub(crate) fn record_implied(&mut self, b: &S::Elem, iv: RatInterval) {
        self.constraints.push((b.clone(), iv.clone()));
        let levels = self.cache.entry(b.clone()).or_default();
        let level = levels.len() as u32;
        levels.push((level, iv));
    }

    /// Adds the range constraint `b ∈ (p, q)` from `cover_range`.
    fn open_element(&mut self, b: &S::Elem) -> Result<()> {
        let (p, q, _) = lattice::cover_range(&self.space, b)?;
        let cell = riesz::in_interval_unchecked(&self.space, b, &p, &q);
        let cand = self.space.meet(&self.meet, &cell);
        // the range cell is >= 1 everywhere, so the meet keeps min(margin, 1)
        let floor = numerics::min(&self.margin, &Rational::one());
        let delta = &floor / numerics::int(8);
        let s = self.space.sup_cut(&cand).approx(&delta)?;
        let margin = s - &delta;
        if !margin.is_positive() {
            return Err(Error::MarginCollapse);
        }
        self.push_constraint(b, RatInterval::new(p, q)?, cand, margin);
        Ok(())
    }

    /// Splits the current cell of `b` into three overlapping halves and keeps
    /// the candidate meet with the largest approximate supremum.
    fn refine(&mut self, b: &S::Elem, cell: &RatInterval) -> Result<()> {
        let width = cell.width() / numerics::int(2);
        let grid = lattice::interval_grid(cell.lo(), cell.hi(), &width)?;
        let floor = numerics::min(&self.margin, &(&width / numerics::int(4)));
        let delta = &floor / numerics::int(8);
        let mut best: Option<(Rational, usize, S::Elem)> = None;
        for (k, iv) in grid.iter().enumerate() {
            let piece = riesz::in_interval_unchecked(&self.space, b, iv.lo(), iv.hi());
            let cand = self.space.meet(&self.meet, &piece);
            let s = match self.space.sup_cut(&cand).approx(&delta) {
                Ok(s) => s,
                Err(Error::Unresolvable(_)) => return Err(Error::MarginCollapse),
                Err(e) => return Err(e),
            };
            if best.as_ref().map_or(true, |(bs, _, _)| &s > bs) {
                best = Some((s, k, cand));
            }
        }
        let (s, k, cand) = best.expect("grid is nonempty");
        let margin = s - &delta;
        if !margin.is_positive() {
            return Err(Error::MarginCollapse);
        }
        self.push_constraint(b, grid[k].clone(), cand, margin);
        Ok(())
    }

    /// `σ(b)` within `eps`: the midpoint of a chosen cell of width `<= 2 eps`.
    pub fn eval(&mut self, b: &S::Elem, eps: &Rational) -> Result<Rational> {
        self.space.contains(b)?;
        if !eps.is_positive() {
            return Err(Error::InvalidArgument(format!("precision must be positive, got {eps}")));
        }
        if !self.cache.contains_key(b) {
            self.open_element(b)?;
        }
        let two_eps = eps * numerics::int(2);
        loop {
            let cell = self.cache[b].last().expect("opened").1.clone();
            if cell.width() <= two_eps {
                return Ok(cell.midpoint());
            }
            self.refine(b, &cell)?;
        }
    }
}
