//! The distributive lattice `L(R)` of classes `D(a) = [a⁺]`, stored by
//! positive representative, and cover certificates over it.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::numerics::{self, RatInterval, Rational};
use crate::riesz::{self, MultiplierBound, RieszSpace, Verdict};
use crate::spectrum::{pos_or_below, PosOutcome};

/// Ceiling for multiplier searches when the instance gives no bound.
pub const SEARCH_CAP_LOG2: u32 = 40;

/// `D(a)`, represented by `a⁺` (or a lattice combination of such).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeElement<E> {
    rep: E,
}

impl<E> LatticeElement<E> {
    pub fn rep(&self) -> &E {
        &self.rep
    }

    pub fn into_rep(self) -> E {
        self.rep
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatMode {
    Join,
    Meet,
}

/// `D(a) := [a⁺]`.
pub fn d_of<S: RieszSpace>(space: &S, a: &S::Elem) -> Result<LatticeElement<S::Elem>> {
    space.contains(a)?;
    Ok(LatticeElement {
        rep: riesz::positive_part(space, a),
    })
}

/// Wraps an element already known to be positive.
pub fn from_positive<S: RieszSpace>(space: &S, rep: S::Elem) -> Result<LatticeElement<S::Elem>> {
    space.contains(&rep)?;
    Ok(LatticeElement { rep })
}

pub fn top<S: RieszSpace>(space: &S) -> LatticeElement<S::Elem> {
    LatticeElement { rep: space.unit() }
}

pub fn bottom<S: RieszSpace>(space: &S) -> LatticeElement<S::Elem> {
    LatticeElement { rep: space.zero() }
}

pub fn lat_combine<S: RieszSpace>(
    space: &S,
    x: &LatticeElement<S::Elem>,
    y: &LatticeElement<S::Elem>,
    mode: LatMode,
) -> Result<LatticeElement<S::Elem>> {
    let rep = match mode {
        LatMode::Join => riesz::join(space, &x.rep, &y.rep)?,
        LatMode::Meet => riesz::meet(space, &x.rep, &y.rep)?,
    };
    Ok(LatticeElement { rep })
}

/// Outcome of `a ≼ b`: verdict plus the multiplier found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precedence {
    pub verdict: Verdict,
    pub witness: Option<BigInt>,
}

/// Doubling search `n = 1, 2, 4, …` for `a <= n·b`, capped by the instance
/// bound (tried last) or by `2^SEARCH_CAP_LOG2`.
pub fn multiplier_search<S: RieszSpace>(space: &S, a: &S::Elem, b: &S::Elem) -> Precedence {
    let bound = space.multiplier_bound(a, b);
    let cap = match &bound {
        MultiplierBound::Impossible => {
            return Precedence {
                verdict: Verdict::False,
                witness: None,
            }
        }
        MultiplierBound::AtMost(n) => n.clone().max(BigInt::one()),
        MultiplierBound::Unknown => BigInt::one() << SEARCH_CAP_LOG2,
    };
    let mut n = BigInt::one();
    let mut saw_unknown = false;
    loop {
        let here = n.clone().min(cap.clone());
        match space.leq(a, &space.scale(&numerics::from_int(here.clone()), b)) {
            Verdict::True => {
                return Precedence {
                    verdict: Verdict::True,
                    witness: Some(here),
                }
            }
            Verdict::Unknown => saw_unknown = true,
            Verdict::False => {}
        }
        if here >= cap {
            break;
        }
        n <<= 1;
    }
    let exhaustive = matches!(bound, MultiplierBound::AtMost(_)) && !saw_unknown;
    Precedence {
        verdict: if exhaustive { Verdict::False } else { Verdict::Unknown },
        witness: None,
    }
}

/// `a ≼ b`: some `n` with `rep_a <= n·rep_b`.
pub fn precedes<S: RieszSpace>(
    space: &S,
    a: &LatticeElement<S::Elem>,
    b: &LatticeElement<S::Elem>,
) -> Result<Precedence> {
    space.contains(&a.rep)?;
    space.contains(&b.rep)?;
    Ok(multiplier_search(space, &a.rep, &b.rep))
}

/// Class equality: precedence both ways.
pub fn lat_eq<S: RieszSpace>(space: &S, x: &LatticeElement<S::Elem>, y: &LatticeElement<S::Elem>) -> Result<Verdict> {
    let a = precedes(space, x, y)?.verdict;
    let b = precedes(space, y, x)?.verdict;
    Ok(match (a, b) {
        (Verdict::True, Verdict::True) => Verdict::True,
        (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
        _ => Verdict::Unknown,
    })
}

/// `target.rep <= multiplier · ⋁ parts.rep`, checkable by one `leq` call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate<E> {
    pub target: LatticeElement<E>,
    pub parts: Vec<LatticeElement<E>>,
    pub multiplier: BigInt,
}

impl<E: Clone> CoverCertificate<E> {
    pub fn verify<S: RieszSpace<Elem = E>>(&self, space: &S) -> Verdict {
        let reps: Vec<E> = self.parts.iter().map(|p| p.rep.clone()).collect();
        let Some(join) = riesz::join_all(space, &reps) else {
            return Verdict::from_bool(space.leq(&self.target.rep, &space.zero()).is_true());
        };
        space.leq(
            &self.target.rep,
            &space.scale(&numerics::from_int(self.multiplier.clone()), &join),
        )
    }
}

fn certify<S: RieszSpace>(
    space: &S,
    target: LatticeElement<S::Elem>,
    parts: Vec<LatticeElement<S::Elem>>,
    ceiling: Option<BigInt>,
) -> Result<CoverCertificate<S::Elem>> {
    let reps: Vec<S::Elem> = parts.iter().map(|p| p.rep.clone()).collect();
    let join = riesz::join_all(space, &reps).unwrap_or_else(|| space.zero());
    let mut n = BigInt::one();
    let hard_cap = BigInt::one() << SEARCH_CAP_LOG2;
    let mut tried_ceiling = ceiling.is_none();
    loop {
        if space.leq(&target.rep, &space.scale(&numerics::from_int(n.clone()), &join)).is_true() {
            return Ok(CoverCertificate {
                target,
                parts,
                multiplier: n,
            });
        }
        if let Some(c) = &ceiling {
            if !tried_ceiling && (&n << 1) > *c {
                tried_ceiling = true;
                if c > &n
                    && space
                        .leq(&target.rep, &space.scale(&numerics::from_int(c.clone()), &join))
                        .is_true()
                {
                    return Ok(CoverCertificate {
                        target,
                        parts,
                        multiplier: c.clone(),
                    });
                }
            }
        }
        n <<= 1;
        if n > hard_cap {
            return Err(Error::CertificateMissing("no multiplier up to 2^40 certifies the cover".into()));
        }
    }
}

/// `p`, `q` with `a ∈ (p, q) ≽ 1`, and the certificate `1 <= m·(a ∈ (p, q))⁺`.
pub fn cover_range<S: RieszSpace>(
    space: &S,
    a: &S::Elem,
) -> Result<(Rational, Rational, CoverCertificate<S::Elem>)> {
    space.contains(a)?;
    let p = -(numerics::from_int(space.unit_bound(&space.neg(a))) + Rational::one());
    let q = numerics::from_int(space.unit_bound(a)) + Rational::one();
    let cell = d_of(space, &riesz::in_interval_unchecked(space, a, &p, &q))?;
    let cert = certify(space, top(space), vec![cell], None)?;
    Ok((p, q, cert))
}

/// The overlapping grid `(p + k·w/2, p + k·w/2 + w)` truncated at `q`.
pub fn interval_grid(p: &Rational, q: &Rational, width: &Rational) -> Result<Vec<RatInterval>> {
    if p >= q {
        return Err(Error::InvalidInterval {
            lo: p.to_string(),
            hi: q.to_string(),
        });
    }
    if !width.is_positive() {
        return Err(Error::DegenerateWidth(format!("grid width must be positive, got {width}")));
    }
    if width >= &(q - p) {
        return Ok(vec![RatInterval::new(p.clone(), q.clone())?]);
    }
    let step = width / numerics::int(2);
    let mut out = Vec::new();
    let mut lo = p.clone();
    loop {
        let hi = &lo + width;
        if &hi >= q {
            out.push(RatInterval::new(lo, q.clone())?);
            break;
        }
        out.push(RatInterval::new(lo.clone(), hi)?);
        lo += &step;
    }
    Ok(out)
}

/// Grid cover of `(p, q)` with the certificate `a ∈ (p, q) ≼ ⋁_k a ∈ I_k`.
pub fn cover_interval<S: RieszSpace>(
    space: &S,
    a: &S::Elem,
    p: &Rational,
    q: &Rational,
    width: &Rational,
) -> Result<(Vec<RatInterval>, CoverCertificate<S::Elem>)> {
    space.contains(a)?;
    let grid = interval_grid(p, q, width)?;
    let target = d_of(space, &riesz::in_interval_unchecked(space, a, p, q))?;
    if grid.len() == 1 {
        let cert = CoverCertificate {
            parts: vec![target.clone()],
            target,
            multiplier: BigInt::one(),
        };
        return Ok((grid, cert));
    }
    let parts = grid
        .iter()
        .map(|i| d_of(space, &riesz::in_interval_unchecked(space, a, i.lo(), i.hi())))
        .collect::<Result<Vec<_>>>()?;
    let ceiling = numerics::ceil_int(&(numerics::int(2) * (q - p + numerics::int(2)) / (width / numerics::int(2))));
    let cert = certify(space, target, parts, Some(ceiling))?;
    Ok((grid, cert))
}

/// `r = 1/(2N)` with `N` the least power of two such that `1 <= N·⋁ b_i⁺`.
pub fn shrink_cover<S: RieszSpace>(space: &S, bs: &[S::Elem]) -> Result<Rational> {
    for b in bs {
        space.contains(b)?;
    }
    let pos: Vec<S::Elem> = bs.iter().map(|b| riesz::positive_part(space, b)).collect();
    let Some(join) = riesz::join_all(space, &pos) else {
        return Err(Error::CertificateMissing("empty family cannot cover".into()));
    };
    let unit = space.unit();
    let mut n = BigInt::one();
    let cap = BigInt::one() << SEARCH_CAP_LOG2;
    // certified lower bound on inf ⋁ b_i⁺ bounds the search for exact instances
    let mut limit = cap.clone();
    let err = space.error_radius(&join);
    let eps = numerics::max(&numerics::pow2(-(SEARCH_CAP_LOG2 as i64)), &(err * numerics::int(4)));
    if let Ok(inf) = riesz::inf_lower_bound(space, &join, &eps) {
        if inf.is_positive() {
            limit = numerics::ceil_int(&(Rational::one() / &inf)).max(BigInt::one()) * 2;
        }
        // inf ⋁ b_i⁺ <= inf + eps, so smaller n cannot certify
        let top = &inf + &eps;
        if top.is_positive() {
            while numerics::from_int(&n * 2) * &top < Rational::one() {
                n <<= 1;
            }
            if numerics::from_int(n.clone()) * &top < Rational::one() {
                n <<= 1;
            }
        }
    }
    while n <= limit.clone().min(cap.clone()) {
        if space.leq(&unit, &space.scale(&numerics::from_int(n.clone()), &join)).is_true() {
            return Ok(Rational::new(BigInt::one(), n * 2));
        }
        n <<= 1;
    }
    Err(Error::CertificateMissing(
        "the parts do not certifiably cover: no N with 1 <= N·⋁ b_i⁺".into(),
    ))
}

/// Re-checks `⋁ D(b_i − r) = 1` through `inf ⋁ (b_i − r)⁺ > 0`.
pub fn recertify_shrink<S: RieszSpace>(space: &S, bs: &[S::Elem], r: &Rational) -> Result<bool> {
    let shifted: Vec<S::Elem> = bs
        .iter()
        .map(|b| riesz::positive_part(space, &space.shift_down(b, r)))
        .collect();
    let Some(join) = riesz::join_all(space, &shifted) else {
        return Ok(false);
    };
    Ok(riesz::inf_lower_bound(space, &join, &(r / numerics::int(4)))?.is_positive())
}

/// Keeps the `b_i` with `Pos` at threshold `r`, in order, with their outcomes.
pub fn prune_cover_outcomes<S: RieszSpace>(
    space: &S,
    bs: &[S::Elem],
    r: &Rational,
) -> Result<Vec<(usize, PosOutcome)>> {
    let mut kept = Vec::new();
    for (i, b) in bs.iter().enumerate() {
        let out = pos_or_below(space, b, r)?;
        if matches!(out, PosOutcome::Pos(_)) {
            kept.push((i, out));
        }
    }
    Ok(kept)
}

pub fn prune_cover<S: RieszSpace>(space: &S, bs: &[S::Elem], r: &Rational) -> Result<Vec<S::Elem>> {
    Ok(prune_cover_outcomes(space, bs, r)?
        .into_iter()
        .map(|(i, _)| bs[i].clone())
        .collect())
}

/// `D(x) = 0` iff the representative is `<= 0`.
pub fn is_zero_class<S: RieszSpace>(space: &S, x: &LatticeElement<S::Elem>) -> Verdict {
    space.leq(&x.rep, &space.zero())
}

/// Relations 1–5 for the pair `(a, b)`, in order: `a <= 0 ⇒ D(a) = 0`,
/// `D(1) = 1`, `D(a) ∧ D(−a) = 0`, `D(a + b) ≼ D(a) ∨ D(b)`,
/// `D(a ∨ b) = D(a) ∨ D(b)`. Relation 1 is vacuously true when `a <= 0` fails.
pub fn check_relations<S: RieszSpace>(space: &S, a: &S::Elem, b: &S::Elem) -> Result<[Verdict; 5]> {
    space.contains(a)?;
    space.contains(b)?;
    let da = d_of(space, a)?;
    let db = d_of(space, b)?;
    let r1 = match space.leq(a, &space.zero()) {
        Verdict::True => is_zero_class(space, &da),
        Verdict::False => Verdict::True,
        Verdict::Unknown => Verdict::Unknown,
    };
    let r2 = lat_eq(space, &d_of(space, &space.unit())?, &top(space))?;
    let r3 = is_zero_class(space, &lat_combine(space, &da, &d_of(space, &space.neg(a))?, LatMode::Meet)?);
    let joined = lat_combine(space, &da, &db, LatMode::Join)?;
    let r4 = precedes(space, &d_of(space, &space.add(a, b))?, &joined)?.verdict;
    let r5 = lat_eq(space, &d_of(space, &space.join(a, b))?, &joined)?;
    Ok([r1, r2, r3, r4, r5])
}
