use num_traits::Signed;

use crate::error::{Error, Result};
use crate::numerics::{self, Rational};
use crate::riesz::{RieszSpace, Verdict};

/// Either `Pos` with a strict lower bound on `sup a`, or `Below(r)` with
/// `sup a < r` (so `D(a − r) = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PosOutcome {
    Pos(Rational),
    Below(Rational),
}

impl PosOutcome {
    pub fn is_pos(&self) -> bool {
        matches!(self, PosOutcome::Pos(_))
    }

    /// Re-checks the branch: a `Pos` witness must sit below the native sup
    /// (`witness < approx(ε)` for every `ε`), `Below(r)` must give `a <= r·1`.
    pub fn recheck<S: RieszSpace>(&self, space: &S, a: &S::Elem) -> Result<bool> {
        match self {
            PosOutcome::Pos(w) => {
                if !w.is_positive() {
                    return Ok(false);
                }
                // sup a > w iff some precision certifies approx − eps >= w
                let cut = space.sup_cut(a);
                let mut eps = w / numerics::int(4);
                for _ in 0..64 {
                    match cut.approx(&eps) {
                        Ok(s) if &(&s - &eps) >= w => return Ok(true),
                        Ok(s) if &s <= w => return Ok(false),
                        _ => eps /= numerics::int(2),
                    }
                }
                Ok(false)
            }
            PosOutcome::Below(r) => Ok(space.leq(a, &space.constant(r)) == Verdict::True),
        }
    }
}

/// Decides `sup a > 0` versus `sup a < r` from one query at precision `r/4`.
pub fn pos_or_below<S: RieszSpace>(space: &S, a: &S::Elem, r: &Rational) -> Result<PosOutcome> {
    space.contains(a)?;
    if !r.is_positive() {
        return Err(Error::InvalidArgument(format!("threshold must be positive, got {r}")));
    }
    let quarter = r / numerics::int(4);
    let s = space.sup_cut(a).approx(&quarter)?;
    if s > r / numerics::int(2) {
        Ok(PosOutcome::Pos(s - quarter))
    } else {
        Ok(PosOutcome::Below(r.clone()))
    }
}

/// `sup a` within `eps` using only `pos_or_below` on shifts of `a`.
pub fn sup_approx_generic<S: RieszSpace>(space: &S, a: &S::Elem, eps: &Rational) -> Result<Rational> {
    space.contains(a)?;
    if !eps.is_positive() {
        return Err(Error::InvalidArgument(format!("precision must be positive, got {eps}")));
    }
    // invariant: lo < sup a < hi
    let mut lo = -numerics::from_int(space.unit_bound(&space.neg(a))) - numerics::int(1);
    let mut hi = numerics::from_int(space.unit_bound(a)) + numerics::int(1);
    let half = eps / numerics::int(2);
    let two_eps = eps * numerics::int(2);
    while &hi - &lo > two_eps {
        let q = (&lo + &hi) / numerics::int(2);
        match pos_or_below(space, &space.shift_down(a, &q), &half)? {
            PosOutcome::Pos(_) => lo = q,
            PosOutcome::Below(_) => hi = numerics::min(&hi, &(q + &half)),
        }
    }
    Ok((lo + hi) / numerics::int(2))
}
