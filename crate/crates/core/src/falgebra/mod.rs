//! The f-algebra calculus on commuting rational symmetric matrices.

mod algebra;
mod gelfand;
mod sos;
mod spectral;
mod sqrt;

pub use algebra::CommutingAlgebra;
pub use gelfand::{gelfand_check, key_inequality_holds, GelfandReport};
pub use sos::{prefix_identity_holds, rate_holds, sum_of_squares, SumOfSquares};
pub use spectral::abs_coords;
pub use sqrt::{sqrt_coords, SqrtOutcome, SqrtTrace};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::instances::{HermElement, HermSpace};
use crate::numerics::{self, psd_check, Rational, RationalMatrix};
use crate::riesz::RieszSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOp {
    Abs,
    Pos,
    Join,
    Meet,
}

/// `√A` for a positive element; the radius is `tol` plus `√(A.err)`.
pub fn sqrt_psd(space: &HermSpace, a: &HermElement, tol: &Rational) -> Result<(HermElement, SqrtTrace)> {
    sqrt_psd_capped(space, a, tol, None)
}

pub fn sqrt_psd_capped(
    space: &HermSpace,
    a: &HermElement,
    tol: &Rational,
    max_iter: Option<usize>,
) -> Result<(HermElement, SqrtTrace)> {
    space.contains(a)?;
    let out = sqrt_coords(space.algebra(), a.coords(), tol, max_iter, false)?;
    let mut err = tol.clone();
    if a.err().is_positive() {
        err += numerics::sqrt_upper(a.err(), 64);
    }
    Ok((space.from_coords(out.coords, err), out.trace))
}

/// `|A| = √(A²)`, `A⁺ = (|A| + A)/2`, `A ∨ B = A + (B − A)⁺` and the dual
/// meet, with the root through the square-root iteration.
pub fn abs_pos_join(
    space: &HermSpace,
    a: &HermElement,
    b: Option<&HermElement>,
    which: LatticeOp,
    tol: &Rational,
) -> Result<HermElement> {
    space.contains(a)?;
    if let Some(b) = b {
        space.contains(b)?;
    }
    let need_b = || b.ok_or_else(|| Error::InvalidArgument("join and meet need a second element".into()));
    let abs = |x: &HermElement| -> Result<HermElement> {
        let sq = space.algebra().mul_coords(x.coords(), x.coords());
        let out = sqrt_coords(space.algebra(), &sq, tol, None, false)?;
        Ok(space.from_coords(out.coords, x.err() + tol))
    };
    let pos = |x: &HermElement| -> Result<HermElement> {
        let ab = abs(x)?;
        let half = numerics::rat(1, 2);
        let coords = ab.coords().iter().zip(x.coords()).map(|(u, v)| (u + v) * &half).collect();
        Ok(space.from_coords(coords, x.err() + tol))
    };
    match which {
        LatticeOp::Abs => abs(a),
        LatticeOp::Pos => pos(a),
        LatticeOp::Join => {
            let b = need_b()?;
            let p = pos(&space.sub(b, a))?;
            let coords = a.coords().iter().zip(p.coords()).map(|(x, y)| x + y).collect();
            Ok(space.from_coords(coords, a.err() + b.err() + tol))
        }
        LatticeOp::Meet => {
            let b = need_b()?;
            let j = abs_pos_join(space, &space.neg(a), Some(&space.neg(b)), LatticeOp::Join, tol)?;
            Ok(space.neg(&j))
        }
    }
}

/// `psd(AB)` for exact elements of one algebra.
pub fn product_order_check(space: &HermSpace, a: &HermElement, b: &HermElement) -> Result<bool> {
    space.contains(a)?;
    space.contains(b)?;
    if !a.is_exact() || !b.is_exact() {
        return Err(Error::Precondition("product order check needs exact elements".into()));
    }
    psd_check(space.mul(a, b).matrix())
}

/// `−qI <= A <= qI`.
pub fn two_sided_bound(a: &RationalMatrix, q: &Rational) -> bool {
    let s = RationalMatrix::scalar(a.dim(), q);
    psd_check(&s.sub(a)).expect("symmetric") && psd_check(&s.add(a)).expect("symmetric")
}

/// `A² <= q² I`, the quadratic form of `‖Av‖² <= q²‖v‖²`.
pub fn square_bound(a: &RationalMatrix, q: &Rational) -> bool {
    let s = RationalMatrix::scalar(a.dim(), &(q * q));
    psd_check(&s.sub(&a.mul(a))).expect("symmetric")
}
