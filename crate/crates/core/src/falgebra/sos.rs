use num_traits::{One, Zero};

use super::algebra::round_coords;
use crate::error::{Error, Result};
use crate::instances::{HermElement, HermSpace};
use crate::numerics::{self, psd_check, Rational, RationalMatrix};
use crate::riesz::{self, RieszSpace};

/// Output of the sum-of-squares recurrence: `A = Σ squares_k² + residual`
/// holds as an exact rational identity.
#[derive(Debug, Clone)]
pub struct SumOfSquares {
    pub squares: Vec<HermElement>,
    pub residual: HermElement,
    /// Bound on `‖residual‖`.
    pub bound: Rational,
    pub converged: bool,
}

/// Grid for the rounded square roots; keeps denominators bounded while the
/// identity stays exact because the residual absorbs the rounding.
const SOS_BITS: u32 = 64;

/// Runs `A_{n+1} = A_n − A_n²` (with `A_n` rounded to a dyadic grid before
/// squaring) until `‖A_n‖ <= tol` or `max_iter` steps.
pub fn sum_of_squares(
    space: &HermSpace,
    a: &HermElement,
    tol: &Rational,
    max_iter: Option<usize>,
) -> Result<SumOfSquares> {
    space.contains(a)?;
    if !a.is_exact() {
        return Err(Error::Precondition("sum of squares needs an exact element".into()));
    }
    let n = space.dim();
    let m = a.matrix();
    if !psd_check(m)? || !psd_check(&RationalMatrix::identity(n).sub(m))? {
        return Err(Error::Precondition("sum of squares needs 0 <= A <= I".into()));
    }
    let alg = space.algebra();
    let mut residual = a.coords().to_vec();
    let mut squares = Vec::new();
    let cap = max_iter.unwrap_or(usize::MAX);
    let small = |r: &[Rational]| -> Result<bool> {
        let rm = alg.matrix_of(r);
        let t = RationalMatrix::scalar(n, tol);
        Ok(psd_check(&t.sub(&rm))? && psd_check(&t.add(&rm))?)
    };
    let mut converged = small(&residual)?;
    while !converged && squares.len() < cap {
        let (root, _) = round_coords(alg, &residual, SOS_BITS);
        let sq = alg.mul_coords(&root, &root);
        for (r, s) in residual.iter_mut().zip(&sq) {
            *r -= s;
        }
        squares.push(space.from_coords(root, Rational::zero()));
        converged = small(&residual)?;
    }
    let residual = space.from_coords(residual, Rational::zero());
    let bound = if converged {
        tol.clone()
    } else {
        let eps = numerics::pow2(-32);
        riesz::norm_cut(space, &residual)?.approx(&eps)? + space.lattice_tol() * numerics::int(2)
    };
    Ok(SumOfSquares {
        squares,
        residual,
        bound,
        converged,
    })
}

/// Verifies `A − Σ_{k<n} A_k² = A_n` for every prefix, exactly.
pub fn prefix_identity_holds(space: &HermSpace, a: &HermElement, sos: &SumOfSquares) -> bool {
    let mut acc = a.coords().to_vec();
    let alg = space.algebra();
    for sq in &sos.squares {
        let s = alg.mul_coords(sq.coords(), sq.coords());
        for (r, x) in acc.iter_mut().zip(&s) {
            *r -= x;
        }
    }
    acc == sos.residual.coords()
}

/// `‖R‖² <= 1/N` as `psd(I/N − R²)`.
pub fn rate_holds(space: &HermSpace, residual: &HermElement, n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let r = residual.matrix();
    let q = Rational::one() / numerics::int(n as i64);
    psd_check(&RationalMatrix::scalar(space.dim(), &q).sub(&r.mul(r))).expect("symmetric")
}
