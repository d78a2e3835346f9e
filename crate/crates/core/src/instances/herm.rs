use std::hash::{Hash, Hasher};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use super::{unpair_tuple, zigzag};
use crate::error::{Error, Result};
use crate::falgebra::{self, CommutingAlgebra, LatticeOp};
use crate::numerics::{self, psd_check, Rational, RationalMatrix, RoundMode};
use crate::riesz::{LocatedCut, RieszSpace, Verdict};

/// How lattice operations compute `|X|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    /// Certified spectral interpolation (fast at tiny tolerances).
    Spectral,
    /// `|X| = √(X²)` through the square-root iteration.
    Iteration,
}

/// The Riesz space of a commuting algebra of symmetric matrices, with
/// elements carrying an operator-norm error radius.
#[derive(Debug, Clone)]
pub struct HermSpace {
    alg: Arc<CommutingAlgebra>,
    tol: Rational,
    method: RootMethod,
}

/// A symmetric matrix in the algebra (stored by monomial coordinates) and
/// the radius `err` of the ball in which the represented element lies.
#[derive(Clone)]
pub struct HermElement {
    coords: Vec<Rational>,
    matrix: OnceLock<Arc<RationalMatrix>>,
    err: Rational,
    alg: Arc<CommutingAlgebra>,
}

impl fmt::Debug for HermElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermElement")
            .field("algebra", &self.alg.id())
            .field("coords", &self.coords)
            .field("err", &self.err)
            .finish()
    }
}

impl PartialEq for HermElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg.id() == other.alg.id() && self.coords == other.coords && self.err == other.err
    }
}

impl Eq for HermElement {}

impl Hash for HermElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.alg.id().hash(state);
        self.coords.hash(state);
        self.err.hash(state);
    }
}

impl HermElement {
    /// The stored matrix, built from the coordinates on first use.
    pub fn matrix(&self) -> &RationalMatrix {
        self.matrix.get_or_init(|| Arc::new(self.alg.matrix_of(&self.coords)))
    }

    pub fn err(&self) -> &Rational {
        &self.err
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn algebra_id(&self) -> u64 {
        self.alg.id()
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }
}

impl HermSpace {
    pub fn new(alg: Arc<CommutingAlgebra>) -> Self {
        Self {
            alg,
            tol: numerics::pow2(-64),
            method: RootMethod::Spectral,
        }
    }

    /// Tolerance of each lattice operation (added to the result's radius).
    pub fn with_tol(mut self, tol: Rational) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_method(mut self, method: RootMethod) -> Self {
        self.method = method;
        self
    }

    pub fn algebra(&self) -> &Arc<CommutingAlgebra> {
        &self.alg
    }

    pub fn lattice_tol(&self) -> &Rational {
        &self.tol
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Wraps a matrix of the algebra; fails when it is asymmetric or outside.
    pub fn element(&self, m: RationalMatrix, err: Rational) -> Result<HermElement> {
        m.ensure_symmetric()?;
        if err.is_negative() {
            return Err(Error::InvalidArgument("error radius must be nonnegative".into()));
        }
        let coords = self.alg.coords_of(&m)?;
        Ok(HermElement {
            coords,
            matrix: OnceLock::from(Arc::new(m)),
            err,
            alg: self.alg.clone(),
        })
    }

    pub fn exact(&self, m: RationalMatrix) -> Result<HermElement> {
        self.element(m, Rational::zero())
    }

    pub fn from_coords(&self, coords: Vec<Rational>, err: Rational) -> HermElement {
        HermElement {
            coords,
            matrix: OnceLock::new(),
            err,
            alg: self.alg.clone(),
        }
    }

    /// The `i`-th generator as an exact element.
    pub fn generator(&self, i: usize) -> HermElement {
        self.from_coords(self.alg.generator_coords(i).to_vec(), Rational::zero())
    }

    /// Upper bound on the operator norm of the stored matrix.
    pub fn norm_bound(&self, a: &HermElement) -> Rational {
        self.alg.norm_bound(&a.coords)
    }

    /// Algebra product with bilinear error propagation.
    pub fn mul(&self, a: &HermElement, b: &HermElement) -> HermElement {
        let coords = self.alg.mul_coords(&a.coords, &b.coords);
        let err = if a.err.is_zero() && b.err.is_zero() {
            Rational::zero()
        } else {
            self.norm_bound(a) * &b.err + self.norm_bound(b) * &a.err + &a.err * &b.err
        };
        self.from_coords(coords, err)
    }

    /// `|x|` with the configured method; returns the element and the
    /// approximation error of the root (excluding `x`'s own radius).
    fn abs_parts(&self, x: &HermElement) -> (Vec<Rational>, Rational) {
        match self.method {
            RootMethod::Spectral => falgebra::abs_coords(&self.alg, &x.coords, &self.tol),
            RootMethod::Iteration => {
                let sq = self.alg.mul_coords(&x.coords, &x.coords);
                let out = falgebra::sqrt_coords(&self.alg, &sq, &self.tol, None, false)
                    .expect("squares are positive");
                (out.coords, out.trace.root_bound)
            }
        }
    }

    fn positive_part_with_err(&self, x: &HermElement) -> (Vec<Rational>, Rational) {
        let (abs, root_err) = self.abs_parts(x);
        let half = numerics::rat(1, 2);
        let coords = abs.iter().zip(&x.coords).map(|(u, v)| (u + v) * &half).collect();
        (coords, root_err * half)
    }
}

impl RieszSpace for HermSpace {
    type Elem = HermElement;

    fn tag(&self) -> &'static str {
        "herm"
    }

    fn contains(&self, a: &HermElement) -> Result<()> {
        if a.alg.id() != self.alg.id() {
            return Err(Error::CrossSpace("matrix element belongs to a different algebra".into()));
        }
        Ok(())
    }

    fn zero(&self) -> HermElement {
        self.from_coords(vec![Rational::zero(); self.alg.rank()], Rational::zero())
    }

    fn unit(&self) -> HermElement {
        self.from_coords(self.alg.unit_coords(), Rational::zero())
    }

    fn add(&self, a: &HermElement, b: &HermElement) -> HermElement {
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        self.from_coords(coords, &a.err + &b.err)
    }

    fn scale(&self, q: &Rational, a: &HermElement) -> HermElement {
        let coords = a.coords.iter().map(|x| x * q).collect();
        self.from_coords(coords, &a.err * numerics::abs(q))
    }

    /// `a + (b − a)⁺`; the radius is `max(ea, eb)` plus the root error.
    fn join(&self, a: &HermElement, b: &HermElement) -> HermElement {
        if a == b {
            return a.clone();
        }
        let d = self.sub(b, a);
        let (pos, root_err) = self.positive_part_with_err(&d);
        let coords = a.coords.iter().zip(&pos).map(|(x, y)| x + y).collect();
        self.from_coords(coords, numerics::max(&a.err, &b.err) + root_err)
    }

    /// `a − (a − b)⁺`.
    fn meet(&self, a: &HermElement, b: &HermElement) -> HermElement {
        if a == b {
            return a.clone();
        }
        let d = self.sub(a, b);
        let (pos, root_err) = self.positive_part_with_err(&d);
        let coords = a.coords.iter().zip(&pos).map(|(x, y)| x - y).collect();
        self.from_coords(coords, numerics::max(&a.err, &b.err) + root_err)
    }

    /// Certified for every matrix within the radii, else `Unknown`.
    fn leq(&self, a: &HermElement, b: &HermElement) -> Verdict {
        let d = self.sub(b, a);
        let e = &d.err;
        let n = self.alg.dim();
        if psd_check(&d.matrix().sub(&RationalMatrix::scalar(n, e))).expect("symmetric") {
            return Verdict::True;
        }
        if !psd_check(&d.matrix().add(&RationalMatrix::scalar(n, e))).expect("symmetric") {
            return Verdict::False;
        }
        Verdict::Unknown
    }

    fn sup_cut(&self, a: &HermElement) -> LocatedCut {
        herm_sup_cut(self, a)
    }

    fn error_radius(&self, a: &HermElement) -> Rational {
        a.err.clone()
    }

    /// Coordinate vectors over the monomial basis (rational polynomials in
    /// the generators, by degree then coefficient size).
    fn dense_element(&self, k: u64) -> Option<HermElement> {
        let r = self.alg.rank();
        let t = unpair_tuple(k, r + 1);
        let den = t[0] as i64 + 1;
        let coords = t[1..].iter().map(|&n| numerics::rat(zigzag(n), den)).collect();
        Some(self.from_coords(coords, Rational::zero()))
    }
}

/// Located cut of `λ_max` of the represented element. Each refinement
/// proposes a bracket from the algebra's eigenvalue enclosures and confirms
/// it with two exact tests `psd(qI − M)`; if a proposal fails to confirm,
/// exact bisection on `q` takes over. The bracket is widened by the radius.
pub fn herm_sup_cut(space: &HermSpace, a: &HermElement) -> LocatedCut {
    let m = a.matrix().clone();
    let err = a.err.clone();
    let (g_lo, g_hi) = m.gershgorin();
    if g_lo == g_hi && err.is_zero() {
        // Gershgorin collapses only for scalar matrices
        return LocatedCut::exact(g_hi);
    }
    let alg = space.alg.clone();
    let coords = a.coords.clone();
    // invariant: lambda_max(M) in (lo, hi]
    let state = Mutex::new((g_lo - Rational::one(), g_hi));
    LocatedCut::from_refiner(move |eps: &Rational| {
        let two_err = &err * numerics::int(2);
        if eps <= &two_err {
            return Err(Error::Unresolvable(format!(
                "precision {eps} not above twice the error radius {err}"
            )));
        }
        let width = eps - &two_err;
        let mut st = state.lock().unwrap();
        let n = m.dim();
        let below = |q: &Rational| psd_check(&RationalMatrix::scalar(n, q).sub(&m)).expect("symmetric");
        if &(&st.1 - &st.0) > &width {
            let quarter = &width / numerics::int(4);
            let encl = alg.frame().eigen_enclosures(&coords, &quarter);
            let lo = encl.iter().map(|e| e.0.clone()).max().expect("rank is positive");
            let hi = encl.iter().map(|e| e.1.clone()).max().expect("rank is positive");
            let mut bits = 0u32;
            while numerics::pow2(-(bits as i64)) > &width / numerics::int(16) {
                bits += 1;
            }
            let lo = numerics::round_dyadic(&(lo - &width / numerics::int(8)), bits, RoundMode::Down);
            let hi = numerics::round_dyadic(&(hi + &width / numerics::int(8)), bits, RoundMode::Up);
            if lo < st.1 && hi > st.0 && below(&hi) && !below(&lo) {
                st.0 = numerics::max(&st.0, &lo);
                st.1 = numerics::min(&st.1, &hi);
            }
        }
        while &(&st.1 - &st.0) > &width {
            let mid = (&st.0 + &st.1) / numerics::int(2);
            if below(&mid) {
                st.1 = mid;
            } else {
                st.0 = mid;
            }
        }
        Ok((&st.0 - &err, &st.1 + &err))
    })
}

/// `A ∨ B = A + (B − A)⁺` with the positive part through the square-root
/// iteration at tolerance `tol`; radius `A.err + B.err + tol`.
pub fn herm_join(space: &HermSpace, a: &HermElement, b: &HermElement, tol: &Rational) -> Result<HermElement> {
    falgebra::abs_pos_join(space, a, Some(b), LatticeOp::Join, tol)
}
