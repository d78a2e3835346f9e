use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::pl::multiplier_from_pairs;
use super::{unpair_tuple, zigzag};
use crate::error::{Error, Result};
use crate::numerics::{self, Rational};
use crate::riesz::{LocatedCut, MultiplierBound, RieszSpace, Verdict};

/// `Qⁿ` with pointwise order and unit `(1, …, 1)`: continuous functions on
/// an `n`-point space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QnSpace {
    dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QnElement(Vec<Rational>);

impl QnElement {
    pub fn new(coords: Vec<Rational>) -> Self {
        QnElement(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        QnElement(coords.iter().map(|&c| numerics::int(c)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl QnSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("Qⁿ needs n >= 1".into()));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `i`-th coordinate projection, a representation of `Qⁿ`.
    pub fn project(&self, a: &QnElement, i: usize) -> Rational {
        a.0[i].clone()
    }

    fn zip(&self, a: &QnElement, b: &QnElement, f: impl Fn(&Rational, &Rational) -> Rational) -> QnElement {
        QnElement(a.0.iter().zip(&b.0).map(|(x, y)| f(x, y)).collect())
    }

    fn max_coord(a: &QnElement) -> Rational {
        a.0.iter().max().expect("n >= 1").clone()
    }
}

impl RieszSpace for QnSpace {
    type Elem = QnElement;

    fn tag(&self) -> &'static str {
        "qn"
    }

    fn contains(&self, a: &QnElement) -> Result<()> {
        if a.dim() != self.dim {
            return Err(Error::CrossSpace(format!(
                "element of Q^{} used in Q^{}",
                a.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    fn zero(&self) -> QnElement {
        QnElement(vec![Rational::zero(); self.dim])
    }

    fn unit(&self) -> QnElement {
        QnElement(vec![Rational::one(); self.dim])
    }

    fn add(&self, a: &QnElement, b: &QnElement) -> QnElement {
        self.zip(a, b, |x, y| x + y)
    }

    fn scale(&self, q: &Rational, a: &QnElement) -> QnElement {
        QnElement(a.0.iter().map(|x| x * q).collect())
    }

    fn join(&self, a: &QnElement, b: &QnElement) -> QnElement {
        self.zip(a, b, numerics::max)
    }

    fn meet(&self, a: &QnElement, b: &QnElement) -> QnElement {
        self.zip(a, b, numerics::min)
    }

    fn leq(&self, a: &QnElement, b: &QnElement) -> Verdict {
        Verdict::from_bool(a.0.iter().zip(&b.0).all(|(x, y)| x <= y))
    }

    fn sup_cut(&self, a: &QnElement) -> LocatedCut {
        LocatedCut::exact(Self::max_coord(a))
    }

    fn unit_bound(&self, a: &QnElement) -> BigInt {
        numerics::ceil_int(&Self::max_coord(a)).max(BigInt::zero())
    }

    fn multiplier_bound(&self, a: &QnElement, b: &QnElement) -> MultiplierBound {
        multiplier_from_pairs(a.0.iter().zip(&b.0))
    }

    /// Rational vectors via unpairing: a common denominator followed by
    /// zigzag-coded numerators.
    fn dense_element(&self, k: u64) -> Option<QnElement> {
        let t = unpair_tuple(k, self.dim + 1);
        let den = t[0] as i64 + 1;
        Some(QnElement(
            t[1..].iter().map(|&n| numerics::rat(zigzag(n), den)).collect(),
        ))
    }
}
