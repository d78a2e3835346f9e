use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use super::spectral::SpectralFrame;
use crate::error::{Error, Result};
use crate::numerics::{self, Poly, RationalMatrix, Rational};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Pairwise-commuting rational symmetric matrices and the commutative
/// algebra they generate, with a monomial basis `E_0 = I, E_1, …` found by
/// breadth-first search over generator products.
#[derive(Debug)]
pub struct CommutingAlgebra {
    id: u64,
    dim: usize,
    generators: Vec<RationalMatrix>,
    basis: Vec<RationalMatrix>,
    /// Monomial exponents of each basis element.
    exponents: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    pivot_inv: Vec<Vec<Rational>>,
    /// `structure[i][j]` = coordinates of `E_i E_j`.
    structure: Vec<Vec<Vec<Rational>>>,
    /// `norms[j] >= ‖E_j‖`.
    norms: Vec<Rational>,
    gen_coords: Vec<Vec<Rational>>,
    frame: OnceLock<SpectralFrame>,
}

/// Incremental row echelon form used to test linear independence.
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &f * r;
                }
            }
        }
        v
    }

    /// Adds `v` if independent; returns the pivot column.
    fn insert(&mut self, v: &[Rational]) -> Option<usize> {
        let mut v = self.reduce(v);
        let p = v.iter().position(|x| !x.is_zero())?;
        let lead = v[p].clone();
        for x in v.iter_mut() {
            *x /= &lead;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (r, x) in row.iter_mut().zip(&v) {
                    *r -= &f * x;
                }
            }
        }
        self.rows.push((p, v));
        Some(p)
    }
}

impl CommutingAlgebra {
    /// Validates symmetry, equal dimensions and pairwise commutation.
    pub fn new(dim: usize, generators: Vec<RationalMatrix>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be positive".into()));
        }
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.dim(),
                });
            }
            g.ensure_symmetric()?;
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                let c = generators[i].mul(&generators[j]).sub(&generators[j].mul(&generators[i]));
                if let Some(pos) = c.entries().iter().position(|x| !x.is_zero()) {
                    return Err(Error::NonCommuting {
                        first: i,
                        second: j,
                        row: pos / dim,
                        col: pos % dim,
                        value: c.entries()[pos].to_string(),
                    });
                }
            }
        }
        Ok(Self::build(dim, generators))
    }

    fn build(dim: usize, generators: Vec<RationalMatrix>) -> Self {
        let ng = generators.len();
        let mut ech = Echelon { rows: Vec::new() };
        let mut basis = vec![RationalMatrix::identity(dim)];
        let mut exponents = vec![vec![0u32; ng]];
        let mut pivots = vec![ech.insert(basis[0].entries()).expect("identity is nonzero")];
        let mut head = 0;
        while head < basis.len() {
            for (g, gen) in generators.iter().enumerate() {
                let cand = basis[head].mul(gen);
                if let Some(p) = ech.insert(cand.entries()) {
                    let mut e = exponents[head].clone();
                    e[g] += 1;
                    basis.push(cand);
                    exponents.push(e);
                    pivots.push(p);
                }
            }
            head += 1;
        }
        let m = basis.len();
        let pmat = RationalMatrix::from_rows(
            (0..m)
                .map(|i| (0..m).map(|j| basis[j].entries()[pivots[i]].clone()).collect())
                .collect(),
        )
        .expect("square");
        let pivot_inv = pmat.inverse().expect("pivot block of an independent family is invertible").rows();
        let norms = basis.iter().map(RationalMatrix::norm_upper).collect();
        let mut alg = CommutingAlgebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            dim,
            generators,
            basis,
            exponents,
            pivots,
            pivot_inv,
            structure: Vec::new(),
            norms,
            gen_coords: Vec::new(),
            frame: OnceLock::new(),
        };
        let mut structure = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in i..m {
                let c = alg
                    .coords_of(&alg.basis[i].mul(&alg.basis[j]))
                    .expect("the algebra is closed under products");
                structure[j][i] = c.clone();
                structure[i][j] = c;
            }
        }
        alg.structure = structure;
        alg.gen_coords = alg
            .generators
            .iter()
            .map(|g| alg.coords_of(g).expect("generators lie in the algebra"))
            .collect();
        alg
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[RationalMatrix] {
        &self.generators
    }

    /// Number of basis monomials (the algebra's dimension as a vector space).
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RationalMatrix] {
        &self.basis
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    pub fn basis_norms(&self) -> &[Rational] {
        &self.norms
    }

    pub fn generator_coords(&self, i: usize) -> &[Rational] {
        &self.gen_coords[i]
    }

    /// Coordinates of `m` in the monomial basis, or `NotInAlgebra`.
    pub fn coords_of(&self, m: &RationalMatrix) -> Result<Vec<Rational>> {
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.dim(),
            });
        }
        let v: Vec<&Rational> = self.pivots.iter().map(|&p| &m.entries()[p]).collect();
        let c: Vec<Rational> = self
            .pivot_inv
            .iter()
            .map(|row| row.iter().zip(&v).map(|(a, b)| a * *b).sum())
            .collect();
        if &self.matrix_of(&c) != m {
            return Err(Error::NotInAlgebra);
        }
        Ok(c)
    }

    pub fn matrix_of(&self, coords: &[Rational]) -> RationalMatrix {
        let mut acc = RationalMatrix::zeros(self.dim);
        for (c, e) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&e.scale(c));
            }
        }
        acc
    }

    /// Primitive element, its minimal polynomial and cached root enclosures.
    pub(crate) fn frame(&self) -> &SpectralFrame {
        self.frame.get_or_init(|| SpectralFrame::new(self))
    }

    pub fn unit_coords(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.rank()];
        v[0] = Rational::one();
        v
    }

    pub fn mul_coords(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let m = self.rank();
        let mut out = vec![Rational::zero(); m];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let f = ai * bj;
                for (o, s) in out.iter_mut().zip(&self.structure[i][j]) {
                    if !s.is_zero() {
                        *o += &f * s;
                    }
                }
            }
        }
        out
    }

    /// Operator-norm bound `Σ |c_j| ‖E_j‖`.
    pub fn norm_bound(&self, coords: &[Rational]) -> Rational {
        coords.iter().zip(&self.norms).map(|(c, n)| c.abs() * n).sum()
    }

    /// Minimal polynomial of the element with coordinates `x` (monic), from
    /// the first linear dependence among its powers.
    pub fn min_poly(&self, x: &[Rational]) -> Poly {
        let m = self.rank();
        let mut powers: Vec<Vec<Rational>> = vec![self.unit_coords()];
        // rows [coords | e_k] reduced together record the dependence
        let mut ech = Echelon { rows: Vec::new() };
        let aug = |v: &[Rational], k: usize, len: usize| {
            let mut row = v.to_vec();
            row.extend((0..len).map(|i| if i == k { Rational::one() } else { Rational::zero() }));
            row
        };
        let len = m + 1;
        ech.insert(&aug(&powers[0], 0, len));
        loop {
            let k = powers.len();
            let next = self.mul_coords(&powers[k - 1], x);
            let reduced = ech.reduce(&aug(&next, k, len));
            if reduced[..m].iter().all(Zero::is_zero) {
                // reduced tail holds c with Σ c_i x^i = 0 and c_k = 1
                return Poly::new(reduced[m..m + k + 1].to_vec()).monic();
            }
            ech.insert(&reduced);
            powers.push(next);
        }
    }

    /// Evaluates `p(x)` in coordinates by Horner's rule.
    pub fn eval_poly(&self, p: &Poly, x: &[Rational]) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.rank()];
        for c in p.coeffs().iter().rev() {
            acc = self.mul_coords(&acc, x);
            acc[0] += c;
        }
        acc
    }
}

/// Rounds coordinates down to the `2^-bits` grid, leaving alone those whose
/// denominator is already short; returns the coordinates and a bound on the
/// operator-norm change.
pub(crate) fn round_coords(alg: &CommutingAlgebra, coords: &[Rational], bits: u32) -> (Vec<Rational>, Rational) {
    let mut err = Rational::zero();
    let out = coords
        .iter()
        .zip(alg.basis_norms())
        .map(|(c, n)| {
            if c.denom().bits() <= bits as u64 {
                return c.clone();
            }
            let r = numerics::round_dyadic(c, bits, numerics::RoundMode::Down);
            err += (c - &r) * n;
            r
        })
        .collect();
    (out, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};

    fn diag(v: &[i64]) -> RationalMatrix {
        RationalMatrix::diag(&v.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn accepts_commuting_diagonals() {
        let a = CommutingAlgebra::new(2, vec![diag(&[1, 2]), diag(&[3, 4])]).unwrap();
        assert_eq!(a.rank(), 2);
        let c = a.coords_of(&diag(&[5, 7])).unwrap();
        assert_eq!(a.matrix_of(&c), diag(&[5, 7]));
    }

    #[test]
    fn rejects_non_commuting_pair() {
        let swap = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        match CommutingAlgebra::new(2, vec![diag(&[1, 0]), swap]) {
            Err(Error::NonCommuting { first: 0, second: 1, value, .. }) => assert_ne!(value, "0"),
            other => panic!("expected NonCommuting, got {other:?}"),
        }
    }

    #[test]
    fn rejects_asymmetric_generator() {
        let m = RationalMatrix::from_i64(&[&[1, 2], &[0, 1]]);
        assert!(matches!(CommutingAlgebra::new(2, vec![m]), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn empty_family_gives_scalars() {
        let a = CommutingAlgebra::new(3, vec![]).unwrap();
        assert_eq!(a.rank(), 1);
        assert!(a.coords_of(&RationalMatrix::scalar(3, &rat(2, 3))).is_ok());
        assert_eq!(a.coords_of(&diag(&[1, 2, 3])), Err(Error::NotInAlgebra));
    }

    #[test]
    fn products_and_min_poly() {
        let g = RationalMatrix::from_i64(&[&[2, 1], &[1, 2]]);
        let a = CommutingAlgebra::new(2, vec![g.clone()]).unwrap();
        let x = a.coords_of(&g).unwrap();
        assert_eq!(a.matrix_of(&a.mul_coords(&x, &x)), g.mul(&g));
        // eigenvalues 1 and 3
        let p = a.min_poly(&x);
        assert_eq!(p.coeffs(), &[int(3), int(-4), int(1)]);
        assert!(a.eval_poly(&p, &x).iter().all(Zero::is_zero));
        let one = a.min_poly(&a.unit_coords());
        assert_eq!(one.coeffs(), &[int(-1), int(1)]);
    }
}
