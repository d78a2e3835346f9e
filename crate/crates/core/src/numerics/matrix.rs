use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// Dense square matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, &Rational::one())
    }

    pub fn scalar(dim: usize, q: &Rational) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = q.clone();
        }
        m
    }

    pub fn diag(values: &[Rational]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix must have positive dimension".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rational::int(x)).collect())
                .collect(),
        )
        .expect("square integer matrix")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * q).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn shift(&self, q: &Rational) -> Self {
        self.add(&Self::scalar(self.dim, q))
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        out
    }

    /// First off-diagonal pair `(i, j)` with `a_ij != a_ji`, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        let n = self.dim;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.get(i, j) != self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }

    pub fn ensure_symmetric(&self) -> Result<()> {
        match self.asymmetry() {
            Some((row, col)) => Err(Error::NotSymmetric { row, col }),
            None => Ok(()),
        }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.mul(other).sub(&other.mul(self)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn frobenius_sq(&self) -> Rational {
        self.entries.iter().map(|a| a * a).sum()
    }

    /// Rational upper bound on the operator norm (via the Frobenius norm).
    pub fn norm_upper(&self) -> Rational {
        rational::sqrt_upper(&self.frobenius_sq(), 16)
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum of a symmetric matrix.
    pub fn gershgorin(&self) -> (Rational, Rational) {
        let n = self.dim;
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for i in 0..n {
            let radius: Rational = (0..n)
                .filter(|&j| j != i)
                .map(|j| self.get(i, j).abs())
                .sum();
            let c = self.get(i, i);
            let l = c - &radius;
            let h = c + &radius;
            lo = Some(match lo {
                Some(x) if x <= l => x,
                _ => l,
            });
            hi = Some(match hi {
                Some(x) if x >= h => x,
                _ => h,
            });
        }
        (lo.unwrap(), hi.unwrap())
    }

    pub fn max_diagonal(&self) -> Rational {
        (0..self.dim)
            .map(|i| self.get(i, i).clone())
            .max()
            .expect("positive dimension")
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.rows();
        let mut inv = Self::identity(n).rows();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &p;
                inv[col][j] = &inv[col][j] / &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let t = &f * &a[col][j];
                        a[r][j] -= t;
                        let t = &f * &inv[col][j];
                        inv[r][j] -= t;
                    }
                }
            }
        }
        Some(Self::from_rows(inv).expect("square"))
    }
}

/// Exact positive-semidefiniteness decision for a symmetric matrix.
///
/// Symmetric LDLᵀ elimination, pivoting on the largest remaining diagonal
/// entry. When every remaining diagonal entry is zero the remaining block is
/// PSD only if it vanishes, which handles rank-deficient pivots.
pub fn psd_check(a: &RationalMatrix) -> Result<bool> {
    a.ensure_symmetric()?;
    Ok(psd_unchecked(a))
}

pub(crate) fn psd_unchecked(a: &RationalMatrix) -> bool {
    let mut w = a.rows();
    let mut active: Vec<usize> = (0..a.dim()).collect();
    loop {
        if active.is_empty() {
            return true;
        }
        let mut pivot = active[0];
        for &i in &active {
            if w[i][i].is_negative() {
                return false;
            }
            if w[i][i] > w[pivot][pivot] {
                pivot = i;
            }
        }
        let d = w[pivot][pivot].clone();
        if d.is_zero() {
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| w[i][j].is_zero()));
        }
        active.retain(|&i| i != pivot);
        let col: Vec<Rational> = active.iter().map(|&i| w[i][pivot].clone()).collect();
        for (x, &i) in active.iter().enumerate() {
            if col[x].is_zero() {
                continue;
            }
            let f = &col[x] / &d;
            for (y, &j) in active.iter().enumerate().skip(x) {
                if col[y].is_zero() {
                    continue;
                }
                let v = &w[i][j] - &f * &col[y];
                w[i][j] = v.clone();
                w[j][i] = v;
            }
        }
    }
}
