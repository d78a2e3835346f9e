//! Spectral calculus through a primitive element: the algebra is `ℚ[s]/(p)`
//! for some `s` whose minimal polynomial `p` has degree equal to the rank,
//! so each element is a polynomial `f(s)` and its eigenvalues are `f(θ)` at
//! the roots `θ` of `p`. Root enclosures are isolated once per algebra and
//! refined on demand.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

use super::algebra::{round_coords, CommutingAlgebra};
use crate::numerics::{self, Poly, Rational, RationalMatrix, RootEnclosure};

#[derive(Debug)]
pub(crate) struct SpectralFrame {
    p: Poly,
    /// Monomial coordinates to coefficients of `f` with `x = f(s)`.
    to_power: Vec<Vec<Rational>>,
    /// Column `k` holds the monomial coordinates of `s^k`.
    from_power: Vec<Vec<Rational>>,
    /// Power of two with every root in `(-bound, bound)`.
    bound: Rational,
    /// Root enclosures of width `<= 2^-k`, keyed by `k`.
    roots: Mutex<BTreeMap<u32, Arc<Vec<RootEnclosure>>>>,
}

impl SpectralFrame {
    pub(crate) fn new(alg: &CommutingAlgebra) -> Self {
        let r = alg.rank();
        let ng = alg.generators().len();
        // s = Σ k^i g_i separates the joint eigenvalues for all but finitely many k
        let mut k = 1i64;
        let (s, p) = loop {
            let mut s = vec![Rational::zero(); r];
            if ng == 0 {
                s = alg.unit_coords();
            }
            let mut w = Rational::one();
            for i in 0..ng {
                for (a, b) in s.iter_mut().zip(alg.generator_coords(i)) {
                    *a += &w * b;
                }
                w *= numerics::int(k);
            }
            let p = alg.min_poly(&s);
            if p.degree() == Some(r) {
                break (s, p);
            }
            k += 1;
        };
        let mut cols = vec![alg.unit_coords()];
        for _ in 1..r {
            let next = alg.mul_coords(cols.last().expect("nonempty"), &s);
            cols.push(next);
        }
        let from_power: Vec<Vec<Rational>> = (0..r).map(|i| (0..r).map(|j| cols[j][i].clone()).collect()).collect();
        let to_power = RationalMatrix::from_rows(from_power.clone())
            .expect("square")
            .inverse()
            .expect("powers of a primitive element form a basis")
            .rows();
        let rb = p.root_bound();
        let mut bound = Rational::one();
        while bound < rb {
            bound *= numerics::int(2);
        }
        SpectralFrame {
            p,
            to_power,
            from_power,
            bound,
            roots: Mutex::new(BTreeMap::new()),
        }
    }

    fn apply(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
        m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `f` with `x = f(s)`.
    pub(crate) fn poly_of(&self, x: &[Rational]) -> Poly {
        Poly::new(Self::apply(&self.to_power, x))
    }

    pub(crate) fn coords_of_poly(&self, f: &Poly) -> Vec<Rational> {
        let r = self.from_power.len();
        let mut c = f.coeffs().to_vec();
        c.resize(r, Rational::zero());
        Self::apply(&self.from_power, &c)
    }

    pub(crate) fn bound(&self) -> &Rational {
        &self.bound
    }

    pub(crate) fn enclosures(&self, k: u32) -> Arc<Vec<RootEnclosure>> {
        let mut cache = self.roots.lock().expect("root cache lock");
        cache
            .entry(k)
            .or_insert_with(|| Arc::new(self.p.real_roots(&numerics::pow2(-(k as i64)))))
            .clone()
    }

    /// Enclosures of every eigenvalue `f(θ)` of `x`, each of width at most
    /// `width`, as `(lo, hi)` pairs.
    pub(crate) fn eigen_enclosures(&self, x: &[Rational], width: &Rational) -> Vec<(Rational, Rational)> {
        let f = self.poly_of(x);
        let lip = f.derivative_bound(&self.bound);
        let k = level_for(&lip, width);
        self.enclosures(k)
            .iter()
            .map(|e| {
                let c = f.eval(&e.midpoint());
                let rad = &lip * e.width() / numerics::int(2);
                (&c - &rad, c + rad)
            })
            .collect()
    }
}

/// Smallest `k` with `lip · 2^-k <= width`.
fn level_for(lip: &Rational, width: &Rational) -> u32 {
    let mut k = 0u32;
    let mut w = lip.clone();
    while &w > width {
        w /= numerics::int(2);
        k += 1;
    }
    k
}

/// Coordinates of an approximation `Y` of `|X|` with `‖Y − |X|‖ <= bound <= tol`.
///
/// `Y = y(s)` where `y` interpolates `|f|` at the enclosure midpoints; at a
/// root `θ` with midpoint `m` the error is at most `(L_f + L_y)|θ − m|`.
pub fn abs_coords(alg: &CommutingAlgebra, x: &[Rational], tol: &Rational) -> (Vec<Rational>, Rational) {
    let frame = alg.frame();
    let f = frame.poly_of(x);
    if f.degree().unwrap_or(0) == 0 {
        let c = f.coeffs().first().cloned().unwrap_or_else(Rational::zero);
        let mut out = vec![Rational::zero(); alg.rank()];
        out[0] = c.abs();
        return (out, Rational::zero());
    }
    let half = tol / numerics::int(2);
    let lf = f.derivative_bound(frame.bound());
    let mut k = level_for(&lf, &(&half / numerics::int(2)));
    let (y, interp_err) = loop {
        let roots = frame.enclosures(k);
        let nodes: Vec<Rational> = roots.iter().map(|r| r.midpoint()).collect();
        let values: Vec<Rational> = nodes.iter().map(|m| f.eval(m).abs()).collect();
        let y = Poly::interpolate(&nodes, &values);
        let lip = &lf + y.derivative_bound(frame.bound());
        let err = roots
            .iter()
            .map(|r| &lip * r.width() / numerics::int(2))
            .max()
            .unwrap_or_else(Rational::zero);
        if err <= half {
            break (y, err);
        }
        k += level_for(&err, &half).max(1);
    };
    let coords = frame.coords_of_poly(&y);
    let total_norm: Rational = alg.basis_norms().iter().sum();
    let mut bits = 0u32;
    while total_norm.clone() * numerics::pow2(-(bits as i64)) > half {
        bits += 8;
    }
    let (rounded, round_err) = round_coords(alg, &coords, bits);
    (rounded, interp_err + round_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat, RationalMatrix};

    #[test]
    fn diagonal_abs_is_exact_on_rational_spectrum() {
        let g = RationalMatrix::diag(&[int(1), int(-2), int(3)]);
        let alg = CommutingAlgebra::new(3, vec![g.clone()]).unwrap();
        let x = alg.coords_of(&g).unwrap();
        let tol = rat(1, 1 << 20);
        let (y, err) = abs_coords(&alg, &x, &tol);
        assert!(err <= tol);
        let m = alg.matrix_of(&y);
        let want = RationalMatrix::diag(&[int(1), int(2), int(3)]);
        let diff = m.sub(&want);
        assert!(diff.entries().iter().all(|d| numerics::abs(d) <= tol));
    }

    #[test]
    fn irrational_spectrum_within_tolerance() {
        // eigenvalues (1 ± sqrt 5)/2
        let g = RationalMatrix::from_i64(&[&[1, 1], &[1, 0]]);
        let alg = CommutingAlgebra::new(2, vec![g.clone()]).unwrap();
        let x = alg.coords_of(&g).unwrap();
        let tol = rat(1, 1 << 30);
        let (y, err) = abs_coords(&alg, &x, &tol);
        assert!(err <= tol);
        // |X|^2 = X^2 up to 2‖X‖·err + err^2
        let m = alg.matrix_of(&y);
        let d = m.mul(&m).sub(&g.mul(&g));
        let slack = int(8) * &tol;
        assert!(crate::numerics::psd_check(&RationalMatrix::scalar(2, &slack).sub(&d)).unwrap());
        assert!(crate::numerics::psd_check(&RationalMatrix::scalar(2, &slack).add(&d)).unwrap());
        assert!(crate::numerics::psd_check(&m.add(&RationalMatrix::scalar(2, &tol))).unwrap());
    }

    #[test]
    fn two_generators_share_one_frame() {
        let a = RationalMatrix::diag(&[int(1), int(1), int(2)]);
        let b = RationalMatrix::diag(&[int(0), int(1), int(0)]);
        let alg = CommutingAlgebra::new(3, vec![a, b]).unwrap();
        assert_eq!(alg.rank(), 3);
        let x = alg.coords_of(&RationalMatrix::diag(&[int(-1), int(2), int(-3)])).unwrap();
        let encl = alg.frame().eigen_enclosures(&x, &rat(1, 1024));
        let mut mids: Vec<Rational> = encl.iter().map(|(l, h)| (l + h) / int(2)).collect();
        mids.sort();
        for (m, want) in mids.iter().zip([int(-3), int(-1), int(2)]) {
            assert!(numerics::abs(&(m - want)) <= rat(1, 1024));
        }
    }
}
