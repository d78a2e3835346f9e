//! Seeded random samples: rational tuples, piecewise-linear functions and
//! commuting symmetric families `Q·diag(λ)·Qᵀ` with a rational orthogonal
//! `Q` (Cayley transform), so the joint spectrum is known exactly.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instances::{PlElement, QnElement};
use crate::numerics::{int, rat, Rational, RationalMatrix};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n/d` with `|n| <= num_max` and `d` in `1..=den_max`.
pub fn rational<R: Rng>(rng: &mut R, num_max: i64, den_max: i64) -> Rational {
    rat(rng.gen_range(-num_max..=num_max), rng.gen_range(1..=den_max))
}

pub fn qn<R: Rng>(rng: &mut R, n: usize) -> QnElement {
    QnElement::new((0..n).map(|_| rational(rng, 8, 4)).collect())
}

/// Between 2 and `max_breaks` breakpoints at multiples of 1/24.
pub fn pl<R: Rng>(rng: &mut R, max_breaks: usize) -> PlElement {
    let k = rng.gen_range(2..=max_breaks.clamp(2, 24));
    let mut xs: Vec<usize> = sample(rng, 23, k - 2).into_iter().map(|i| i + 1).collect();
    xs.sort_unstable();
    let mut pts = vec![(int(0), rational(rng, 8, 4))];
    for x in xs {
        pts.push((rat(x as i64, 24), rational(rng, 8, 4)));
    }
    pts.push((int(1), rational(rng, 8, 4)));
    PlElement::new(pts).expect("breakpoints are increasing from 0 to 1")
}

/// Rational orthogonal matrix `(I − K)(I + K)⁻¹` for a random skew `K`.
pub fn orthogonal<R: Rng>(rng: &mut R, n: usize) -> RationalMatrix {
    let mut k = RationalMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rat(rng.gen_range(-2..=2), rng.gen_range(1..=2));
            k.set(i, j, v.clone());
            k.set(j, i, -v);
        }
    }
    let id = RationalMatrix::identity(n);
    // I + K is invertible for skew K: its eigenvalues are 1 + it
    let inv = id.add(&k).inverse().expect("I + K is invertible");
    id.sub(&k).mul(&inv)
}

/// Commuting symmetric matrices `Q·diag(λ_i)·Qᵀ` with the shared `Q` kept.
#[derive(Debug, Clone)]
pub struct Family {
    pub q: RationalMatrix,
    pub spectra: Vec<Vec<Rational>>,
    pub matrices: Vec<RationalMatrix>,
}

impl Family {
    pub fn from_spectra(q: RationalMatrix, spectra: Vec<Vec<Rational>>) -> Self {
        let matrices = spectra.iter().map(|l| conjugate(&q, l)).collect();
        Family { q, spectra, matrices }
    }

    /// `Q·diag(f(λ))·Qᵀ` for member `i`.
    pub fn map(&self, i: usize, f: impl Fn(&Rational) -> Rational) -> RationalMatrix {
        let l: Vec<Rational> = self.spectra[i].iter().map(f).collect();
        conjugate(&self.q, &l)
    }
}

pub fn conjugate(q: &RationalMatrix, spectrum: &[Rational]) -> RationalMatrix {
    q.mul(&RationalMatrix::diag(spectrum)).mul(&q.transpose())
}

/// `count` commuting matrices of dimension `dim` with eigenvalues drawn by `eig`.
pub fn family<R: Rng>(
    rng: &mut R,
    dim: usize,
    count: usize,
    mut eig: impl FnMut(&mut R) -> Rational,
) -> Family {
    let q = orthogonal(rng, dim);
    let spectra = (0..count).map(|_| (0..dim).map(|_| eig(rng)).collect()).collect();
    Family::from_spectra(q, spectra)
}

/// Positive semidefinite members whose eigenvalues are squares of
/// rationals in `[0, 3]`, so the square root is known exactly.
pub fn psd_square_family<R: Rng>(rng: &mut R, dim: usize, count: usize) -> Family {
    family(rng, dim, count, |r| {
        let s = rat(r.gen_range(0..=6), 2);
        &s * &s
    })
}

/// Positive semidefinite members with eigenvalues in `[0, 4]`.
pub fn psd_family<R: Rng>(rng: &mut R, dim: usize, count: usize) -> Family {
    family(rng, dim, count, |r| rat(r.gen_range(0..=8), 2))
}

/// Indefinite members with eigenvalues in `[−3, 3]`.
pub fn symmetric_family<R: Rng>(rng: &mut R, dim: usize, count: usize) -> Family {
    family(rng, dim, count, |r| rat(r.gen_range(-6..=6), 2))
}
