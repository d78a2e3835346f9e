use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{self, Rational};

/// Univariate polynomial over the rationals, coefficients from low to high
/// degree with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

/// Closed enclosure `[lo, hi]` of one real root; `lo == hi` marks an exact root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootEnclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootEnclosure {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rational::int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(self.0.iter().map(|c| c * q).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rational::int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(Rational::one() / l)),
            None => Self::zero(),
        }
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut r = self.0.clone();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Self::new(q), Self::new(r))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Strict bound `B` with every real root in `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading().expect("nonzero polynomial").abs();
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        m + rational::int(1)
    }

    fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&rational::int(-1)));
        }
        seq
    }

    /// Sturm sign changes at the dyadic point `m / 2^k`.
    fn sign_changes(seq: &[IntPoly], m: &BigInt, k: u32) -> usize {
        let mut changes = 0;
        let mut last = Sign::NoSign;
        for p in seq {
            let s = p.sign_at(m, k);
            if s != Sign::NoSign {
                if last != Sign::NoSign && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Enclosures of all distinct real roots, each of width at most `width`,
    /// in increasing order. Uses Sturm sequences of the squarefree part,
    /// bisecting at dyadic points so every sign is an integer evaluation.
    pub fn real_roots(&self, width: &Rational) -> Vec<RootEnclosure> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let p = self.squarefree();
        let seq: Vec<IntPoly> = p.sturm_sequence().iter().map(IntPoly::from_poly).collect();
        let b = p.root_bound();
        let mut e = 0u64;
        while rational::pow2(e as i64) < b {
            e += 1;
        }
        let top = BigInt::one() << e;
        let mut out = Vec::new();
        // Sturm's count V(a) - V(b) is the number of roots in (a, b].
        let mut stack = vec![(Dyadic::new(-top.clone(), 0), Dyadic::new(top, 0))];
        while let Some((lo, hi)) = stack.pop() {
            let vlo = Self::sign_changes(&seq, &lo.m, lo.k);
            let count = vlo - Self::sign_changes(&seq, &hi.m, hi.k);
            if count == 0 {
                continue;
            }
            if count == 1 {
                out.push(Self::refine(&seq, lo, hi, vlo, width));
                continue;
            }
            let mid = lo.midpoint(&hi);
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        out
    }

    fn refine(seq: &[IntPoly], mut lo: Dyadic, mut hi: Dyadic, vlo: usize, width: &Rational) -> RootEnclosure {
        let p = &seq[0];
        if p.sign_at(&hi.m, hi.k) == Sign::NoSign {
            let r = hi.to_rational();
            return RootEnclosure { lo: r.clone(), hi: r };
        }
        let mut w = hi.to_rational() - lo.to_rational();
        while &w > width {
            let mid = lo.midpoint(&hi);
            if p.sign_at(&mid.m, mid.k) == Sign::NoSign {
                let r = mid.to_rational();
                return RootEnclosure { lo: r.clone(), hi: r };
            }
            if vlo - Self::sign_changes(seq, &mid.m, mid.k) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
            w /= rational::int(2);
        }
        RootEnclosure {
            lo: lo.to_rational(),
            hi: hi.to_rational(),
        }
    }

    /// Interpolating polynomial through distinct nodes (Newton form, expanded).
    pub fn interpolate(nodes: &[Rational], values: &[Rational]) -> Self {
        assert_eq!(nodes.len(), values.len());
        let n = nodes.len();
        let mut dd = values.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&nodes[i] - &nodes[i - level]);
            }
        }
        let mut acc = Poly::zero();
        for i in (0..n).rev() {
            let lin = Poly::new(vec![-nodes[i].clone(), Rational::one()]);
            acc = acc.mul(&lin).add(&Poly::constant(dd[i].clone()));
        }
        acc
    }

    /// Upper bound on `|p'(x)|` for `|x| <= m`.
    pub fn derivative_bound(&self, m: &Rational) -> Rational {
        let mut pow = Rational::one();
        let mut total = Rational::zero();
        for (k, c) in self.0.iter().enumerate().skip(1) {
            total += c.abs() * rational::int(k as i64) * &pow;
            pow *= m;
        }
        total
    }
}

/// `m / 2^k`.
#[derive(Debug, Clone)]
struct Dyadic {
    m: BigInt,
    k: u32,
}

impl Dyadic {
    fn new(m: BigInt, k: u32) -> Self {
        Dyadic { m, k }
    }

    fn midpoint(&self, other: &Dyadic) -> Dyadic {
        let k = self.k.max(other.k);
        let a = &self.m << (k - self.k);
        let b = &other.m << (k - other.k);
        Dyadic::new(a + b, k + 1)
    }

    fn to_rational(&self) -> Rational {
        Rational::new(self.m.clone(), BigInt::one() << self.k)
    }
}

/// Positive integer multiple of a rational polynomial (same signs).
#[derive(Debug, Clone)]
struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn from_poly(p: &Poly) -> Self {
        let l = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly(p.0.iter().map(|c| c.numer() * (&l / c.denom())).collect())
    }

    /// Sign of `p(m / 2^k)`, from `2^{kd} p(m / 2^k) = Σ c_i m^i 2^{k(d−i)}`.
    fn sign_at(&self, m: &BigInt, k: u32) -> Sign {
        let mut acc = BigInt::zero();
        let mut scale = 0u64;
        for c in self.0.iter().rev() {
            acc = acc * m + (c << scale);
            scale += k as u64;
        }
        acc.sign()
    }
}
