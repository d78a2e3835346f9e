//! Square root of a positive element by the iteration
//! `B_{n+1} = ½(I − A′ + B_n²)`, `B_0 = 0`, which increases to `I − √A′`
//! for `0 ≤ A′ ≤ I`. Iterates live in the power basis of `A′` with
//! coefficients rounded down on a dyadic grid, so they stay polynomials in
//! the algebra and below the scalar majorant `r_{n+1} = ½(1 + r_n²)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::algebra::CommutingAlgebra;
use crate::error::{Error, Result};
use crate::numerics::{self, psd_check, Rational, RationalMatrix};

/// Diagnostics of one square-root run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtTrace {
    /// Number of iterations `N`.
    pub iterations: usize,
    /// Scale exponent: `A′ = A / 4^k`.
    pub k: u32,
    /// Upper bounds on `r_0, …, r_{N+1}` (exact while denominators fit 128 bits).
    pub majorant: Vec<Rational>,
    /// Certified `‖S² − A‖` bound.
    pub err_bound: Rational,
    /// Bound on `‖S − √A‖`.
    pub root_bound: Rational,
    /// A priori iteration cap with `(1 − ε′/2)^cap <= ε′`.
    pub iteration_cap: usize,
    /// The `ε′` used by the cap.
    pub cap_eps: Rational,
}

pub struct SqrtOutcome {
    pub coords: Vec<Rational>,
    pub trace: SqrtTrace,
    /// Iterates `B̃_n` in algebra coordinates, when requested.
    pub iterates: Vec<Vec<Rational>>,
}

const MAJORANT_BITS: u32 = 128;

fn ceil_log2(q: &Rational) -> i64 {
    // smallest e with 2^e >= q, for q > 0
    let mut e = 0i64;
    while &numerics::pow2(e) < q {
        e += 1;
    }
    while &numerics::pow2(e - 1) >= q {
        e -= 1;
    }
    e
}

fn lcm_denominators<'a>(qs: impl Iterator<Item = &'a Rational>) -> BigInt {
    qs.fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

fn scaled_numerator(q: &Rational, den: &BigInt) -> BigInt {
    (q * Rational::from_integer(den.clone())).to_integer()
}

/// Minimal `k >= 0` with `A <= 4^k I`.
pub(crate) fn scale_exponent(m: &RationalMatrix) -> u32 {
    let mut k = 0u32;
    while !psd_check(&RationalMatrix::scalar(m.dim(), &numerics::pow2(2 * k as i64)).sub(m)).expect("symmetric") {
        k += 1;
    }
    k
}

/// Runs the iteration on an exact positive element with coordinates `x`.
pub fn sqrt_coords(
    alg: &CommutingAlgebra,
    x: &[Rational],
    tol: &Rational,
    max_iter: Option<usize>,
    keep_iterates: bool,
) -> Result<SqrtOutcome> {
    if !tol.is_positive() {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let m_a = alg.matrix_of(x);
    if !psd_check(&m_a)? {
        return Err(Error::NotPsd);
    }
    let k = scale_exponent(&m_a);
    let two_k = numerics::pow2(k as i64);
    let mu = &two_k * &two_k;
    let a1: Vec<Rational> = x.iter().map(|c| c / &mu).collect();

    // power basis of A′ and reduction of A′^{m+i} into it
    let q = alg.min_poly(&a1);
    let m = q.degree().expect("nonzero minimal polynomial");
    let mut table: Vec<Vec<Rational>> = Vec::new();
    if m >= 2 {
        let mut row: Vec<Rational> = q.coeffs()[..m].iter().map(|c| -c).collect();
        table.push(row.clone());
        for _ in 1..m - 1 {
            let top = row[m - 1].clone();
            let mut next = vec![Rational::zero(); m];
            for j in 0..m {
                next[j] = &top * &table[0][j];
                if j > 0 {
                    next[j] += &row[j - 1];
                }
            }
            row = next;
            table.push(row.clone());
        }
    }
    // I − A′ in the power basis
    let c: Vec<Rational> = if m == 1 {
        vec![Rational::one() + &q.coeffs()[0]]
    } else {
        let mut v = vec![Rational::zero(); m];
        v[0] = Rational::one();
        v[1] = -Rational::one();
        v
    };
    let den = lcm_denominators(table.iter().flatten());
    let tab_num: Vec<Vec<BigInt>> = table
        .iter()
        .map(|r| r.iter().map(|t| scaled_numerator(t, &den)).collect())
        .collect();
    let dc = lcm_denominators(c.iter());
    let c_num: Vec<BigInt> = c.iter().map(|t| scaled_numerator(t, &dc)).collect();

    // ε′ = 2^-e <= tol / 2^{k+1}; the cap N with (1 − ε′/2)^N <= ε′ follows
    // from (1 − x)^N <= exp(−xN) and ln 2 < 6932/10000.
    let e = ceil_log2(&(&two_k * numerics::int(2) / tol)).max(1);
    let cap_eps = numerics::pow2(-e);
    let cap_q = numerics::int(e) * numerics::pow2(e + 1) * numerics::rat(6932, 10000);
    let iteration_cap = numerics::ceil_int(&cap_q).try_into().unwrap_or(usize::MAX);

    let p_bits = ceil_log2(
        &(numerics::int(8) * &two_k * numerics::int(iteration_cap.max(1) as i64) * numerics::int(m as i64) / tol),
    )
    .max(8) as u32;
    let one_p = BigInt::one() << p_bits;
    let two_p2 = BigInt::one() << (2 * p_bits);
    let step_delta = numerics::int(m as i64) * numerics::pow2(-(p_bits as i64));
    let limit = max_iter.unwrap_or(usize::MAX).min(iteration_cap);

    let scale_r = BigInt::one() << MAJORANT_BITS;
    let r_two = BigInt::one() << (2 * MAJORANT_BITS);
    let r_div = BigInt::one() << (MAJORANT_BITS + 1);
    let mut r_lo = BigInt::zero();
    let mut r_hi = BigInt::zero();
    let to_rat = |v: &BigInt| Rational::new(v.clone(), scale_r.clone());
    let mut majorant = vec![Rational::zero()];
    let quarter_tol = tol / numerics::int(4);

    let mut b = vec![BigInt::zero(); m];
    let mut iterates = Vec::new();
    let mut n = 0usize;
    let power_coords = |b: &[BigInt]| -> Vec<Rational> {
        let poly = numerics::Poly::new(b.iter().map(|v| Rational::new(v.clone(), one_p.clone())).collect());
        alg.eval_poly(&poly, &a1)
    };
    if keep_iterates {
        iterates.push(power_coords(&b));
    }
    loop {
        let gap = &two_k * (Rational::one() - to_rat(&r_lo));
        if gap <= quarter_tol {
            break;
        }
        if n >= limit {
            return Err(Error::IterationCap(n));
        }
        // B² in the power basis, numerators over 2^{2p}
        let mut sq = vec![BigInt::zero(); 2 * m - 1];
        for i in 0..m {
            if b[i].is_zero() {
                continue;
            }
            for j in 0..m {
                sq[i + j] += &b[i] * &b[j];
            }
        }
        let mut next = Vec::with_capacity(m);
        for j in 0..m {
            let mut t = &sq[j] * &den;
            for (i, row) in tab_num.iter().enumerate() {
                t += &sq[m + i] * &row[j];
            }
            let num = &c_num[j] * &den * &two_p2 + &dc * t;
            let d = BigInt::from(2) * &dc * &den * &one_p;
            next.push(num.div_floor(&d));
        }
        b = next;
        r_lo = (&r_two + &r_lo * &r_lo) >> (MAJORANT_BITS + 1);
        r_hi = (&r_two + &r_hi * &r_hi + &r_div - BigInt::one()) / &r_div;
        majorant.push(to_rat(&r_hi));
        n += 1;
        if keep_iterates {
            iterates.push(power_coords(&b));
        }
    }
    let r_next_hi = (&r_two + &r_hi * &r_hi + &r_div - BigInt::one()) / &r_div;
    majorant.push(to_rat(&r_next_hi));

    let b_coords = power_coords(&b);
    let mut s: Vec<Rational> = alg.unit_coords();
    for (si, bi) in s.iter_mut().zip(&b_coords) {
        *si = (&*si - bi) * &two_k;
    }
    let delta_tot = step_delta * numerics::int(n as i64);
    let gap = Rational::one() - to_rat(&r_lo);
    let root_bound = &two_k * (&gap + &delta_tot);
    let err_bound = &mu * (&gap * &gap + numerics::int(2) * &delta_tot + &delta_tot * &delta_tot);

    // a posteriori certificate of ‖S² − A‖ <= tol
    let sm = alg.matrix_of(&s);
    let resid = sm.mul(&sm).sub(&m_a);
    let t_i = RationalMatrix::scalar(alg.dim(), tol);
    if !psd_check(&t_i.sub(&resid))? || !psd_check(&t_i.add(&resid))? {
        return Err(Error::Unresolvable("square-root residual exceeds tolerance".into()));
    }
    Ok(SqrtOutcome {
        coords: s,
        trace: SqrtTrace {
            iterations: n,
            k,
            majorant,
            err_bound: numerics::min(&err_bound, tol),
            root_bound,
            iteration_cap,
            cap_eps,
        },
        iterates,
    })
}
