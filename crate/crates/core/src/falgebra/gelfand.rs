use num_traits::Zero;

use crate::error::Result;
use crate::instances::{HermElement, HermSpace};
use crate::numerics::{self, psd_check, Rational, RationalMatrix};
use crate::riesz::{self, RieszSpace};
use crate::spectrum::epsilon_net;

/// Outcome of the multiplicativity check over a net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GelfandReport {
    /// Largest `|σ(ab) − σ(a)σ(b)|` seen.
    pub max_mult_violation: Rational,
    /// Largest ratio of a violation to its tolerance bound (<= 1 passes).
    pub max_ratio: Rational,
    pub pairs_tested: usize,
    pub points: usize,
    pub key_checks: usize,
    pub key_failures: usize,
    pub ok: bool,
}

/// Constant `C` in the bound `ε(1 + ‖a‖ + ‖b‖ + ε)·C`: each evaluation is
/// within `ε` of a multiplicative functional, which gives `C = 1`.
pub const GELFAND_CONSTANT: i64 = 1;

/// `(a − r)⁺ ∧ b⁺ <= (1/r)(ab)⁺`, checked on the computed matrices with
/// slack equal to twice the combined error radii.
pub fn key_inequality_holds(space: &HermSpace, a: &HermElement, b: &HermElement, r: &Rational) -> Result<bool> {
    space.contains(a)?;
    space.contains(b)?;
    let lhs = space.meet(
        &riesz::positive_part(space, &space.shift_down(a, r)),
        &riesz::positive_part(space, b),
    );
    let rhs = space.scale(&(Rational::from_integer(1.into()) / r), &riesz::positive_part(space, &space.mul(a, b)));
    let slack = (lhs.err() + rhs.err()) * numerics::int(2);
    let d = rhs.matrix().sub(lhs.matrix()).add(&RationalMatrix::scalar(space.dim(), &slack));
    psd_check(&d)
}

/// Low-degree sample: `1`, each generator, and pairwise generator sums.
fn sample_pool(space: &HermSpace) -> Vec<HermElement> {
    let n = space.algebra().generators().len();
    let mut pool = vec![space.unit()];
    for i in 0..n {
        pool.push(space.generator(i));
    }
    for i in 0..n {
        for j in i + 1..n {
            pool.push(space.add(&space.generator(i), &space.generator(j)));
        }
    }
    pool
}

/// Builds an ε-net over the generators, then checks
/// `|σ(ab) − σ(a)σ(b)| <= ε(1 + ‖a‖ + ‖b‖ + ε)` at every net point for every
/// sampled pair (squares included), plus the key inequality at a few `r`.
pub fn gelfand_check(space: &HermSpace, eps: &Rational) -> Result<GelfandReport> {
    let gens: Vec<HermElement> = (0..space.algebra().generators().len())
        .map(|i| space.generator(i))
        .collect();
    let net_elems = if gens.is_empty() { vec![space.unit()] } else { gens };
    let mut net = epsilon_net(space, &net_elems, eps)?;
    let pool = sample_pool(space);
    let mut pairs = Vec::new();
    for i in 0..pool.len() {
        for j in i..pool.len() {
            pairs.push((i, j));
        }
    }
    let products: Vec<HermElement> = pairs.iter().map(|&(i, j)| space.mul(&pool[i], &pool[j])).collect();
    let norms: Vec<Rational> = pool.iter().map(|a| space.norm_bound(a)).collect();
    let c = numerics::int(GELFAND_CONSTANT);
    let mut max_v = Rational::zero();
    let mut max_ratio = Rational::zero();
    for p in net.points.iter_mut() {
        let vals = pool.iter().map(|a| p.eval(a, eps)).collect::<Result<Vec<_>>>()?;
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let vab = p.eval(&products[k], eps)?;
            let v = numerics::abs(&(vab - &vals[i] * &vals[j]));
            let bound = eps * (numerics::int(1) + &norms[i] + &norms[j] + eps) * &c;
            let ratio = &v / &bound;
            if v > max_v {
                max_v = v;
            }
            if ratio > max_ratio {
                max_ratio = ratio;
            }
        }
    }
    let rs = [numerics::rat(1, 2), numerics::int(1), numerics::int(2)];
    let mut key_checks = 0;
    let mut key_failures = 0;
    for &(i, j) in &pairs {
        for r in &rs {
            key_checks += 1;
            if !key_inequality_holds(space, &pool[i], &pool[j], r)? {
                key_failures += 1;
            }
        }
    }
    let ok = max_ratio <= numerics::int(1) && key_failures == 0;
    Ok(GelfandReport {
        max_mult_violation: max_v,
        max_ratio,
        pairs_tested: pairs.len(),
        points: net.points.len(),
        key_checks,
        key_failures,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::falgebra::CommutingAlgebra;
    use crate::numerics::{int, rat};
    use std::sync::Arc;

    fn diag(v: &[i64]) -> RationalMatrix {
        RationalMatrix::diag(&v.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn diagonal_pair_is_multiplicative() {
        let alg = CommutingAlgebra::new(2, vec![diag(&[1, 2]), diag(&[3, 4])]).unwrap();
        let s = HermSpace::new(Arc::new(alg));
        let rep = gelfand_check(&s, &rat(1, 64)).unwrap();
        assert!(rep.ok, "{rep:?}");
        assert_eq!(rep.points, 2);
    }

    #[test]
    fn key_inequality_example() {
        let alg = CommutingAlgebra::new(2, vec![diag(&[1, 0])]).unwrap();
        let s = HermSpace::new(Arc::new(alg));
        assert!(key_inequality_holds(&s, &s.generator(0), &s.unit(), &rat(1, 2)).unwrap());
    }
}
