//! Property tests for the algebraic invariants, each against an oracle that
//! does not go through the code under test where one exists.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use riesz_spectrum::falgebra::{
    prefix_identity_holds, product_order_check, rate_holds, sqrt_coords, sqrt_psd, square_bound, sum_of_squares,
    two_sided_bound, CommutingAlgebra,
};
use riesz_spectrum::gen::{self, Family};
use riesz_spectrum::instances::{herm_sup_cut, HermElement, HermSpace, PlElement, PlSpace, QnElement, QnSpace};
use riesz_spectrum::lattice::{self, LatMode};
use riesz_spectrum::numerics::{
    self, int, interval_distance, psd_check, rat, round_dyadic, RatInterval, Rational, RationalMatrix, RoundMode,
};
use riesz_spectrum::riesz::{self, RieszSpace, Verdict};
use riesz_spectrum::spectrum::{point_new, pos_or_below, sup_approx_generic, PosOutcome};

fn rational() -> impl Strategy<Value = Rational> {
    (-16i64..=16, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn qn(n: usize) -> impl Strategy<Value = QnElement> {
    prop::collection::vec(rational(), n).prop_map(QnElement::new)
}

/// Up to 12 breakpoints on the 1/24 grid.
fn pl() -> impl Strategy<Value = PlElement> {
    (prop::collection::btree_set(1i64..24, 0..=10), prop::collection::vec(rational(), 12)).prop_map(|(xs, ys)| {
        let mut pts = vec![(int(0), ys[0].clone())];
        for (i, x) in xs.iter().enumerate() {
            pts.push((rat(*x, 24), ys[i + 1].clone()));
        }
        pts.push((int(1), ys[xs.len() + 1].clone()));
        PlElement::new(pts).expect("increasing grid")
    })
}

fn herm_family() -> impl Strategy<Value = Family> {
    (any::<u64>(), 1usize..=4).prop_map(|(seed, dim)| gen::symmetric_family(&mut gen::rng(seed), dim, 3))
}

fn herm_space(f: &Family) -> HermSpace {
    HermSpace::new(Arc::new(CommutingAlgebra::new(f.q.dim(), f.matrices.clone()).expect("commuting family")))
}

fn herm_elems(f: &Family) -> (HermSpace, Vec<HermElement>) {
    let s = herm_space(f);
    let elems = f.matrices.iter().map(|m| s.exact(m.clone()).unwrap()).collect();
    (s, elems)
}

fn close(a: &Rational, b: &Rational, tol: &Rational) -> bool {
    numerics::abs(&(a - b)) <= *tol
}

fn det(m: &[Vec<Rational>]) -> Rational {
    // cofactor expansion along the first row; fine for n <= 4
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut total = Rational::zero();
    for j in 0..n {
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Symmetric `A` is PSD iff every coefficient `e_k` (sum of the k×k
/// principal minors) of its characteristic polynomial is nonnegative.
fn psd_by_char_poly(m: &RationalMatrix) -> bool {
    let n = m.dim();
    let rows = m.rows();
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<Rational>> = idx.iter().map(|&i| idx.iter().map(|&j| rows[i][j].clone()).collect()).collect();
        // e_k >= 0 for all k iff all principal minors >= 0 for symmetric A
        !det(&sub).is_negative()
    })
}

fn symmetric_small() -> impl Strategy<Value = RationalMatrix> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec((-2i64..=2, 1i64..=2), n * (n + 1) / 2).prop_map(move |vals| {
            let mut m = RationalMatrix::zeros(n);
            let mut it = vals.into_iter();
            for i in 0..n {
                for j in i..n {
                    let (p, q) = it.next().unwrap();
                    m.set(i, j, rat(p, q));
                    m.set(j, i, rat(p, q));
                }
            }
            m
        })
    })
}

fn qn_support(a: &QnElement) -> Vec<bool> {
    a.coords().iter().map(|c| c.is_positive()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn interval_distance_is_symmetric(a in rational(), b in rational(), c in rational(), d in rational()) {
        let i = RatInterval::new(numerics::min(&a, &b), numerics::max(&a, &b) + int(1)).unwrap();
        let j = RatInterval::new(numerics::min(&c, &d), numerics::max(&c, &d) + int(1)).unwrap();
        let dij = interval_distance(&i, &j);
        prop_assert_eq!(&dij, &interval_distance(&j, &i));
        prop_assert!(!dij.is_negative());
    }

    #[test]
    fn round_dyadic_brackets(q in rational(), k in 0u32..20) {
        let lo = round_dyadic(&q, k, RoundMode::Down);
        let hi = round_dyadic(&q, k, RoundMode::Up);
        prop_assert!(lo <= q && q <= hi);
        prop_assert!(&hi - &lo <= numerics::pow2(-(k as i64)) * int(2));
    }

    #[test]
    fn psd_check_matches_char_poly(m in symmetric_small()) {
        prop_assert_eq!(psd_check(&m).unwrap(), psd_by_char_poly(&m));
    }

    #[test]
    fn riesz_axioms_qn(a in qn(5), b in qn(5), c in qn(5), l in 0i64..8) {
        let s = QnSpace::new(5).unwrap();
        prop_assert_eq!(s.add(&a, &s.join(&b, &c)), s.join(&s.add(&a, &b), &s.add(&a, &c)));
        prop_assert_eq!(s.join(&a, &b), s.join(&b, &a));
        prop_assert_eq!(s.join(&a, &s.join(&b, &c)), s.join(&s.join(&a, &b), &c));
        prop_assert_eq!(s.meet(&a, &s.join(&a, &b)), a.clone());
        let ap = riesz::positive_part(&s, &a);
        prop_assert!(s.leq(&s.zero(), &s.scale(&int(l), &ap)).is_true());
        let d = riesz::decompose(&s, &a).unwrap();
        prop_assert_eq!(s.sub(&d.pos, &d.neg), a.clone());
        // oracle: coordinatewise max
        let want: Vec<Rational> = a.coords().iter().zip(b.coords()).map(|(x, y)| numerics::max(x, y)).collect();
        prop_assert_eq!(s.join(&a, &b), QnElement::new(want));
    }

    #[test]
    fn riesz_axioms_pl(a in pl(), b in pl(), c in pl(), l in 0i64..8) {
        let s = PlSpace;
        prop_assert_eq!(s.add(&a, &s.join(&b, &c)), s.join(&s.add(&a, &b), &s.add(&a, &c)));
        prop_assert_eq!(s.join(&a, &b), s.join(&b, &a));
        prop_assert_eq!(s.meet(&a, &s.join(&a, &b)), a.clone());
        let ap = riesz::positive_part(&s, &a);
        prop_assert!(s.leq(&s.zero(), &s.scale(&int(l), &ap)).is_true());
        let d = riesz::decompose(&s, &a).unwrap();
        prop_assert_eq!(s.sub(&d.pos, &d.neg), a.clone());
        // oracle: pointwise max on a fine grid
        let j = s.join(&a, &b);
        for k in 0..=96 {
            let x = rat(k, 96);
            prop_assert_eq!(j.eval(&x), numerics::max(&a.eval(&x), &b.eval(&x)));
        }
    }

    #[test]
    fn pl_canonical_form_is_normal(a in pl(), b in pl()) {
        // refine with the midpoints of every segment: same function
        let pts = a.breakpoints();
        let mut refined = vec![pts[0].clone()];
        for w in pts.windows(2) {
            let xm = (&w[0].0 + &w[1].0) / int(2);
            refined.push((xm.clone(), a.eval(&xm)));
            refined.push(w[1].clone());
        }
        prop_assert_eq!(PlElement::new(refined).unwrap(), a.clone());
        let s = PlSpace;
        prop_assert_eq!(s.sub(&s.add(&a, &b), &b), a);
    }

    #[test]
    fn finite_cover_inequality(a in qn(4), f in pl(), t in rational(), gap in 1i64..16) {
        let s_ = &t + rat(gap, 4);
        let half = (&s_ - &t) / int(2);
        let q = QnSpace::new(4).unwrap();
        let lhs = q.join(&q.shift_down(&a, &t), &q.sub(&q.constant(&s_), &a));
        prop_assert!(q.leq(&q.constant(&half), &lhs).is_true());
        let p = PlSpace;
        let lhs = p.join(&p.shift_down(&f, &t), &p.sub(&p.constant(&s_), &f));
        prop_assert!(p.leq(&p.constant(&half), &lhs).is_true());
    }

    #[test]
    fn decompose_is_exact_pl(a in pl()) {
        let s = PlSpace;
        let d = riesz::decompose(&s, &a).unwrap();
        prop_assert_eq!(s.sub(&d.pos, &d.neg), a.clone());
        prop_assert_eq!(d.abs, riesz::abs_value(&s, &a));
    }

    #[test]
    fn sup_of_join_is_max(a in pl(), b in pl(), e in 2i64..10) {
        let s = PlSpace;
        let eps = numerics::pow2(-e);
        let sa = s.sup_cut(&a).approx(&eps).unwrap();
        let sb = s.sup_cut(&b).approx(&eps).unwrap();
        let sj = s.sup_cut(&s.join(&a, &b)).approx(&eps).unwrap();
        prop_assert!(close(&sj, &numerics::max(&sa, &sb), &(&eps * int(2))));
    }

    #[test]
    fn sup_of_summand_is_located(b in qn(4), c in qn(4), r in rational(), e in 2i64..8) {
        let s = QnSpace::new(4).unwrap();
        let eps = numerics::pow2(-e);
        let sb = s.sup_cut(&b).approx(&eps).unwrap();
        let sbc = s.sup_cut(&s.join(&b, &c)).approx(&eps).unwrap();
        if sb < r && &sbc - &eps > r {
            // some precision must certify r < sup c
            let cut = s.sup_cut(&c);
            let mut d = eps.clone();
            let mut certified = false;
            for _ in 0..40 {
                let sc = cut.approx(&d).unwrap();
                if &sc - &d > r {
                    certified = true;
                    break;
                }
                d /= int(2);
            }
            prop_assert!(certified);
        }
    }

    #[test]
    fn relations_hold_qn(a in qn(3), b in qn(3)) {
        let s = QnSpace::new(3).unwrap();
        let v = lattice::check_relations(&s, &a, &b).unwrap();
        prop_assert_eq!(v, [Verdict::True; 5]);
    }

    #[test]
    fn relations_hold_pl(a in pl(), b in pl()) {
        let v = lattice::check_relations(&PlSpace, &a, &b).unwrap();
        prop_assert_eq!(v, [Verdict::True; 5]);
    }

    #[test]
    fn class_equality_is_support_equality(a in qn(4), b in qn(4)) {
        let s = QnSpace::new(4).unwrap();
        let x = lattice::d_of(&s, &a).unwrap();
        let y = lattice::d_of(&s, &b).unwrap();
        let eq = lattice::lat_eq(&s, &x, &y).unwrap();
        prop_assert_eq!(eq, Verdict::from_bool(qn_support(&a) == qn_support(&b)));
        let m = lattice::lat_combine(&s, &x, &y, LatMode::Meet).unwrap();
        let both: Vec<bool> = qn_support(&a).iter().zip(qn_support(&b)).map(|(p, q)| *p && q).collect();
        prop_assert_eq!(qn_support(m.rep()), both);
    }

    #[test]
    fn cover_interval_certificates_verify(a in qn(3), f in pl(), w in 1i64..8) {
        let width = rat(w, 4);
        let s = QnSpace::new(3).unwrap();
        let (lo, hi, range) = lattice::cover_range(&s, &a).unwrap();
        prop_assert_eq!(range.verify(&s), Verdict::True);
        let (_, cert) = lattice::cover_interval(&s, &a, &lo, &hi, &width).unwrap();
        prop_assert_eq!(cert.verify(&s), Verdict::True);
        let parts: Vec<QnElement> = cert.parts.iter().map(|p| p.rep().clone()).collect();
        let r = lattice::shrink_cover(&s, &parts).unwrap();
        prop_assert!(lattice::recertify_shrink(&s, &parts, &r).unwrap());
        let (lo, hi, _) = lattice::cover_range(&PlSpace, &f).unwrap();
        let (_, cert) = lattice::cover_interval(&PlSpace, &f, &lo, &hi, &width).unwrap();
        prop_assert_eq!(cert.verify(&PlSpace), Verdict::True);
        let parts: Vec<PlElement> = cert.parts.iter().map(|p| p.rep().clone()).collect();
        let r = lattice::shrink_cover(&PlSpace, &parts).unwrap();
        prop_assert!(lattice::recertify_shrink(&PlSpace, &parts, &r).unwrap());
    }

    #[test]
    fn pos_splitting(a in pl(), b in pl(), r in 1i64..16) {
        let s = PlSpace;
        let r = rat(r, 16);
        if let PosOutcome::Pos(w) = pos_or_below(&s, &s.join(&a, &b), &r).unwrap() {
            let pa = pos_or_below(&s, &a, &w).unwrap();
            let pb = pos_or_below(&s, &b, &w).unwrap();
            prop_assert!(pa.is_pos() || pb.is_pos());
        }
    }

    #[test]
    fn pos_transfers_along_precedence(a in qn(4), b in qn(4), r in 1i64..16) {
        let s = QnSpace::new(4).unwrap();
        let r = rat(r, 16);
        let da = lattice::d_of(&s, &a).unwrap();
        let db = lattice::d_of(&s, &b).unwrap();
        let prec = lattice::precedes(&s, &da, &db).unwrap();
        if let (PosOutcome::Pos(w), Some(n)) = (pos_or_below(&s, &a, &r).unwrap(), prec.witness) {
            let t = w / numerics::from_int(n);
            prop_assert!(pos_or_below(&s, &b, &t).unwrap().is_pos());
        }
    }

    #[test]
    fn generic_sup_agrees_with_native(a in qn(4), f in pl(), e in 2i64..9) {
        let eps = numerics::pow2(-e);
        let s = QnSpace::new(4).unwrap();
        let native = s.sup_cut(&a).approx(&eps).unwrap();
        prop_assert!(close(&sup_approx_generic(&s, &a, &eps).unwrap(), &native, &(&eps * int(2))));
        let native = PlSpace.sup_cut(&f).approx(&eps).unwrap();
        prop_assert!(close(&sup_approx_generic(&PlSpace, &f, &eps).unwrap(), &native, &(&eps * int(2))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    /// Points over Q^n agree with a coordinate projection and satisfy the
    /// representation contract.
    #[test]
    fn qn_points_are_projections(a in qn(5), probes in prop::collection::vec((qn(5), qn(5)), 6), l in rational()) {
        let s = QnSpace::new(5).unwrap();
        let max = a.coords().iter().max().unwrap().clone();
        prop_assume!(max.is_positive());
        let eps = numerics::pow2(-6);
        let tau = &eps * int(4);
        let out = pos_or_below(&s, &a, &numerics::min(&max, &int(1))).unwrap();
        let mut p = point_new(&s, &a, &out).unwrap();
        let mut hits: Vec<bool> = vec![true; 5];
        for (x, y) in &probes {
            let vx = p.eval(x, &eps).unwrap();
            let vy = p.eval(y, &eps).unwrap();
            for (j, h) in hits.iter_mut().enumerate() {
                *h &= close(&vx, &x.coords()[j], &tau);
            }
            prop_assert!(close(&p.eval(&s.add(x, y), &eps).unwrap(), &(&vx + &vy), &tau));
            let m = numerics::max(&vx, &vy);
            prop_assert!(close(&p.eval(&s.join(x, y), &eps).unwrap(), &m, &tau));
            let bound = (int(1) + numerics::abs(&l)) * &eps * int(2);
            prop_assert!(close(&p.eval(&s.scale(&l, x), &eps).unwrap(), &(&l * &vx), &bound));
        }
        prop_assert!(hits.iter().any(|h| *h));
        prop_assert!(close(&p.eval(&s.unit(), &eps).unwrap(), &int(1), &eps));
    }

    #[test]
    fn pl_points_satisfy_contract(a in pl(), probes in prop::collection::vec((pl(), pl()), 4)) {
        let s = PlSpace;
        prop_assume!(a.max_value().is_positive());
        let eps = numerics::pow2(-6);
        let tau = &eps * int(4);
        let out = pos_or_below(&s, &a, &numerics::min(&a.max_value(), &int(1))).unwrap();
        let mut p = point_new(&s, &a, &out).unwrap();
        for (x, y) in &probes {
            let vx = p.eval(x, &eps).unwrap();
            let vy = p.eval(y, &eps).unwrap();
            prop_assert!(close(&p.eval(&s.add(x, y), &eps).unwrap(), &(&vx + &vy), &tau));
            prop_assert!(close(&p.eval(&s.join(x, y), &eps).unwrap(), &numerics::max(&vx, &vy), &tau));
        }
        prop_assert!(close(&p.eval(&s.unit(), &eps).unwrap(), &int(1), &eps));
    }

    #[test]
    fn point_caches_are_deterministic(a in pl(), probes in prop::collection::vec(pl(), 4)) {
        let s = PlSpace;
        prop_assume!(a.max_value().is_positive());
        let eps = numerics::pow2(-5);
        let out = pos_or_below(&s, &a, &rat(1, 4)).unwrap();
        prop_assume!(out.is_pos());
        let mut p = point_new(&s, &a, &out).unwrap();
        let mut q = point_new(&s, &a, &out).unwrap();
        for b in &probes {
            prop_assert_eq!(p.eval(b, &eps).unwrap(), q.eval(b, &eps).unwrap());
        }
        prop_assert_eq!(p.cache(), q.cache());
        prop_assert_eq!(p.constraints(), q.constraints());
    }

    #[test]
    fn herm_axioms_within_error(f in herm_family()) {
        let (s, e) = herm_elems(&f);
        let (a, b, c) = (&e[0], &e[1], &e[2]);
        let lhs = s.add(a, &s.join(b, c));
        let rhs = s.join(&s.add(a, b), &s.add(a, c));
        let slack = lhs.err() + rhs.err();
        prop_assert!(two_sided_bound(&lhs.matrix().sub(rhs.matrix()), &slack));
        // oracle: the join of commuting matrices is Q·diag(max)·Qᵀ
        let j = s.join(b, c);
        let want = gen::conjugate(&f.q, &f.spectra[1].iter().zip(&f.spectra[2]).map(|(x, y)| numerics::max(x, y)).collect::<Vec<_>>());
        prop_assert!(two_sided_bound(&j.matrix().sub(&want), j.err()));
        let ap = riesz::positive_part(&s, a);
        prop_assert!(psd_check(&ap.matrix().add(&RationalMatrix::scalar(f.q.dim(), ap.err()))).unwrap());
    }

    #[test]
    fn herm_sup_matches_eigen_oracle(seed in any::<u64>(), dim in 1usize..=5, e in 2i64..10) {
        let f = gen::symmetric_family(&mut gen::rng(seed), dim, 1);
        let (s, el) = herm_elems(&f);
        let eps = numerics::pow2(-e);
        let got = herm_sup_cut(&s, &el[0]).approx(&eps).unwrap();
        let want = f.spectra[0].iter().max().unwrap();
        prop_assert!(close(&got, want, &(&eps + el[0].err())));
    }

    #[test]
    fn two_boundedness_notions_agree(f in herm_family(), a in 0i64..=8) {
        let a = rat(a, 2);
        let m = &f.matrices[0];
        let norm = f.spectra[0].iter().map(numerics::abs).max().unwrap();
        prop_assert_eq!(two_sided_bound(m, &a), norm <= a);
        prop_assert_eq!(square_bound(m, &a), norm <= a);
    }

    #[test]
    fn norm_of_square_is_square_of_norm(f in herm_family(), e in 3i64..8) {
        let (s, el) = herm_elems(&f);
        let eps = numerics::pow2(-e);
        let a = &el[0];
        let n1 = riesz::norm_cut(&s, a).unwrap().approx(&eps).unwrap();
        let n2 = riesz::norm_cut(&s, &s.mul(a, a)).unwrap().approx(&eps).unwrap();
        // ‖a‖² is known to within eps(2‖a‖ + eps), so compare at that scale
        let slack = &eps * int(3) * (int(1) + &n1 * int(2));
        prop_assert!(close(&n2, &(&n1 * &n1), &slack));
    }

    #[test]
    fn product_order_on_psd_pairs(seed in any::<u64>(), dim in 1usize..=4) {
        let f = gen::psd_family(&mut gen::rng(seed), dim, 2);
        let (s, el) = herm_elems(&f);
        prop_assert!(product_order_check(&s, &el[0], &el[1]).unwrap());
    }

    #[test]
    fn sum_of_squares_prefixes(seed in any::<u64>(), dim in 1usize..=3, n in 1usize..=12) {
        use rand::Rng;
        let f = gen::family(&mut gen::rng(seed), dim, 1, |r| rat(r.gen_range(0..=8), 8));
        let (s, el) = herm_elems(&f);
        let out = sum_of_squares(&s, &el[0], &numerics::pow2(-30), Some(n)).unwrap();
        prop_assert!(prefix_identity_holds(&s, &el[0], &out));
        prop_assert!(rate_holds(&s, &out.residual, out.squares.len()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn sqrt_majorant_dominates(seed in any::<u64>(), dim in 1usize..=3, e in 3i64..7) {
        let f = gen::psd_family(&mut gen::rng(seed), dim, 1);
        let alg = CommutingAlgebra::new(dim, f.matrices.clone()).unwrap();
        let x = alg.coords_of(&f.matrices[0]).unwrap();
        let out = sqrt_coords(&alg, &x, &numerics::pow2(-e), None, true).unwrap();
        let maj = &out.trace.majorant;
        prop_assert!(maj.windows(2).all(|w| w[0] <= w[1]));
        for (bn, rn) in out.iterates.iter().zip(maj) {
            prop_assert!(psd_check(&RationalMatrix::scalar(dim, rn).sub(&alg.matrix_of(bn))).unwrap());
        }
        // the a priori cap satisfies (1 − ε′/2)^N <= ε′ exactly
        let base = int(1) - &out.trace.cap_eps / int(2);
        let mut pw = Rational::one();
        for _ in 0..out.trace.iteration_cap {
            pw *= &base;
        }
        prop_assert!(pw <= out.trace.cap_eps);
        prop_assert!(out.trace.iterations <= out.trace.iteration_cap);
    }

    #[test]
    fn sqrt_psd_is_certified(seed in any::<u64>(), dim in 1usize..=4) {
        let f = gen::psd_square_family(&mut gen::rng(seed), dim, 2);
        let (s, el) = herm_elems(&f);
        let tol = numerics::pow2(-8);
        let (root, trace) = sqrt_psd(&s, &el[0], &tol).unwrap();
        let m = root.matrix();
        prop_assert!(trace.err_bound <= tol);
        prop_assert!(two_sided_bound(&m.mul(m).sub(&f.matrices[0]), &tol));
        let oracle = f.map(0, |l| numerics::sqrt_exact(l).unwrap());
        prop_assert!(two_sided_bound(&m.sub(&oracle), &(&tol * int(10))));
        for g in &f.matrices {
            prop_assert_eq!(m.mul(g), g.mul(m));
        }
    }
}

/// `1 − r_N <= ε′` whenever `(1 − ε′/2)^N <= ε′`, with `r_{n+1} = ½(1 + r_n²)`
/// bracketed from below on a 2^-256 grid (the map is increasing on [0, 1]).
#[test]
fn scalar_majorant_meets_a_priori_bound() {
    for e in 1..=6i64 {
        let eps = numerics::pow2(-e);
        let base = int(1) - &eps / int(2);
        let mut pw = Rational::one();
        let mut n = 0usize;
        while pw > eps {
            pw *= &base;
            n += 1;
        }
        let mut r = Rational::zero();
        for _ in 0..n {
            r = round_dyadic(&((int(1) + &r * &r) / int(2)), 256, RoundMode::Down);
        }
        assert!(int(1) - r <= eps, "e = {e}, N = {n}");
    }
}
