//! Acceptance suite: criteria 1–11, run in order on seeded samples.
//!
//! Each criterion prints one line `criterion N: PASS|FAIL ...` with its
//! timing and limit. Lines go straight to the stderr handle so they show up
//! without `--nocapture`. The test fails if any criterion fails.

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::Rng;

use riesz_spectrum::falgebra::{
    gelfand_check, product_order_check, rate_holds, sqrt_psd, sum_of_squares, two_sided_bound, CommutingAlgebra,
};
use riesz_spectrum::gen::{self, Family, SampleRng};
use riesz_spectrum::instances::{HermElement, HermSpace, PlElement, PlSpace, QnElement, QnSpace};
use riesz_spectrum::lattice;
use riesz_spectrum::numerics::{self, int, rat, round_dyadic, Rational, RoundMode};
use riesz_spectrum::riesz::{RieszSpace, Verdict};
use riesz_spectrum::spectrum::{point_new, pos_or_below, stone_yosida_check, sup_approx_generic, PosOutcome};

type Check = Result<String, String>;

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn close(a: &Rational, b: &Rational, tol: &Rational) -> bool {
    numerics::abs(&(a - b)) <= *tol
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn herm(f: &Family) -> (HermSpace, Vec<HermElement>) {
    let alg = CommutingAlgebra::new(f.q.dim(), f.matrices.clone()).expect("commuting family");
    let s = HermSpace::new(Arc::new(alg));
    let elems = f.matrices.iter().map(|m| s.exact(m.clone()).unwrap()).collect();
    (s, elems)
}

// Oracles computed from the raw data, not through the lattice operations.

fn qn_max(a: &QnElement) -> Rational {
    a.coords().iter().max().unwrap().clone()
}

fn qn_norm(a: &QnElement) -> Rational {
    a.coords().iter().map(numerics::abs).max().unwrap()
}

/// A PL function attains its extremes at breakpoints.
fn pl_max(a: &PlElement) -> Rational {
    a.breakpoints().iter().map(|(_, y)| y.clone()).max().unwrap()
}

fn pl_norm(a: &PlElement) -> Rational {
    a.breakpoints().iter().map(|(_, y)| numerics::abs(y)).max().unwrap()
}

fn spec_max(l: &[Rational]) -> Rational {
    l.iter().max().unwrap().clone()
}

fn spec_norm(l: &[Rational]) -> Rational {
    l.iter().map(numerics::abs).max().unwrap()
}

/// Upper bound on `base^n` for `0 <= base <= 1`, rounding up on a 2^-512
/// grid after every product (monotone, so the bound is sound).
fn pow_upper(base: &Rational, mut n: usize) -> Rational {
    let up = |q: Rational| round_dyadic(&q, 512, RoundMode::Up);
    let mut acc = Rational::one();
    let mut b = up(base.clone());
    while n > 0 {
        if n & 1 == 1 {
            acc = up(&acc * &b);
        }
        b = up(&b * &b);
        n >>= 1;
    }
    acc
}

fn c1_lattice_axioms(rng: &mut SampleRng) -> Check {
    let q3 = QnSpace::new(3).unwrap();
    let q8 = QnSpace::new(8).unwrap();
    let all = [Verdict::True; 5];
    for i in 0..500 {
        let (a, b) = (gen::qn(rng, 3), gen::qn(rng, 3));
        ensure(lattice::check_relations(&q3, &a, &b).unwrap() == all, || format!("Q3 pair {i}: {a:?} {b:?}"))?;
        let (a, b) = (gen::qn(rng, 8), gen::qn(rng, 8));
        ensure(lattice::check_relations(&q8, &a, &b).unwrap() == all, || format!("Q8 pair {i}: {a:?} {b:?}"))?;
        let want: Vec<Rational> = a.coords().iter().zip(b.coords()).map(|(x, y)| numerics::max(x, y)).collect();
        ensure(q8.join(&a, &b) == QnElement::new(want), || format!("Q8 join {i}"))?;
        let (f, g) = (gen::pl(rng, 12), gen::pl(rng, 12));
        ensure(lattice::check_relations(&PlSpace, &f, &g).unwrap() == all, || format!("PL pair {i}: {f:?} {g:?}"))?;
        let j = PlSpace.join(&f, &g);
        for k in 0..=48 {
            let x = rat(k, 48);
            ensure(j.eval(&x) == numerics::max(&f.eval(&x), &g.eval(&x)), || format!("PL join {i} at {x}"))?;
        }
    }
    Ok("500 pairs each over Q3, Q8, PL (<= 12 breakpoints); relations and join oracle exact".into())
}

fn cover_case<S: RieszSpace>(s: &S, a: &S::Elem, width: &Rational) -> Result<(), String> {
    let (lo, hi, range) = lattice::cover_range(s, a).map_err(|e| e.to_string())?;
    ensure(range.verify(s) == Verdict::True, || "range certificate".into())?;
    let (grid, cert) = lattice::cover_interval(s, a, &lo, &hi, width).map_err(|e| e.to_string())?;
    ensure(cert.verify(s) == Verdict::True, || "grid certificate".into())?;
    // the grid itself covers [lo, hi] with cells no wider than `width`
    ensure(grid.first().unwrap().lo() <= &lo && grid.last().unwrap().hi() >= &hi, || "grid span".into())?;
    ensure(grid.iter().all(|iv| iv.width() <= *width), || "grid width".into())?;
    let parts: Vec<S::Elem> = cert.parts.iter().map(|p| p.rep().clone()).collect();
    let r = lattice::shrink_cover(s, &parts).map_err(|e| e.to_string())?;
    ensure(r.is_positive(), || format!("shrink r = {r}"))?;
    ensure(lattice::recertify_shrink(s, &parts, &r).map_err(|e| e.to_string())?, || format!("shrink r = {r} does not re-certify"))
}

fn c2_cover_certificates(rng: &mut SampleRng) -> Check {
    for i in 0..100 {
        let width = rat(rng.gen_range(1..=8), 4);
        let res = if i % 2 == 0 {
            let n = rng.gen_range(1..=6);
            cover_case(&QnSpace::new(n).unwrap(), &gen::qn(rng, n), &width)
        } else {
            cover_case(&PlSpace, &gen::pl(rng, 12), &width)
        };
        res.map_err(|e| format!("case {i}: {e}"))?;
    }
    Ok("100 (element, grid) cases over Qn and PL; multiplier and shrink certificates verify".into())
}

/// Checks a branch against the oracle `sup a = max`.
fn pos_case<S: RieszSpace>(s: &S, a: &S::Elem, r: &Rational, max: &Rational) -> Result<bool, String> {
    let out = pos_or_below(s, a, r).map_err(|e| e.to_string())?;
    ensure(out.recheck(s, a).unwrap(), || format!("{out:?} fails its recheck"))?;
    match &out {
        PosOutcome::Pos(w) => ensure(w.is_positive() && w < max, || format!("Pos({w}) but sup = {max}")).map(|_| false),
        PosOutcome::Below(b) => {
            ensure(b == r && max <= r, || format!("Below({b}) but sup = {max}"))?;
            ensure(s.leq(a, &s.constant(r)) == Verdict::True, || "a <= r·1 not exact".into()).map(|_| true)
        }
    }
}

fn c3_pos_trichotomy(rng: &mut SampleRng) -> Check {
    let mut below = 0;
    for i in 0..500 {
        let r = rat(rng.gen_range(1..=16), rng.gen_range(1..=8));
        let res = match i % 3 {
            0 => {
                let n = rng.gen_range(1..=6);
                let a = gen::qn(rng, n);
                pos_case(&QnSpace::new(n).unwrap(), &a, &r, &qn_max(&a))
            }
            1 => {
                let a = gen::pl(rng, 12);
                pos_case(&PlSpace, &a, &r, &pl_max(&a))
            }
            _ => {
                let dim = rng.gen_range(1..=4);
                let f = gen::symmetric_family(rng, dim, 1);
                let (s, e) = herm(&f);
                pos_case(&s, &e[0], &r, &spec_max(&f.spectra[0]))
            }
        };
        below += res.map_err(|e| format!("case {i}, r = {r}: {e}"))? as usize;
    }
    ensure(below > 0 && below < 500, || format!("only one branch exercised ({below} Below)"))?;
    Ok(format!("500 (a, r) over Qn, PL, Herm ({below} Below); every branch re-verified against the max oracle"))
}

/// A point over `Qⁿ` from a random element with positive max.
fn qn_point(rng: &mut SampleRng, n: usize) -> (QnSpace, QnElement, PosOutcome) {
    let s = QnSpace::new(n).unwrap();
    loop {
        let a = gen::qn(rng, n);
        let m = qn_max(&a);
        if m.is_positive() {
            let out = pos_or_below(&s, &a, &numerics::min(&m, &int(1))).unwrap();
            if out.is_pos() {
                return (s, a, out);
            }
        }
    }
}

fn c4_points_are_projections(rng: &mut SampleRng) -> Check {
    let eps = numerics::pow2(-8);
    let tau = &eps * int(4);
    for i in 0..50 {
        let n = rng.gen_range(1..=6);
        let (s, a, out) = qn_point(rng, n);
        let mut p = point_new(&s, &a, &out).map_err(|e| format!("point {i}: {e}"))?;
        let mut hits = vec![true; n];
        for _ in 0..20 {
            let b = gen::qn(rng, n);
            let v = p.eval(&b, &eps).map_err(|e| format!("point {i}: {e}"))?;
            for (j, h) in hits.iter_mut().enumerate() {
                *h &= close(&v, &b.coords()[j], &tau);
            }
        }
        // the matching coordinate must be one where the seed element is positive
        let ok = hits.iter().enumerate().any(|(j, h)| *h && a.coords()[j].is_positive());
        ensure(ok, || format!("point {i} over Q{n} matches no projection"))?;
    }
    Ok("50 points over Qn (n <= 6), 20 probes each within 4·eps, eps = 2^-8".into())
}

/// Ten probes at one point: additivity, join, unit.
fn contract_probes<S: RieszSpace>(
    s: &S,
    a: &S::Elem,
    out: &PosOutcome,
    mut sample: impl FnMut() -> S::Elem,
    eps: &Rational,
) -> Result<(), String> {
    let tau = eps * int(4);
    let mut p = point_new(s, a, out).map_err(|e| e.to_string())?;
    let e = |r: riesz_spectrum::Result<Rational>| r.map_err(|e| e.to_string());
    for k in 0..10 {
        let (x, y) = (sample(), sample());
        let vx = e(p.eval(&x, eps))?;
        let vy = e(p.eval(&y, eps))?;
        let vs = e(p.eval(&s.add(&x, &y), eps))?;
        ensure(close(&vs, &(&vx + &vy), &tau), || format!("probe {k}: sum {vs} vs {vx} + {vy}"))?;
        let vj = e(p.eval(&s.join(&x, &y), eps))?;
        ensure(close(&vj, &numerics::max(&vx, &vy), &tau), || format!("probe {k}: join {vj} vs max({vx}, {vy})"))?;
        let vu = e(p.eval(&s.unit(), eps))?;
        ensure(close(&vu, &int(1), eps), || format!("probe {k}: unit {vu}"))?;
    }
    Ok(())
}

fn c5_representation_contract(rng: &mut SampleRng) -> Check {
    let eps = numerics::pow2(-8);
    for i in 0..20 {
        let res = if i % 2 == 0 {
            let n = rng.gen_range(1..=6);
            let (s, a, out) = qn_point(rng, n);
            let mut r2 = gen::rng(rng.gen());
            contract_probes(&s, &a, &out, || gen::qn(&mut r2, n), &eps)
        } else {
            let a = loop {
                let a = gen::pl(rng, 12);
                if pl_max(&a).is_positive() {
                    break a;
                }
            };
            // at r <= max the query at r/4 always lands in the Pos branch
            let out = pos_or_below(&PlSpace, &a, &numerics::min(&pl_max(&a), &int(1))).unwrap();
            let mut r2 = gen::rng(rng.gen());
            contract_probes(&PlSpace, &a, &out, || gen::pl(&mut r2, 12), &eps)
        };
        res.map_err(|e| format!("point {i}: {e}"))?;
    }
    Ok("200 probes at 20 points (Qn, PL) within 4·eps, unit within eps, eps = 2^-8".into())
}

fn sy_case<S: RieszSpace>(s: &S, a: &S::Elem, eps: &Rational, oracle: &Rational) -> Result<usize, String> {
    let r = stone_yosida_check(s, a, eps).map_err(|e| e.to_string())?;
    ensure(r.within(eps), || format!("normVal {} vs netMax {}", r.norm_val, r.net_max))?;
    ensure(close(&r.norm_val, oracle, eps), || format!("normVal {} vs oracle {oracle}", r.norm_val))?;
    Ok(r.points)
}

fn c6_stone_yosida(rng: &mut SampleRng) -> Check {
    let eps = numerics::pow2(-6);
    let mut points = 0;
    for i in 0..100 {
        let res = match i % 3 {
            0 => {
                let n = rng.gen_range(1..=6);
                let a = gen::qn(rng, n);
                sy_case(&QnSpace::new(n).unwrap(), &a, &eps, &qn_norm(&a))
            }
            1 => {
                let a = gen::pl(rng, 12);
                sy_case(&PlSpace, &a, &eps, &pl_norm(&a))
            }
            _ => {
                let dim = rng.gen_range(1..=4);
                let f = gen::symmetric_family(rng, dim, 2);
                let (s, e) = herm(&f);
                sy_case(&s, &e[0], &eps, &spec_norm(&f.spectra[0]))
            }
        };
        points += res.map_err(|e| format!("element {i}: {e}"))?;
    }
    Ok(format!("100 elements over Qn, PL, Herm; |normVal - netMax| <= 3·eps, normVal within eps of the oracle norm, eps = 2^-6, {points} net points"))
}

fn c7_square_root(rng: &mut SampleRng) -> Check {
    let tol = numerics::pow2(-10);
    let mut max_iter = 0;
    for i in 0..50 {
        let dim = rng.gen_range(1..=5);
        let f = gen::psd_square_family(rng, dim, 2);
        let (s, e) = herm(&f);
        let (root, trace) = sqrt_psd(&s, &e[0], &tol).map_err(|e| format!("family {i}: {e}"))?;
        let m = root.matrix();
        ensure(trace.err_bound <= tol, || format!("family {i}: errBound {}", trace.err_bound))?;
        ensure(two_sided_bound(&m.mul(m).sub(&f.matrices[0]), &tol), || format!("family {i}: S² − A exceeds tol"))?;
        let oracle = f.map(0, |l| numerics::sqrt_exact(l).unwrap());
        ensure(two_sided_bound(&m.sub(&oracle), &(&tol * int(10))), || format!("family {i}: S off the oracle root"))?;
        for g in &f.matrices {
            ensure(m.mul(g) == g.mul(m), || format!("family {i}: S does not commute"))?;
        }
        let pw = pow_upper(&(int(1) - &trace.cap_eps / int(2)), trace.iteration_cap);
        ensure(pw <= trace.cap_eps, || format!("family {i}: cap {} fails", trace.iteration_cap))?;
        ensure(trace.iterations <= trace.iteration_cap, || format!("family {i}: {} iterations over the cap", trace.iterations))?;
        max_iter = max_iter.max(trace.iterations);
    }
    Ok(format!(
        "50 PSD families (dim <= 5), tol = 2^-10; S² certified, S within 10·tol of the oracle, (1 - eps/2)^cap <= eps; max {max_iter} iterations"
    ))
}

fn c8_sum_of_squares(rng: &mut SampleRng) -> Check {
    let mut steps = 0;
    for i in 0..20 {
        let dim = rng.gen_range(1..=4);
        let f = gen::family(rng, dim, 1, |r| rat(r.gen_range(0..=8), 8));
        let (s, e) = herm(&f);
        let out = sum_of_squares(&s, &e[0], &numerics::pow2(-60), Some(64)).map_err(|e| format!("case {i}: {e}"))?;
        // rebuild every prefix residual from matrices: R_n = A − Σ_{k<n} A_k²
        let mut r = f.matrices[0].clone();
        for (n, sq) in out.squares.iter().enumerate() {
            let m = sq.matrix();
            // A_k is the rounded residual
            ensure(two_sided_bound(&m.sub(&r), &numerics::pow2(-40)), || format!("case {i}: square {n} is not the residual"))?;
            r = r.sub(&m.mul(m));
            let rn = s.exact(r.clone()).unwrap();
            ensure(rate_holds(&s, &rn, n + 1), || format!("case {i}: ‖A_{}‖² > 1/{}", n + 1, n + 1))?;
        }
        ensure(&r == out.residual.matrix(), || format!("case {i}: prefix identity is not exact"))?;
        ensure(out.squares.len() == 64 || out.converged, || format!("case {i}: stopped early"))?;
        steps += out.squares.len();
    }
    Ok(format!("20 contractions (dim <= 4), N <= 64; exact prefix identity and ‖A_n‖² <= 1/n at all {steps} steps"))
}

fn c9_order_compatibility(rng: &mut SampleRng) -> Check {
    for i in 0..500 {
        let dim = rng.gen_range(1..=4);
        let f = gen::psd_family(rng, dim, 2);
        let (s, e) = herm(&f);
        // oracle: the product is diagonal in the shared basis with products of eigenvalues >= 0
        let prod = gen::conjugate(&f.q, &f.spectra[0].iter().zip(&f.spectra[1]).map(|(x, y)| x * y).collect::<Vec<_>>());
        ensure(prod == f.matrices[0].mul(&f.matrices[1]), || format!("pair {i}: product oracle"))?;
        ensure(product_order_check(&s, &e[0], &e[1]).unwrap(), || format!("pair {i}: product_order_check false"))?;
    }
    Ok("500 commuting PSD pairs (dim <= 4); all true".into())
}

fn c10_gelfand(rng: &mut SampleRng) -> Check {
    let eps = numerics::pow2(-8);
    let mut worst = Rational::zero();
    let mut pairs = 0;
    for i in 0..12 {
        let dim = rng.gen_range(1..=4);
        let gens = 1 + i % 3;
        let f = gen::symmetric_family(rng, dim, gens);
        let (s, _) = herm(&f);
        let r = gelfand_check(&s, &eps).map_err(|e| format!("algebra {i}: {e}"))?;
        ensure(r.ok && r.max_ratio <= Rational::one() && r.key_failures == 0, || {
            format!("algebra {i}: violation {} ratio {} key failures {}", r.max_mult_violation, r.max_ratio, r.key_failures)
        })?;
        ensure(r.points >= 1, || format!("algebra {i}: empty net"))?;
        worst = numerics::max(&worst, &r.max_ratio);
        pairs += r.pairs_tested;
    }
    Ok(format!(
        "12 algebras (1-3 generators, dim <= 4), eps = 2^-8; |σ(ab) - σ(a)σ(b)| <= eps(1 + ‖a‖ + ‖b‖ + eps) on {pairs} pairs, worst ratio {}",
        round_dyadic(&worst, 10, RoundMode::Up)
    ))
}

fn sup_case<S: RieszSpace>(s: &S, a: &S::Elem, eps: &Rational, oracle: &Rational) -> Result<(), String> {
    let native = s.sup_cut(a).approx(eps).map_err(|e| e.to_string())?;
    let generic = sup_approx_generic(s, a, eps).map_err(|e| e.to_string())?;
    ensure(close(&native, &generic, &(eps * int(2))), || format!("generic {generic} vs native {native}"))?;
    ensure(close(&native, oracle, eps), || format!("native {native} vs oracle {oracle}"))
}

fn c11_overtness(rng: &mut SampleRng) -> Check {
    let eps = numerics::pow2(-8);
    for i in 0..200 {
        let n = rng.gen_range(1..=6);
        let a = gen::qn(rng, n);
        sup_case(&QnSpace::new(n).unwrap(), &a, &eps, &qn_max(&a)).map_err(|e| format!("Qn {i}: {e}"))?;
        let a = gen::pl(rng, 12);
        sup_case(&PlSpace, &a, &eps, &pl_max(&a)).map_err(|e| format!("PL {i}: {e}"))?;
        let dim = rng.gen_range(1..=4);
        let f = gen::symmetric_family(rng, dim, 1);
        let (s, e) = herm(&f);
        sup_case(&s, &e[0], &eps, &spec_max(&f.spectra[0])).map_err(|e| format!("Herm {i}: {e}"))?;
    }
    Ok("200 elements per instance (Qn, PL, Herm); generic within 2·eps of native, eps = 2^-8".into())
}

#[test]
fn acceptance() {
    type Criterion = fn(&mut SampleRng) -> Check;
    let criteria: [(Criterion, Option<u64>); 11] = [
        (c1_lattice_axioms, Some(10)),
        (c2_cover_certificates, Some(10)),
        (c3_pos_trichotomy, None),
        (c4_points_are_projections, Some(30)),
        (c5_representation_contract, None),
        (c6_stone_yosida, Some(120)),
        (c7_square_root, Some(120)),
        (c8_sum_of_squares, None),
        (c9_order_compatibility, None),
        (c10_gelfand, Some(120)),
        (c11_overtness, None),
    ];
    let mut err = std::io::stderr();
    let mut failed = Vec::new();
    for (k, (run, limit)) in criteria.iter().enumerate() {
        let n = k + 1;
        let mut rng = gen::rng(0xACCE_0000 + n as u64);
        let start = Instant::now();
        let res = run(&mut rng);
        let took = start.elapsed();
        let limit = limit.map(Duration::from_secs);
        let late = limit.is_some_and(|l| took > l);
        let budget = limit.map_or("no limit".to_string(), |l| format!("limit {}", secs(l)));
        let (verdict, detail) = match (&res, late) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("too slow; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        writeln!(err, "criterion {n}: {verdict}  [{} / {budget}]  {detail}", secs(took)).unwrap();
        if verdict == "FAIL" {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
