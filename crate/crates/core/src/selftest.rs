//! Invariant suites behind `selftest`. Each suite samples with a seeded
//! generator, checks against an independent oracle where one exists, and
//! counts failures. A `Mutation` swaps in a deliberately wrong operation so
//! the negative control can confirm the suites notice.

use std::sync::Arc;
use std::time::Instant;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::cli::Level;
use crate::error::{Error, Result};
use crate::falgebra::{
    gelfand_check, prefix_identity_holds, product_order_check, rate_holds, sqrt_psd, sum_of_squares,
    two_sided_bound, CommutingAlgebra,
};
use crate::gen::{self, SampleRng};
use crate::instances::{HermElement, HermSpace, PlElement, PlSpace, QnElement, QnSpace};
use crate::io;
use crate::lattice;
use crate::numerics::{self, rat, Rational, RationalMatrix};
use crate::riesz::{LocatedCut, MultiplierBound, RieszSpace, Verdict};
use crate::spectrum::{point_new, pos_or_below, stone_yosida_check, sup_approx_generic, PosOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// `a ∨ b` returns `a`.
    Join,
    /// Every supremum reads `1/4` too high.
    Sup,
}

impl Mutation {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "join" => Ok(Mutation::Join),
            "sup" => Ok(Mutation::Sup),
            other => Err(Error::InvalidArgument(format!("unknown mutation {other:?} (join, sup)"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mutation::Join => "join",
            Mutation::Sup => "sup",
        }
    }
}

/// Delegating space, corrupted when a mutation is set.
#[derive(Debug, Clone)]
pub struct Mutated<S> {
    inner: S,
    mutation: Option<Mutation>,
}

impl<S: RieszSpace> Mutated<S> {
    pub fn new(inner: S, mutation: Option<Mutation>) -> Self {
        Self { inner, mutation }
    }
}

impl<S: RieszSpace + 'static> RieszSpace for Mutated<S> {
    type Elem = S::Elem;

    fn tag(&self) -> &'static str {
        self.inner.tag()
    }
    fn contains(&self, a: &S::Elem) -> Result<()> {
        self.inner.contains(a)
    }
    fn zero(&self) -> S::Elem {
        self.inner.zero()
    }
    fn unit(&self) -> S::Elem {
        self.inner.unit()
    }
    fn add(&self, a: &S::Elem, b: &S::Elem) -> S::Elem {
        self.inner.add(a, b)
    }
    fn scale(&self, q: &Rational, a: &S::Elem) -> S::Elem {
        self.inner.scale(q, a)
    }
    fn join(&self, a: &S::Elem, b: &S::Elem) -> S::Elem {
        if self.mutation == Some(Mutation::Join) {
            return a.clone();
        }
        self.inner.join(a, b)
    }
    fn meet(&self, a: &S::Elem, b: &S::Elem) -> S::Elem {
        self.inner.meet(a, b)
    }
    fn leq(&self, a: &S::Elem, b: &S::Elem) -> Verdict {
        self.inner.leq(a, b)
    }
    fn sup_cut(&self, a: &S::Elem) -> LocatedCut {
        let cut = self.inner.sup_cut(a);
        if self.mutation != Some(Mutation::Sup) {
            return cut;
        }
        let cut = Arc::new(cut);
        LocatedCut::from_refiner(move |eps| {
            let (lo, hi) = cut.bracket(eps)?;
            Ok((lo + rat(1, 4), hi + rat(1, 4)))
        })
    }
    fn error_radius(&self, a: &S::Elem) -> Rational {
        self.inner.error_radius(a)
    }
    fn multiplier_bound(&self, a: &S::Elem, b: &S::Elem) -> MultiplierBound {
        self.inner.multiplier_bound(a, b)
    }
    fn dense_element(&self, k: u64) -> Option<S::Elem> {
        self.inner.dense_element(k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// First failure, for diagnostics.
    pub detail: Option<String>,
    /// Wall time; kept out of the JSON so reports stay reproducible.
    pub seconds: f64,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            cases: 0,
            failures: 0,
            detail: None,
            seconds: 0.0,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.detail.is_none() {
                self.detail = Some(detail());
            }
        }
    }

    /// Errors count as failures.
    fn check_result(&mut self, r: Result<bool>, detail: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, detail),
            Err(e) => self.check(false, || format!("{}: {e}", detail())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures == 0)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.suites
                .iter()
                .map(|s| {
                    json!({
                        "name": s.name,
                        "cases": s.cases,
                        "failures": s.failures,
                        "detail": s.detail,
                    })
                })
                .collect(),
        )
    }
}

struct Sizes {
    pairs: usize,
    sups: usize,
    herm_sups: usize,
    pos: usize,
    points: usize,
    probes: usize,
    point_eps: Rational,
    sy: usize,
    sy_eps: Rational,
    certs: usize,
    sqrt: usize,
    sqrt_dim: usize,
    sqrt_tol: Rational,
    products: usize,
    sos: usize,
    gelfand: usize,
}

fn sizes(level: Level) -> Sizes {
    match level {
        Level::Quick => Sizes {
            pairs: 60,
            sups: 30,
            herm_sups: 6,
            pos: 60,
            points: 4,
            probes: 6,
            point_eps: numerics::pow2(-6),
            sy: 2,
            sy_eps: numerics::pow2(-4),
            certs: 10,
            sqrt: 3,
            sqrt_dim: 3,
            sqrt_tol: numerics::pow2(-8),
            products: 30,
            sos: 2,
            gelfand: 0,
        },
        Level::Full => Sizes {
            pairs: 500,
            sups: 200,
            herm_sups: 40,
            pos: 500,
            points: 30,
            probes: 20,
            point_eps: numerics::pow2(-8),
            sy: 15,
            sy_eps: numerics::pow2(-6),
            certs: 100,
            sqrt: 15,
            sqrt_dim: 5,
            sqrt_tol: numerics::pow2(-10),
            products: 300,
            sos: 8,
            gelfand: 2,
        },
    }
}

fn qn_max(a: &QnElement) -> Rational {
    a.coords().iter().max().cloned().unwrap_or_else(Rational::zero)
}

fn qn_abs_max(a: &QnElement) -> Rational {
    a.coords().iter().map(numerics::abs).max().unwrap_or_else(Rational::zero)
}

fn pl_abs_max(f: &PlElement) -> Rational {
    f.breakpoints().iter().map(|(_, y)| numerics::abs(y)).max().unwrap_or_else(Rational::zero)
}

fn relations_suite<S: RieszSpace + 'static>(
    name: &str,
    space: &Mutated<S>,
    n: usize,
    rng: &mut SampleRng,
    mut sample: impl FnMut(&mut SampleRng) -> S::Elem,
) -> SuiteResult {
    let mut res = SuiteResult::new(name);
    for i in 0..n {
        let a = sample(rng);
        let b = sample(rng);
        match lattice::check_relations(space, &a, &b) {
            Ok(v) => {
                for (k, verdict) in v.iter().enumerate() {
                    res.check(*verdict == Verdict::True, || format!("pair {i}: relation {} is {verdict:?}", k + 1));
                }
            }
            Err(e) => res.check(false, || format!("pair {i}: {e}")),
        }
    }
    res
}

/// Native sup against the oracle within `eps`, and the Pos-only sup against
/// the native one within `2 eps`.
fn sup_suite<S: RieszSpace + 'static>(
    name: &str,
    space: &Mutated<S>,
    elems: &[(S::Elem, Rational)],
    eps: &Rational,
) -> SuiteResult {
    let mut res = SuiteResult::new(name);
    for (i, (a, want)) in elems.iter().enumerate() {
        let got = space.sup_cut(a).approx(eps);
        res.check_result(
            got.as_ref()
                .map(|s| s >= want && &(s - want) <= eps)
                .map_err(Clone::clone),
            || format!("element {i}: native sup {got:?} against {want}"),
        );
        if let Ok(native) = &got {
            let generic = sup_approx_generic(space, a, eps);
            res.check_result(
                generic
                    .as_ref()
                    .map(|g| numerics::abs(&(g - native)) <= eps * numerics::int(2))
                    .map_err(Clone::clone),
                || format!("element {i}: generic sup {generic:?} against native {native}"),
            );
        }
    }
    res
}

fn pos_suite<S: RieszSpace + 'static>(
    name: &str,
    space: &Mutated<S>,
    elems: &[(S::Elem, Rational)],
    rng: &mut SampleRng,
) -> SuiteResult {
    use rand::Rng;
    let mut res = SuiteResult::new(name);
    for (i, (a, max)) in elems.iter().enumerate() {
        let r = rat(rng.gen_range(1..=16), 16);
        let check = || -> Result<bool> {
            let out = pos_or_below(space, a, &r)?;
            let oracle = match &out {
                PosOutcome::Pos(w) => w < max,
                PosOutcome::Below(b) => max <= b,
            };
            Ok(oracle && out.recheck(space, a)?)
        };
        res.check_result(check(), || format!("element {i} at r = {r}"));
    }
    res
}

/// Points over `Q^n` must be coordinate projections.
fn points_suite(space: &Mutated<QnSpace>, sz: &Sizes, rng: &mut SampleRng) -> SuiteResult {
    let mut res = SuiteResult::new("points-qn");
    let eps = &sz.point_eps;
    let tol = eps * numerics::int(4);
    let n = space.inner.dim();
    for i in 0..sz.points {
        let a = gen::qn(rng, n);
        if qn_max(&a) <= Rational::zero() {
            continue;
        }
        let probes: Vec<QnElement> = (0..sz.probes).map(|_| gen::qn(rng, n)).collect();
        let check = || -> Result<bool> {
            let r = numerics::min(&qn_max(&a), &Rational::from_integer(1.into()));
            let out = pos_or_below(space, &a, &r)?;
            let mut p = point_new(space, &a, &out)?;
            let mut vals = Vec::new();
            for b in &probes {
                vals.push(p.eval(b, eps)?);
            }
            let unit = p.eval(&space.unit(), eps)?;
            let projection = (0..n).any(|j| {
                vals.iter()
                    .zip(&probes)
                    .all(|(v, b)| numerics::abs(&(v - &b.coords()[j])) <= tol)
            });
            Ok(projection && numerics::abs(&(unit - Rational::from_integer(1.into()))) <= *eps)
        };
        res.check_result(check(), || format!("point {i}"));
    }
    res
}

fn stone_yosida_suite<S: RieszSpace + 'static>(
    name: &str,
    space: &Mutated<S>,
    elems: &[(S::Elem, Rational)],
    eps: &Rational,
) -> SuiteResult {
    let mut res = SuiteResult::new(name);
    for (i, (a, norm)) in elems.iter().enumerate() {
        let r = stone_yosida_check(space, a, eps);
        res.check_result(
            r.as_ref()
                .map(|sy| sy.within(eps) && numerics::abs(&(&sy.norm_val - norm)) <= *eps)
                .map_err(Clone::clone),
            || format!("element {i}: {r:?} against norm {norm}"),
        );
    }
    res
}

fn certificate_suite(space: &Mutated<QnSpace>, n: usize, rng: &mut SampleRng) -> SuiteResult {
    let mut res = SuiteResult::new("certificates-qn");
    let dim = space.inner.dim();
    for i in 0..n {
        let a = gen::qn(rng, dim);
        let check = || -> Result<bool> {
            let (lo, hi, cert) = lattice::cover_range(space, &a)?;
            let direct = cert.verify(space) == Verdict::True;
            // the same certificate after a JSON round trip, on the plain space
            let any = io::AnyCertificate::Qn(space.inner.clone(), cert);
            let back = io::certificate_from_json(&io::certificate_to_json(&any)?)?;
            let reread = match back {
                io::AnyCertificate::Qn(s, c) => c.verify(&s) == Verdict::True,
                _ => false,
            };
            let (_, grid) = lattice::cover_interval(space, &a, &lo, &hi, &numerics::pow2(-2))?;
            let parts: Vec<QnElement> = grid.parts.iter().map(|p| p.rep().clone()).collect();
            let r = lattice::shrink_cover(space, &parts)?;
            Ok(direct && reread && grid.verify(space) == Verdict::True && lattice::recertify_shrink(space, &parts, &r)?)
        };
        res.check_result(check(), || format!("element {i}: {a:?}"));
    }
    res
}

fn herm_space(ms: &[RationalMatrix]) -> Result<HermSpace> {
    Ok(HermSpace::new(Arc::new(CommutingAlgebra::new(ms[0].dim(), ms.to_vec())?)))
}

fn herm_sup_elems(n: usize, rng: &mut SampleRng) -> Result<Vec<(HermSpace, HermElement, Rational, Rational)>> {
    use rand::Rng;
    let mut out = Vec::new();
    for _ in 0..n {
        let dim = rng.gen_range(1..=3);
        let f = gen::symmetric_family(rng, dim, 1);
        let s = herm_space(&f.matrices)?;
        let a = s.exact(f.matrices[0].clone())?;
        let max = f.spectra[0].iter().max().cloned().expect("nonempty");
        let norm = f.spectra[0].iter().map(numerics::abs).max().expect("nonempty");
        out.push((s, a, max, norm));
    }
    Ok(out)
}

fn sqrt_suite(sz: &Sizes, rng: &mut SampleRng) -> SuiteResult {
    use rand::Rng;
    let mut res = SuiteResult::new("sqrt-herm");
    let tol = &sz.sqrt_tol;
    for i in 0..sz.sqrt {
        let dim = rng.gen_range(1..=sz.sqrt_dim);
        let f = gen::psd_square_family(rng, dim, 2);
        let check = || -> Result<bool> {
            let s = herm_space(&f.matrices)?;
            let a = s.exact(f.matrices[0].clone())?;
            let (root, trace) = sqrt_psd(&s, &a, tol)?;
            let oracle = f.map(0, |l| numerics::sqrt_exact(l).expect("squares of rationals"));
            let m = root.matrix();
            let commutes = f.matrices.iter().all(|g| m.mul(g) == g.mul(m));
            Ok(trace.err_bound <= *tol
                && two_sided_bound(&m.mul(m).sub(&f.matrices[0]), tol)
                && two_sided_bound(&m.sub(&oracle), &(tol * numerics::int(10)))
                && commutes)
        };
        res.check_result(check(), || format!("family {i} of dimension {dim}"));
    }
    res
}

fn product_suite(n: usize, rng: &mut SampleRng) -> SuiteResult {
    use rand::Rng;
    let mut res = SuiteResult::new("product-order-herm");
    for i in 0..n {
        let dim = rng.gen_range(1..=4);
        let f = gen::psd_family(rng, dim, 2);
        let check = || -> Result<bool> {
            let s = herm_space(&f.matrices)?;
            let a = s.exact(f.matrices[0].clone())?;
            let b = s.exact(f.matrices[1].clone())?;
            product_order_check(&s, &a, &b)
        };
        res.check_result(check(), || format!("pair {i}"));
    }
    res
}

fn sos_suite(n: usize, rng: &mut SampleRng) -> SuiteResult {
    use rand::Rng;
    let mut res = SuiteResult::new("sum-of-squares-herm");
    for i in 0..n {
        let dim = rng.gen_range(1..=3);
        let f = gen::family(rng, dim, 1, |r| rat(r.gen_range(0..=4), 4));
        let check = || -> Result<bool> {
            let s = herm_space(&f.matrices)?;
            let a = s.exact(f.matrices[0].clone())?;
            let out = sum_of_squares(&s, &a, &numerics::pow2(-4), Some(16))?;
            Ok(prefix_identity_holds(&s, &a, &out) && rate_holds(&s, &out.residual, out.squares.len()))
        };
        res.check_result(check(), || format!("element {i}"));
    }
    res
}

fn gelfand_suite(n: usize, rng: &mut SampleRng) -> SuiteResult {
    let mut res = SuiteResult::new("gelfand-herm");
    for i in 0..n {
        let f = gen::symmetric_family(rng, 3, 2);
        let check = || -> Result<bool> { Ok(gelfand_check(&herm_space(&f.matrices)?, &numerics::pow2(-6))?.ok) };
        res.check_result(check(), || format!("algebra {i}"));
    }
    res
}

fn run_inner(level: Level, seed: u64, mutation: Option<Mutation>) -> Result<SelftestReport> {
    let sz = sizes(level);
    let mut rng = gen::rng(seed);
    let q3 = Mutated::new(QnSpace::new(3)?, mutation);
    let q8 = Mutated::new(QnSpace::new(8)?, mutation);
    let pl = Mutated::new(PlSpace, mutation);
    let mut suites = Vec::new();
    let mut mark = Instant::now();
    // each suite is charged the time since the previous one finished
    let mut push = |mut r: SuiteResult| {
        r.seconds = mark.elapsed().as_secs_f64();
        suites.push(r);
        mark = Instant::now();
    };
    push(relations_suite("relations-q3", &q3, sz.pairs, &mut rng, |r| gen::qn(r, 3)));
    push(relations_suite("relations-q8", &q8, sz.pairs, &mut rng, |r| gen::qn(r, 8)));
    push(relations_suite("relations-pl", &pl, sz.pairs, &mut rng, |r| gen::pl(r, 12)));
    let eps = rat(1, 64);
    let qs: Vec<(QnElement, Rational)> = (0..sz.sups)
        .map(|_| {
            let a = gen::qn(&mut rng, 3);
            let m = qn_max(&a);
            (a, m)
        })
        .collect();
    let pls: Vec<(PlElement, Rational)> = (0..sz.sups)
        .map(|_| {
            let f = gen::pl(&mut rng, 12);
            let m = f.max_value();
            (f, m)
        })
        .collect();
    push(sup_suite("sup-qn", &q3, &qs, &eps));
    push(sup_suite("sup-pl", &pl, &pls, &eps));
    let herms = herm_sup_elems(sz.herm_sups, &mut rng)?;
    let mut hs = SuiteResult::new("sup-herm");
    for (s, a, max, _) in &herms {
        let m = Mutated::new(s.clone(), mutation);
        let r = sup_suite("sup-herm", &m, &[(a.clone(), max.clone())], &eps);
        hs.cases += r.cases;
        hs.failures += r.failures;
        if hs.detail.is_none() {
            hs.detail = r.detail;
        }
    }
    push(hs);
    push(pos_suite("pos-qn", &q3, &qs[..qs.len().min(sz.pos)], &mut rng));
    let more: Vec<(QnElement, Rational)> = (qs.len()..sz.pos)
        .map(|_| {
            let a = gen::qn(&mut rng, 3);
            let m = qn_max(&a);
            (a, m)
        })
        .collect();
    push(pos_suite("pos-qn-extra", &q3, &more, &mut rng));
    push(pos_suite("pos-pl", &pl, &pls, &mut rng));
    let q4 = Mutated::new(QnSpace::new(4)?, mutation);
    push(points_suite(&q4, &sz, &mut rng));
    let sy_q: Vec<(QnElement, Rational)> = (0..sz.sy)
        .map(|_| {
            let a = gen::qn(&mut rng, 3);
            let m = qn_abs_max(&a);
            (a, m)
        })
        .collect();
    let sy_pl: Vec<(PlElement, Rational)> = (0..sz.sy)
        .map(|_| {
            let f = gen::pl(&mut rng, 8);
            let m = pl_abs_max(&f);
            (f, m)
        })
        .collect();
    push(stone_yosida_suite("stone-yosida-qn", &q3, &sy_q, &sz.sy_eps));
    push(stone_yosida_suite("stone-yosida-pl", &pl, &sy_pl, &sz.sy_eps));
    let mut hsy = SuiteResult::new("stone-yosida-herm");
    for (s, a, _, norm) in herms.iter().take(sz.sy) {
        let m = Mutated::new(s.clone(), mutation);
        let r = stone_yosida_suite("stone-yosida-herm", &m, &[(a.clone(), norm.clone())], &sz.sy_eps);
        hsy.cases += r.cases;
        hsy.failures += r.failures;
        if hsy.detail.is_none() {
            hsy.detail = r.detail;
        }
    }
    push(hsy);
    push(certificate_suite(&q3, sz.certs, &mut rng));
    push(sqrt_suite(&sz, &mut rng));
    push(product_suite(sz.products, &mut rng));
    push(sos_suite(sz.sos, &mut rng));
    if sz.gelfand > 0 {
        push(gelfand_suite(sz.gelfand, &mut rng));
    }
    drop(push);
    Ok(SelftestReport { suites })
}

/// Runs every suite at `level`; a setup error becomes a failed suite.
pub fn run(level: Level, seed: u64, mutation: Option<Mutation>) -> SelftestReport {
    run_inner(level, seed, mutation).unwrap_or_else(|e| SelftestReport {
        suites: vec![SuiteResult {
            name: "setup".into(),
            cases: 1,
            failures: 1,
            detail: Some(e.to_string()),
            seconds: 0.0,
        }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutation_names_round_trip() {
        for m in [Mutation::Join, Mutation::Sup] {
            assert_eq!(Mutation::parse(m.name()).unwrap(), m);
        }
        assert!(Mutation::parse("nope").is_err());
    }
}
