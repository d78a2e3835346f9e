use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use super::{Command, Report, RunConfig};
use crate::error::{Error, Result};
use crate::falgebra::{self, gelfand_check, prefix_identity_holds, rate_holds, sum_of_squares, CommutingAlgebra, LatticeOp};
use crate::instances::HermSpace;
use crate::io::{
    self, certificate_from_json, certificate_to_json, element_from_json, pair_from_json, parse_input, rational_str,
    AnyCertificate, AnyElement, ElementIo, ElementJson, InputDoc,
};
use crate::lattice::{self, CoverCertificate};
use crate::numerics::{self, Rational};
use crate::riesz::{self, RieszSpace, Verdict};
use crate::selftest;
use crate::spectrum::{epsilon_net, point_new, pos_or_below, stone_yosida_check, sup_approx_generic, PosOutcome};

/// Environment variable naming a deliberate corruption for `selftest`.
pub const MUTATION_ENV: &str = "RIESZ_SPECTRUM_MUTATION";

macro_rules! with_element {
    ($e:expr, |$s:ident, $a:ident| $body:expr) => {
        match $e {
            AnyElement::Qn($s, $a) => $body,
            AnyElement::Pl($s, $a) => $body,
            AnyElement::Herm($s, $a) => $body,
        }
    };
}

macro_rules! with_pair {
    ($x:expr, $y:expr, |$s:ident, $a:ident, $b:ident| $body:expr) => {
        match ($x, $y) {
            (AnyElement::Qn($s, $a), AnyElement::Qn(_, $b)) => $body,
            (AnyElement::Pl($s, $a), AnyElement::Pl(_, $b)) => $body,
            (AnyElement::Herm($s, $a), AnyElement::Herm(_, $b)) => $body,
            _ => Err(Error::CrossSpace("inputs are elements of different instances".into())),
        }
    };
}

fn read_doc(path: &Path) -> Result<InputDoc> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_input(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn need_input(cfg: &RunConfig) -> Result<&Path> {
    cfg.input
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument(format!("{} needs --input", cfg.command.name())))
}

fn element_doc(path: &Path) -> Result<ElementJson> {
    match read_doc(path)? {
        InputDoc::Element(e) => Ok(e),
        _ => Err(Error::Parse(format!("{}: expected an element or matrix", path.display()))),
    }
}

fn one_element(cfg: &RunConfig) -> Result<AnyElement> {
    element_from_json(&element_doc(need_input(cfg)?)?)
}

/// The input element and the optional second element, in one space.
fn elements(cfg: &RunConfig) -> Result<(AnyElement, Option<AnyElement>)> {
    let a = element_doc(need_input(cfg)?)?;
    match &cfg.input2 {
        None => Ok((element_from_json(&a)?, None)),
        Some(p) => {
            let (x, y) = pair_from_json(&a, &element_doc(p)?)?;
            Ok((x, Some(y)))
        }
    }
}

fn herm_input(cfg: &RunConfig) -> Result<(HermSpace, crate::instances::HermElement)> {
    match one_element(cfg)? {
        AnyElement::Herm(s, a) => Ok((s, a)),
        other => Err(Error::InvalidArgument(format!(
            "{} needs a matrix input, got a {} element",
            cfg.command.name(),
            other.tag()
        ))),
    }
}

fn q(v: &Rational) -> Value {
    rational_str(v).into()
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Unknown => "unknown",
    }
}

fn element_value<S: ElementIo>(space: &S, a: &S::Elem) -> Result<Value> {
    serde_json::to_value(space.element_json(a)).map_err(|e| Error::Parse(e.to_string()))
}

pub(super) fn dispatch(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::default();
    match &cfg.command {
        Command::Sup => sup(cfg, &mut r)?,
        Command::Pos => pos(cfg, &mut r)?,
        Command::Point => point(cfg, &mut r)?,
        Command::Net => net(cfg, &mut r)?,
        Command::Norm => norm(cfg, &mut r)?,
        Command::CheckLattice => check_lattice(cfg, &mut r)?,
        Command::Sqrt => sqrt(cfg, &mut r)?,
        Command::Abs => abs(cfg, &mut r)?,
        Command::Join => join(cfg, &mut r)?,
        Command::Sos => sos(cfg, &mut r)?,
        Command::Gelfand => gelfand(cfg, &mut r)?,
        Command::Selftest { level } => {
            let mutation = match std::env::var(MUTATION_ENV) {
                Ok(name) if !name.is_empty() => Some(selftest::Mutation::parse(&name)?),
                _ => None,
            };
            let out = selftest::run(*level, cfg.seed, mutation);
            for s in &out.suites {
                eprintln!("{:<24} {:>5} cases {:>4} failures {:>8.2}s", s.name, s.cases, s.failures, s.seconds);
            }
            r.violation = !out.passed();
            r.set("passed", out.passed());
            r.set("suites", out.to_json());
            if let Some(m) = mutation {
                r.set("mutation", m.name());
            }
        }
    }
    Ok(r)
}

fn sup(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let elem = one_element(cfg)?;
    r.set("instance", elem.tag());
    fn go<S: RieszSpace>(s: &S, a: &S::Elem, eps: &Rational) -> Result<(Rational, Rational)> {
        Ok((s.sup_cut(a).approx(eps)?, sup_approx_generic(s, a, eps)?))
    }
    let (native, generic) = with_element!(&elem, |s, a| go(s, a, &cfg.eps))?;
    let agree = numerics::abs(&(&native - &generic)) <= &cfg.eps * numerics::int(2);
    r.set("sup", q(&native));
    r.set("generic", q(&generic));
    r.set("agree", agree);
    r.violation = !agree;
    Ok(())
}

fn pos(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let elem = one_element(cfg)?;
    r.set("instance", elem.tag());
    fn go<S: RieszSpace>(s: &S, a: &S::Elem, eps: &Rational) -> Result<(PosOutcome, bool)> {
        let out = pos_or_below(s, a, eps)?;
        let ok = out.recheck(s, a)?;
        Ok((out, ok))
    }
    let (out, ok) = with_element!(&elem, |s, a| go(s, a, &cfg.eps))?;
    match &out {
        PosOutcome::Pos(w) => {
            r.set("outcome", "pos");
            r.set("witness", q(w));
        }
        PosOutcome::Below(b) => {
            r.set("outcome", "below");
            r.set("bound", q(b));
        }
    }
    r.set("recheck", ok);
    r.violation = !ok;
    Ok(())
}

fn point(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let (x, y) = elements(cfg)?;
    r.set("instance", x.tag());
    fn go<S: RieszSpace>(s: &S, a: &S::Elem, b: Option<&S::Elem>, eps: &Rational, r: &mut Report) -> Result<()> {
        let out = pos_or_below(s, a, eps)?;
        let PosOutcome::Pos(w) = &out else {
            return Err(Error::NotPositive(format!("sup a < {eps}, no point has a positive value")));
        };
        let mut p = point_new(s, a, &out)?;
        let mut evals = serde_json::Map::new();
        evals.insert("a".into(), q(&p.eval(a, eps)?));
        evals.insert("unit".into(), q(&p.eval(&s.unit(), eps)?));
        if let Some(b) = b {
            evals.insert("b".into(), q(&p.eval(b, eps)?));
        }
        r.set("witness", q(w));
        r.set("evals", Value::Object(evals));
        r.set("constraints", p.constraints().len());
        r.set("margin", q(p.margin()));
        Ok(())
    }
    match y {
        None => with_element!(&x, |s, a| go(s, a, None, &cfg.eps, r)),
        Some(y) => with_pair!(&x, &y, |s, a, b| go(s, a, Some(b), &cfg.eps, r)),
    }
}

fn net(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let (x, y) = elements(cfg)?;
    fn go<S: RieszSpace>(s: &S, elems: Vec<S::Elem>, eps: &Rational) -> Result<Vec<Vec<Rational>>> {
        let mut n = epsilon_net(s, &elems, eps)?;
        let mut evals = Vec::new();
        for p in n.points.iter_mut() {
            evals.push(elems.iter().map(|e| p.eval(e, eps)).collect::<Result<Vec<_>>>()?);
        }
        Ok(evals)
    }
    let evals = match &y {
        None => with_element!(&x, |s, a| go(s, vec![a.clone()], &cfg.eps)),
        Some(y) => with_pair!(&x, y, |s, a, b| go(s, vec![a.clone(), b.clone()], &cfg.eps)),
    }?;
    r.set("instance", x.tag());
    if let Value::Object(m) = io::net_json(&cfg.eps, &evals) {
        r.fields.extend(m);
    }
    r.rows = Some(io::net_rows(&evals));
    Ok(())
}

fn norm(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let elem = one_element(cfg)?;
    r.set("instance", elem.tag());
    let sy = with_element!(&elem, |s, a| stone_yosida_check(s, a, &cfg.eps))?;
    let within = sy.within(&cfg.eps);
    r.set("norm", q(&sy.norm_val));
    r.set("netMax", q(&sy.net_max));
    r.set("points", sy.points);
    r.set("within", within);
    r.violation = !within;
    Ok(())
}

fn certificate_value(c: &AnyCertificate) -> Result<Value> {
    serde_json::to_value(certificate_to_json(c)?).map_err(|e| Error::Parse(e.to_string()))
}

fn check_lattice(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let path = need_input(cfg)?;
    if let InputDoc::Certificate(c) = read_doc(path)? {
        let cert = certificate_from_json(&c)?;
        let v = match &cert {
            AnyCertificate::Qn(s, c) => c.verify(s),
            AnyCertificate::Pl(s, c) => c.verify(s),
            AnyCertificate::Herm(s, c) => c.verify(s),
        };
        r.set("mode", "certificate");
        r.set("verified", verdict_str(v));
        r.violation = v != Verdict::True;
        return Ok(());
    }
    let (x, y) = elements(cfg)?;
    r.set("mode", "relations");
    r.set("instance", x.tag());
    fn go<S: RieszSpace>(
        s: &S,
        a: &S::Elem,
        b: &S::Elem,
        wrap: impl Fn(CoverCertificate<S::Elem>) -> AnyCertificate,
        r: &mut Report,
    ) -> Result<()> {
        let rel = lattice::check_relations(s, a, b)?;
        r.set("relations", rel.iter().map(|v| verdict_str(*v)).collect::<Vec<_>>());
        r.violation = rel.contains(&Verdict::False);
        match lattice::cover_range(s, a) {
            Ok((p, qv, cert)) => {
                r.set("range", vec![q(&p), q(&qv)]);
                r.set("certificate", certificate_value(&wrap(cert))?);
            }
            Err(Error::CertificateMissing(why)) => {
                r.set("certificate", Value::Null);
                r.set("certificateMissing", why);
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }
    match &y {
        None => match &x {
            AnyElement::Qn(s, a) => go(s, a, &s.zero(), |c| AnyCertificate::Qn(s.clone(), c), r),
            AnyElement::Pl(s, a) => go(s, a, &s.zero(), |c| AnyCertificate::Pl(*s, c), r),
            AnyElement::Herm(s, a) => go(s, a, &s.zero(), |c| AnyCertificate::Herm(s.clone(), c), r),
        },
        Some(y) => match (&x, y) {
            (AnyElement::Qn(s, a), AnyElement::Qn(_, b)) => go(s, a, b, |c| AnyCertificate::Qn(s.clone(), c), r),
            (AnyElement::Pl(s, a), AnyElement::Pl(_, b)) => go(s, a, b, |c| AnyCertificate::Pl(*s, c), r),
            (AnyElement::Herm(s, a), AnyElement::Herm(_, b)) => {
                go(s, a, b, |c| AnyCertificate::Herm(s.clone(), c), r)
            }
            _ => Err(Error::CrossSpace("inputs are elements of different instances".into())),
        },
    }
}

/// Reports carry at most this many majorant entries.
const MAJORANT_SHOWN: usize = 32;

fn sqrt(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let (s, a) = herm_input(cfg)?;
    let (root, trace) = falgebra::sqrt_psd_capped(&s, &a, &cfg.tol, cfg.max_iter)?;
    r.set("S", json!(io::rows_json(root.matrix())));
    r.set("err", q(root.err()));
    r.set("errBound", q(&trace.err_bound));
    r.set("rootBound", q(&trace.root_bound));
    r.set("iterations", trace.iterations);
    r.set("iterationCap", trace.iteration_cap);
    r.set("k", trace.k);
    r.set(
        "majorant",
        trace.majorant.iter().take(MAJORANT_SHOWN).map(q).collect::<Vec<_>>(),
    );
    r.set("majorantLength", trace.majorant.len());
    r.violation = trace.err_bound > cfg.tol;
    Ok(())
}

fn abs(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let elem = one_element(cfg)?;
    r.set("instance", elem.tag());
    let v = match &elem {
        AnyElement::Qn(s, a) => element_value(s, &riesz::abs_value(s, a))?,
        AnyElement::Pl(s, a) => element_value(s, &riesz::abs_value(s, a))?,
        AnyElement::Herm(s, a) => element_value(s, &falgebra::abs_pos_join(s, a, None, LatticeOp::Abs, &cfg.tol)?)?,
    };
    r.set("result", v);
    Ok(())
}

fn join(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let (x, y) = elements(cfg)?;
    let y = y.ok_or_else(|| Error::InvalidArgument("join needs --input2".into()))?;
    r.set("instance", x.tag());
    let v = match (&x, &y) {
        (AnyElement::Qn(s, a), AnyElement::Qn(_, b)) => element_value(s, &riesz::join(s, a, b)?)?,
        (AnyElement::Pl(s, a), AnyElement::Pl(_, b)) => element_value(s, &riesz::join(s, a, b)?)?,
        (AnyElement::Herm(s, a), AnyElement::Herm(_, b)) => {
            element_value(s, &falgebra::abs_pos_join(s, a, Some(b), LatticeOp::Join, &cfg.tol)?)?
        }
        _ => return Err(Error::CrossSpace("inputs are elements of different instances".into())),
    };
    r.set("result", v);
    Ok(())
}

fn sos(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let (s, a) = herm_input(cfg)?;
    let out = sum_of_squares(&s, &a, &cfg.tol, cfg.max_iter)?;
    let identity = prefix_identity_holds(&s, &a, &out);
    let n = out.squares.len();
    let rate = rate_holds(&s, &out.residual, n);
    r.set(
        "squares",
        out.squares.iter().map(|x| json!(io::rows_json(x.matrix()))).collect::<Vec<_>>(),
    );
    r.set("residual", json!(io::rows_json(out.residual.matrix())));
    r.set("errBound", q(&out.bound));
    r.set("iterations", n);
    r.set("converged", out.converged);
    r.set("prefixIdentity", identity);
    r.set("rate", rate);
    r.violation = !identity || !rate;
    Ok(())
}

fn gelfand(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    let space = match read_doc(need_input(cfg)?)? {
        InputDoc::Algebra(a) => HermSpace::new(Arc::new(a.to_algebra()?)),
        InputDoc::Element(e) => match element_from_json(&e)? {
            AnyElement::Herm(s, _) => s,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "gelfand needs an algebra or matrix input, got a {} element",
                    other.tag()
                )))
            }
        },
        InputDoc::Certificate(_) => return Err(Error::Parse("gelfand needs an algebra or matrix input".into())),
    };
    let rep = gelfand_check(&space, &cfg.eps)?;
    let alg: &CommutingAlgebra = space.algebra();
    r.set("generators", alg.generators().len());
    r.set("rank", alg.rank());
    r.set("maxMultViolation", q(&rep.max_mult_violation));
    r.set("maxRatio", q(&rep.max_ratio));
    r.set("pairsTested", rep.pairs_tested);
    r.set("points", rep.points);
    r.set("keyChecks", rep.key_checks);
    r.set("keyFailures", rep.key_failures);
    r.set("ok", rep.ok);
    r.violation = !rep.ok;
    Ok(())
}
