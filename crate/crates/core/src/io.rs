//! JSON and CSV forms: rationals as `"p/q"` strings, matrices as
//! `{"dim": n, "entries": [[...]]}`, elements tagged by `"space"`.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::falgebra::CommutingAlgebra;
use crate::instances::{HermElement, HermSpace, PlElement, PlSpace, QnElement, QnSpace};
use crate::lattice::{self, CoverCertificate};
use crate::numerics::{parse_rational, Rational, RationalMatrix};
use crate::riesz::RieszSpace;

pub fn rational_str(q: &Rational) -> String {
    q.to_string()
}

fn parse_all(xs: &[String]) -> Result<Vec<Rational>> {
    xs.iter().map(|s| parse_rational(s)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &RationalMatrix) -> Self {
        MatrixJson {
            dim: m.dim(),
            entries: rows_json(m),
        }
    }

    pub fn to_matrix(&self) -> Result<RationalMatrix> {
        if self.dim == 0 {
            return Err(Error::Parse("matrix dimension must be positive".into()));
        }
        if self.entries.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: self.entries.len(),
            });
        }
        let rows = self
            .entries
            .iter()
            .map(|r| {
                if r.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        found: r.len(),
                    });
                }
                parse_all(r)
            })
            .collect::<Result<Vec<_>>>()?;
        RationalMatrix::from_rows(rows)
    }
}

/// Rows of `m` as rational strings.
pub fn rows_json(m: &RationalMatrix) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(rational_str).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub generators: Vec<MatrixJson>,
    /// Needed only when there are no generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

impl AlgebraJson {
    pub fn from_algebra(alg: &CommutingAlgebra) -> Self {
        AlgebraJson {
            generators: alg.generators().iter().map(MatrixJson::from_matrix).collect(),
            dim: alg.generators().is_empty().then(|| alg.dim()),
        }
    }

    pub fn to_algebra(&self) -> Result<CommutingAlgebra> {
        let gens = self.generators.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>()?;
        let dim = match (gens.first(), self.dim) {
            (Some(g), _) => g.dim(),
            (None, Some(d)) if d > 0 => d,
            _ => return Err(Error::Parse("algebra without generators needs a positive \"dim\"".into())),
        };
        CommutingAlgebra::new(dim, gens)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "lowercase", deny_unknown_fields)]
pub enum ElementJson {
    Qn {
        coords: Vec<String>,
    },
    Pl {
        breakpoints: Vec<[String; 2]>,
    },
    Herm {
        matrix: MatrixJson,
        #[serde(default = "zero_string")]
        err: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<MatrixJson>>,
    },
}

fn zero_string() -> String {
    "0".into()
}

impl ElementJson {
    pub fn qn(a: &QnElement) -> Self {
        ElementJson::Qn {
            coords: a.coords().iter().map(rational_str).collect(),
        }
    }

    pub fn pl(f: &PlElement) -> Self {
        ElementJson::Pl {
            breakpoints: f
                .breakpoints()
                .iter()
                .map(|(x, y)| [rational_str(x), rational_str(y)])
                .collect(),
        }
    }

    pub fn herm(a: &HermElement) -> Self {
        ElementJson::Herm {
            matrix: MatrixJson::from_matrix(a.matrix()),
            err: rational_str(a.err()),
            generators: None,
        }
    }
}

/// An element together with the space it lives in.
#[derive(Debug, Clone)]
pub enum AnyElement {
    Qn(QnSpace, QnElement),
    Pl(PlSpace, PlElement),
    Herm(HermSpace, HermElement),
}

impl AnyElement {
    pub fn tag(&self) -> &'static str {
        match self {
            AnyElement::Qn(s, _) => s.tag(),
            AnyElement::Pl(s, _) => s.tag(),
            AnyElement::Herm(s, _) => s.tag(),
        }
    }

    pub fn to_json(&self) -> ElementJson {
        match self {
            AnyElement::Qn(_, a) => ElementJson::qn(a),
            AnyElement::Pl(_, a) => ElementJson::pl(a),
            AnyElement::Herm(s, a) => {
                let mut j = ElementJson::herm(a);
                if let ElementJson::Herm { generators, .. } = &mut j {
                    *generators = Some(AlgebraJson::from_algebra(s.algebra()).generators);
                }
                j
            }
        }
    }
}

/// Serialization of elements for code generic over the instance.
pub trait ElementIo: RieszSpace {
    fn element_json(&self, a: &Self::Elem) -> ElementJson;
}

impl ElementIo for QnSpace {
    fn element_json(&self, a: &QnElement) -> ElementJson {
        ElementJson::qn(a)
    }
}

impl ElementIo for PlSpace {
    fn element_json(&self, a: &PlElement) -> ElementJson {
        ElementJson::pl(a)
    }
}

impl ElementIo for HermSpace {
    fn element_json(&self, a: &HermElement) -> ElementJson {
        AnyElement::Herm(self.clone(), a.clone()).to_json()
    }
}

fn qn_from(coords: &[String]) -> Result<(QnSpace, QnElement)> {
    let c = parse_all(coords)?;
    Ok((QnSpace::new(c.len())?, QnElement::new(c)))
}

fn pl_from(bps: &[[String; 2]]) -> Result<PlElement> {
    let pts = bps
        .iter()
        .map(|[x, y]| Ok((parse_rational(x)?, parse_rational(y)?)))
        .collect::<Result<Vec<_>>>()?;
    PlElement::new(pts)
}

fn herm_parts(matrix: &MatrixJson, err: &str) -> Result<(RationalMatrix, Rational)> {
    Ok((matrix.to_matrix()?, parse_rational(err)?))
}

/// Reads one element. Matrix elements live in the algebra of their
/// `generators` field, or of the matrix alone when it is absent.
pub fn element_from_json(j: &ElementJson) -> Result<AnyElement> {
    match j {
        ElementJson::Qn { coords } => {
            let (s, a) = qn_from(coords)?;
            Ok(AnyElement::Qn(s, a))
        }
        ElementJson::Pl { breakpoints } => Ok(AnyElement::Pl(PlSpace, pl_from(breakpoints)?)),
        ElementJson::Herm {
            matrix,
            err,
            generators,
        } => {
            let (m, e) = herm_parts(matrix, err)?;
            let gens = match generators {
                Some(g) => g.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>()?,
                None => vec![m.clone()],
            };
            let space = HermSpace::new(Arc::new(CommutingAlgebra::new(m.dim(), gens)?));
            let a = space.element(m, e)?;
            Ok(AnyElement::Herm(space, a))
        }
    }
}

/// Reads two elements into one space. Matrices share the algebra generated
/// by both (or by the union of their `generators` lists).
pub fn pair_from_json(x: &ElementJson, y: &ElementJson) -> Result<(AnyElement, AnyElement)> {
    match (x, y) {
        (ElementJson::Qn { coords: c1 }, ElementJson::Qn { coords: c2 }) => {
            let (s, a) = qn_from(c1)?;
            let (_, b) = qn_from(c2)?;
            s.contains(&b)?;
            Ok((AnyElement::Qn(s.clone(), a), AnyElement::Qn(s, b)))
        }
        (ElementJson::Pl { breakpoints: b1 }, ElementJson::Pl { breakpoints: b2 }) => Ok((
            AnyElement::Pl(PlSpace, pl_from(b1)?),
            AnyElement::Pl(PlSpace, pl_from(b2)?),
        )),
        (
            ElementJson::Herm {
                matrix: m1,
                err: e1,
                generators: g1,
            },
            ElementJson::Herm {
                matrix: m2,
                err: e2,
                generators: g2,
            },
        ) => {
            let (a, ea) = herm_parts(m1, e1)?;
            let (b, eb) = herm_parts(m2, e2)?;
            let mut gens = Vec::new();
            for (g, m) in [(g1, &a), (g2, &b)] {
                match g {
                    Some(list) => {
                        for gj in list {
                            gens.push(gj.to_matrix()?);
                        }
                    }
                    None => gens.push(m.clone()),
                }
            }
            let space = HermSpace::new(Arc::new(CommutingAlgebra::new(a.dim(), gens)?));
            let ea = space.element(a, ea)?;
            let eb = space.element(b, eb)?;
            Ok((AnyElement::Herm(space.clone(), ea), AnyElement::Herm(space, eb)))
        }
        _ => Err(Error::CrossSpace("inputs are elements of different instances".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub target: ElementJson,
    pub parts: Vec<ElementJson>,
    pub multiplier: u64,
}

/// Certificate over any instance; matrix certificates carry the algebra
/// in each element's `generators` field.
#[derive(Debug, Clone)]
pub enum AnyCertificate {
    Qn(QnSpace, CoverCertificate<QnElement>),
    Pl(PlSpace, CoverCertificate<PlElement>),
    Herm(HermSpace, CoverCertificate<HermElement>),
}

fn multiplier_u64(m: &BigInt) -> Result<u64> {
    u64::try_from(m).map_err(|_| Error::InvalidArgument(format!("multiplier {m} does not fit in 64 bits")))
}

pub fn certificate_to_json(c: &AnyCertificate) -> Result<CertificateJson> {
    fn conv<E, F: Fn(&E) -> ElementJson>(c: &CoverCertificate<E>, f: F) -> Result<CertificateJson> {
        Ok(CertificateJson {
            target: f(c.target.rep()),
            parts: c.parts.iter().map(|p| f(p.rep())).collect(),
            multiplier: multiplier_u64(&c.multiplier)?,
        })
    }
    match c {
        AnyCertificate::Qn(_, c) => conv(c, ElementJson::qn),
        AnyCertificate::Pl(_, c) => conv(c, ElementJson::pl),
        AnyCertificate::Herm(s, c) => {
            let gens = AlgebraJson::from_algebra(s.algebra()).generators;
            conv(c, |a| match ElementJson::herm(a) {
                ElementJson::Herm { matrix, err, .. } => ElementJson::Herm {
                    matrix,
                    err,
                    generators: Some(gens.clone()),
                },
                other => other,
            })
        }
    }
}

pub fn certificate_from_json(j: &CertificateJson) -> Result<AnyCertificate> {
    let target = element_from_json(&j.target)?;
    let multiplier = BigInt::from(j.multiplier);
    match target {
        AnyElement::Qn(s, t) => {
            let mut parts = Vec::new();
            for p in &j.parts {
                match element_from_json(p)? {
                    AnyElement::Qn(_, e) => parts.push(lattice::from_positive(&s, e)?),
                    _ => return Err(Error::CrossSpace("certificate mixes instances".into())),
                }
            }
            let target = lattice::from_positive(&s, t)?;
            Ok(AnyCertificate::Qn(s, CoverCertificate { target, parts, multiplier }))
        }
        AnyElement::Pl(s, t) => {
            let mut parts = Vec::new();
            for p in &j.parts {
                match element_from_json(p)? {
                    AnyElement::Pl(_, e) => parts.push(lattice::from_positive(&s, e)?),
                    _ => return Err(Error::CrossSpace("certificate mixes instances".into())),
                }
            }
            let target = lattice::from_positive(&s, t)?;
            Ok(AnyCertificate::Pl(s, CoverCertificate { target, parts, multiplier }))
        }
        AnyElement::Herm(s, t) => {
            // every element is re-read into the target's algebra
            let mut parts = Vec::new();
            for p in &j.parts {
                let ElementJson::Herm { matrix, err, .. } = p else {
                    return Err(Error::CrossSpace("certificate mixes instances".into()));
                };
                let (m, e) = herm_parts(matrix, err)?;
                parts.push(lattice::from_positive(&s, s.element(m, e)?)?);
            }
            let target = lattice::from_positive(&s, t)?;
            Ok(AnyCertificate::Herm(s, CoverCertificate { target, parts, multiplier }))
        }
    }
}

/// What an input file holds, told apart by its keys.
#[derive(Debug, Clone)]
pub enum InputDoc {
    Element(ElementJson),
    Algebra(AlgebraJson),
    Certificate(CertificateJson),
}

pub fn parse_input(text: &str) -> Result<InputDoc> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("input must be a JSON object".into()))?;
    let de = |e: serde_json::Error| Error::Parse(e.to_string());
    if obj.contains_key("space") {
        Ok(InputDoc::Element(serde_json::from_value(v).map_err(de)?))
    } else if obj.contains_key("target") {
        Ok(InputDoc::Certificate(serde_json::from_value(v).map_err(de)?))
    } else if obj.contains_key("generators") {
        Ok(InputDoc::Algebra(serde_json::from_value(v).map_err(de)?))
    } else if obj.contains_key("entries") {
        // a bare matrix is an exact element of its own algebra
        let matrix: MatrixJson = serde_json::from_value(v).map_err(de)?;
        Ok(InputDoc::Element(ElementJson::Herm {
            matrix,
            err: zero_string(),
            generators: None,
        }))
    } else {
        Err(Error::Parse(
            "unrecognized input: expected an element, matrix, algebra or certificate".into(),
        ))
    }
}

/// Net report row: `(point id, element label, value)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NetRow {
    pub point: usize,
    pub element: String,
    pub value: String,
}

/// `{"eps": "...", "points": [{"id": 0, "evals": {"elem0": "q"}}]}`.
pub fn net_json(eps: &Rational, evals: &[Vec<Rational>]) -> Value {
    let points: Vec<Value> = evals
        .iter()
        .enumerate()
        .map(|(id, vals)| {
            let mut m = serde_json::Map::new();
            for (k, v) in vals.iter().enumerate() {
                m.insert(format!("elem{k}"), Value::String(rational_str(v)));
            }
            serde_json::json!({ "id": id, "evals": Value::Object(m) })
        })
        .collect();
    serde_json::json!({ "eps": rational_str(eps), "points": points })
}

pub fn net_rows(evals: &[Vec<Rational>]) -> Vec<NetRow> {
    evals
        .iter()
        .enumerate()
        .flat_map(|(id, vals)| {
            vals.iter().enumerate().map(move |(k, v)| NetRow {
                point: id,
                element: format!("elem{k}"),
                value: rational_str(v),
            })
        })
        .collect()
}

/// CSV with a header row and one record per item.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};

    #[test]
    fn matrix_round_trip() {
        let m = RationalMatrix::from_rows(vec![vec![rat(1, 2), int(3)], vec![int(3), rat(-7, 4)]]).unwrap();
        let j = MatrixJson::from_matrix(&m);
        assert_eq!(j.entries[0], vec!["1/2".to_string(), "3".to_string()]);
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn element_forms() {
        let q = parse_input(r#"{"space":"qn","coords":["1/2","-3"]}"#).unwrap();
        let InputDoc::Element(j) = q else { panic!() };
        let AnyElement::Qn(_, a) = element_from_json(&j).unwrap() else { panic!() };
        assert_eq!(a, QnElement::new(vec![rat(1, 2), int(-3)]));

        let p = parse_input(r#"{"space":"pl","breakpoints":[["0","1"],["1/2","1/2"],["1","1"]]}"#).unwrap();
        let InputDoc::Element(j) = p else { panic!() };
        let AnyElement::Pl(_, f) = element_from_json(&j).unwrap() else { panic!() };
        assert_eq!(f.eval(&rat(1, 2)), rat(1, 2));

        let h = parse_input(r#"{"space":"herm","matrix":{"dim":1,"entries":[["4"]]},"err":"0"}"#).unwrap();
        let InputDoc::Element(j) = h else { panic!() };
        let AnyElement::Herm(_, a) = element_from_json(&j).unwrap() else { panic!() };
        assert_eq!(a.matrix(), &RationalMatrix::from_i64(&[&[4]]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_input("[1]").is_err());
        assert!(parse_input(r#"{"space":"qn","coords":["1/0"]}"#)
            .and_then(|d| match d {
                InputDoc::Element(j) => element_from_json(&j).map(|_| ()),
                _ => Ok(()),
            })
            .is_err());
        assert!(parse_input(r#"{"space":"qn","coords":[],"extra":1}"#).is_err());
        let bad = r#"{"dim":2,"entries":[["1","2"],["3","1"]]}"#;
        let InputDoc::Element(j) = parse_input(bad).unwrap() else { panic!() };
        assert!(matches!(element_from_json(&j), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn certificate_round_trip() {
        let s = QnSpace::new(1).unwrap();
        let (_, _, cert) = lattice::cover_range(&s, &QnElement::new(vec![rat(3, 2)])).unwrap();
        let any = AnyCertificate::Qn(s, cert);
        let j = certificate_to_json(&any).unwrap();
        let text = serde_json::to_string(&j).unwrap();
        let InputDoc::Certificate(back) = parse_input(&text).unwrap() else { panic!() };
        let AnyCertificate::Qn(s, c) = certificate_from_json(&back).unwrap() else { panic!() };
        assert!(c.verify(&s).is_true());
    }

    #[test]
    fn net_csv_has_header() {
        let csv = to_csv(&net_rows(&[vec![int(0)], vec![int(1)]])).unwrap();
        assert_eq!(csv, "point,element,value\n0,elem0,0\n1,elem0,1\n");
    }
}
