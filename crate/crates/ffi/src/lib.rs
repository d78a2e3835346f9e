//! C ABI over the toolkit.
//!
//! Elements and spectrum points are opaque heap handles owned by the caller
//! and released with the matching `*_free`. Rationals cross the boundary as
//! `"p/q"` strings, structured values as JSON strings; every string handed
//! out must be released with `rs_string_free`. Each call returns an
//! [`RsStatus`]; on failure `rs_last_error` describes the cause on the
//! calling thread. Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use riesz_spectrum::falgebra::{gelfand_check, sqrt_psd};
use riesz_spectrum::instances::{HermSpace, PlSpace, QnSpace};
use riesz_spectrum::io::{self, AlgebraJson, AnyElement, ElementJson};
use riesz_spectrum::numerics::{parse_rational, Rational};
use riesz_spectrum::riesz::{self, RieszSpace};
use riesz_spectrum::spectrum::{point_new, pos_or_below, sup_approx_generic, PosOutcome, Representation};
use riesz_spectrum::Error;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    /// Input violates a documented precondition (not PSD, not symmetric, ...).
    Precondition = 5,
    /// Arguments belong to different spaces.
    CrossSpace = 6,
    /// Not decidable at the requested precision.
    Unresolvable = 7,
    /// The element is certified below the threshold.
    NotPositive = 8,
    Internal = 9,
    Panic = 10,
}

/// Opaque element handle.
pub struct RsElement(AnyElement);

enum AnyPoint {
    Qn(Representation<QnSpace>),
    Pl(Representation<PlSpace>),
    Herm(Representation<HermSpace>),
}

/// Opaque spectrum-point handle; its evaluation cache grows with use.
pub struct RsPoint(AnyPoint);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(RsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) => RsStatus::Parse,
            Error::InvalidArgument(_) | Error::InvalidInterval { .. } | Error::DegenerateWidth(_) => {
                RsStatus::InvalidArgument
            }
            Error::CrossSpace(_) => RsStatus::CrossSpace,
            Error::Unresolvable(_) | Error::CertificateMissing(_) | Error::MarginCollapse => RsStatus::Unresolvable,
            Error::NotPositive(_) => RsStatus::NotPositive,
            Error::IterationCap(_) => RsStatus::Internal,
            _ => RsStatus::Precondition,
        };
        Fail(status, e.to_string())
    }
}

fn fail(status: RsStatus, msg: impl Into<String>) -> Fail {
    Fail(status, msg.into())
}

/// Runs `f`, mapping errors and panics to a status and the last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RsStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            RsStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(fail(RsStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(RsStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn rational(p: *const c_char) -> Result<Rational, Fail> {
    Ok(parse_rational(text(p)?)?)
}

unsafe fn element<'a>(p: *const RsElement) -> Result<&'a AnyElement, Fail> {
    p.as_ref().map(|e| &e.0).ok_or_else(|| fail(RsStatus::NullPointer, "null element handle"))
}

unsafe fn out_ptr<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| fail(RsStatus::NullPointer, "null output pointer"))
}

fn c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| fail(RsStatus::Internal, "output contains a nul byte"))
}

fn parse_element_json(s: &str) -> Result<ElementJson, Fail> {
    serde_json::from_str(s).map_err(|e| fail(RsStatus::Parse, e.to_string()))
}

fn positive(q: &Rational, what: &str) -> Result<(), Fail> {
    if q > &Rational::from_integer(0.into()) {
        Ok(())
    } else {
        Err(fail(RsStatus::InvalidArgument, format!("{what} must be positive, got {q}")))
    }
}

macro_rules! on_element {
    ($e:expr, |$s:ident, $a:ident| $body:expr) => {
        match $e {
            AnyElement::Qn($s, $a) => $body,
            AnyElement::Pl($s, $a) => $body,
            AnyElement::Herm($s, $a) => $body,
        }
    };
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn rs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn rs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an element from its JSON form (`{"space": "qn" | "pl" | "herm", ...}`).
///
/// # Safety
/// `json` must be a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_element_from_json(json: *const c_char, out: *mut *mut RsElement) -> RsStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let j = parse_element_json(text(json)?)?;
        let e = io::element_from_json(&j)?;
        *out = Box::into_raw(Box::new(RsElement(e)));
        Ok(())
    })
}

/// Parses an element into the space of `like`, so the two can be combined
/// (a matrix joins the algebra of `like` rather than generating its own).
///
/// # Safety
/// `like` must be a live handle, `json` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_element_from_json_in(
    like: *const RsElement,
    json: *const c_char,
    out: *mut *mut RsElement,
) -> RsStatus {
    guard(|| {
        let like = element(like)?;
        let out = out_ptr(out)?;
        let j = parse_element_json(text(json)?)?;
        let e = match (like, io::element_from_json(&j)?) {
            (AnyElement::Qn(s, _), AnyElement::Qn(_, a)) => {
                s.contains(&a)?;
                AnyElement::Qn(s.clone(), a)
            }
            (AnyElement::Pl(s, _), AnyElement::Pl(_, a)) => AnyElement::Pl(s.clone(), a),
            (AnyElement::Herm(s, _), AnyElement::Herm(_, a)) => {
                AnyElement::Herm(s.clone(), s.element(a.matrix().clone(), a.err().clone())?)
            }
            (l, r) => {
                return Err(fail(
                    RsStatus::CrossSpace,
                    format!("element of {} cannot join a {} space", r.tag(), l.tag()),
                ))
            }
        };
        *out = Box::into_raw(Box::new(RsElement(e)));
        Ok(())
    })
}

/// Releases an element. Null is ignored.
///
/// # Safety
/// `e` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rs_element_free(e: *mut RsElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// JSON form of an element.
///
/// # Safety
/// `e` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_element_to_json(e: *const RsElement, out: *mut *mut c_char) -> RsStatus {
    guard(|| {
        let e = element(e)?;
        let out = out_ptr(out)?;
        let s = serde_json::to_string(&e.to_json()).map_err(|e| fail(RsStatus::Internal, e.to_string()))?;
        *out = c_string(s)?;
        Ok(())
    })
}

/// `sup a` within `eps` from the located cut of the instance. With
/// `generic` nonzero it uses only positivity queries instead.
///
/// # Safety
/// `a` must be a live handle, `eps` a nul-terminated rational, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_sup(a: *const RsElement, eps: *const c_char, generic: c_int, out: *mut *mut c_char) -> RsStatus {
    guard(|| {
        let a = element(a)?;
        let eps = rational(eps)?;
        positive(&eps, "eps")?;
        let out = out_ptr(out)?;
        let v = on_element!(a, |s, x| if generic != 0 {
            sup_approx_generic(s, x, &eps)?
        } else {
            s.sup_cut(x).approx(&eps)?
        });
        *out = c_string(io::rational_str(&v))?;
        Ok(())
    })
}

/// `‖a‖` (the least `λ` with `|a| <= λ·1`) within `eps`.
///
/// # Safety
/// As for [`rs_sup`].
#[no_mangle]
pub unsafe extern "C" fn rs_norm(a: *const RsElement, eps: *const c_char, out: *mut *mut c_char) -> RsStatus {
    guard(|| {
        let a = element(a)?;
        let eps = rational(eps)?;
        positive(&eps, "eps")?;
        let out = out_ptr(out)?;
        let v = on_element!(a, |s, x| riesz::norm_cut(s, x)?.approx(&eps)?);
        *out = c_string(io::rational_str(&v))?;
        Ok(())
    })
}

/// Decides `sup a > 0` versus `sup a < r`. Writes 1 to `is_pos` with a
/// strict lower bound on `sup a` in `value`, or 0 with `r` in `value`.
///
/// # Safety
/// `a` must be a live handle, `r` a nul-terminated rational, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn rs_pos(
    a: *const RsElement,
    r: *const c_char,
    is_pos: *mut c_int,
    value: *mut *mut c_char,
) -> RsStatus {
    guard(|| {
        let a = element(a)?;
        let r = rational(r)?;
        let is_pos = out_ptr(is_pos)?;
        let value = out_ptr(value)?;
        let out = on_element!(a, |s, x| pos_or_below(s, x, &r)?);
        let (flag, v) = match out {
            PosOutcome::Pos(w) => (1, w),
            PosOutcome::Below(b) => (0, b),
        };
        *value = c_string(io::rational_str(&v))?;
        *is_pos = flag;
        Ok(())
    })
}

/// Starts a spectrum point with `σ(a) > 0`, certified by a positivity
/// query at threshold `r`. Fails with `NotPositive` when `sup a < r`.
///
/// # Safety
/// `a` must be a live handle, `r` a nul-terminated rational, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_point_new(a: *const RsElement, r: *const c_char, out: *mut *mut RsPoint) -> RsStatus {
    guard(|| {
        let a = element(a)?;
        let r = rational(r)?;
        let out = out_ptr(out)?;
        let p = match a {
            AnyElement::Qn(s, x) => AnyPoint::Qn(point_new(s, x, &pos_or_below(s, x, &r)?)?),
            AnyElement::Pl(s, x) => AnyPoint::Pl(point_new(s, x, &pos_or_below(s, x, &r)?)?),
            AnyElement::Herm(s, x) => AnyPoint::Herm(point_new(s, x, &pos_or_below(s, x, &r)?)?),
        };
        *out = Box::into_raw(Box::new(RsPoint(p)));
        Ok(())
    })
}

/// `σ(b)` within `eps`. `b` must live in the space the point was built in
/// (see [`rs_element_from_json_in`]).
///
/// # Safety
/// `p` and `b` must be live handles, `eps` a nul-terminated rational, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_point_eval(
    p: *mut RsPoint,
    b: *const RsElement,
    eps: *const c_char,
    out: *mut *mut c_char,
) -> RsStatus {
    guard(|| {
        let p = p.as_mut().ok_or_else(|| fail(RsStatus::NullPointer, "null point handle"))?;
        let b = element(b)?;
        let eps = rational(eps)?;
        let out = out_ptr(out)?;
        let v = match (&mut p.0, b) {
            (AnyPoint::Qn(p), AnyElement::Qn(_, x)) => p.eval(x, &eps)?,
            (AnyPoint::Pl(p), AnyElement::Pl(_, x)) => p.eval(x, &eps)?,
            (AnyPoint::Herm(p), AnyElement::Herm(_, x)) => p.eval(x, &eps)?,
            _ => return Err(fail(RsStatus::CrossSpace, "element and point belong to different instances")),
        };
        *out = c_string(io::rational_str(&v))?;
        Ok(())
    })
}

/// Releases a point. Null is ignored.
///
/// # Safety
/// `p` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rs_point_free(p: *mut RsPoint) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Square root `S` of a positive semidefinite matrix element with
/// `‖S² − A‖ <= tol`; `S` commutes with the algebra of `a`.
///
/// # Safety
/// `a` must be a live handle, `tol` a nul-terminated rational, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_sqrt(a: *const RsElement, tol: *const c_char, out: *mut *mut RsElement) -> RsStatus {
    guard(|| {
        let a = element(a)?;
        let tol = rational(tol)?;
        positive(&tol, "tol")?;
        let out = out_ptr(out)?;
        let AnyElement::Herm(s, x) = a else {
            return Err(fail(RsStatus::InvalidArgument, "sqrt needs a matrix element"));
        };
        let (root, _) = sqrt_psd(s, x, &tol)?;
        *out = Box::into_raw(Box::new(RsElement(AnyElement::Herm(s.clone(), root))));
        Ok(())
    })
}

/// Multiplicativity check of spectrum evaluations on the algebra given as
/// `{"generators": [matrix, ...]}`. Writes 1 or 0 to `ok` and, if
/// `report` is non-null, a JSON summary there.
///
/// # Safety
/// `algebra_json` and `eps` must be nul-terminated strings, `ok` writable.
#[no_mangle]
pub unsafe extern "C" fn rs_gelfand(
    algebra_json: *const c_char,
    eps: *const c_char,
    ok: *mut c_int,
    report: *mut *mut c_char,
) -> RsStatus {
    guard(|| {
        let aj: AlgebraJson =
            serde_json::from_str(text(algebra_json)?).map_err(|e| fail(RsStatus::Parse, e.to_string()))?;
        let eps = rational(eps)?;
        positive(&eps, "eps")?;
        let ok = out_ptr(ok)?;
        let space = HermSpace::new(std::sync::Arc::new(aj.to_algebra()?));
        let r = gelfand_check(&space, &eps)?;
        if !report.is_null() {
            let j = serde_json::json!({
                "ok": r.ok,
                "maxMultViolation": io::rational_str(&r.max_mult_violation),
                "maxRatio": io::rational_str(&r.max_ratio),
                "pairsTested": r.pairs_tested,
                "points": r.points,
                "keyChecks": r.key_checks,
                "keyFailures": r.key_failures,
            });
            *report = c_string(j.to_string())?;
        }
        *ok = c_int::from(r.ok);
        Ok(())
    })
}
