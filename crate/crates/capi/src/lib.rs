//! C ABI over the heightfloor library.
//!
//! Conventions: every function returns an [`HfStatus`]; results come back
//! through out-pointers. Strings returned by this library are heap
//! allocated and must be released with [`hf_string_free`]; curve handles
//! with [`hf_curve_free`]. No call unwinds across the boundary.

use heightfloor::bounds::{final_bound_log, tame_bound_log, verify_chain, wild_bound_log};
use heightfloor::division_poly::{build_samples, verify_height_floor, DEFAULT_CAP};
use heightfloor::elliptic::{is_supersingular, trace_of_frobenius, Curve};
use heightfloor::error::Error;
use heightfloor::galois_image::certify_surjective;
use heightfloor::gl2_lab::run_all;
use heightfloor::heights::{check_sumexpl, is_root_of_unity, weil_height, AlgebraicNumber};
use heightfloor::prime_cert::find_prime;
use libc::c_char;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes of every C-ABI call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DomainError = 3,
    SingularCurve = 4,
    BadReduction = 5,
    UnsupportedPrime = 6,
    CapExceeded = 7,
    PreconditionViolated = 8,
    PrecisionFailure = 9,
    InternalError = 10,
}

fn status_of(e: &Error) -> HfStatus {
    match e {
        Error::Domain(_) => HfStatus::DomainError,
        Error::SingularCurve => HfStatus::SingularCurve,
        Error::BadReduction(_) => HfStatus::BadReduction,
        Error::UnsupportedPrime(_) => HfStatus::UnsupportedPrime,
        Error::Cap { .. } => HfStatus::CapExceeded,
        Error::Precondition(_) => HfStatus::PreconditionViolated,
        Error::Precision(_) => HfStatus::PrecisionFailure,
    }
}

/// Opaque curve handle.
pub struct HfCurve {
    inner: Curve,
}

fn guard<F: FnOnce() -> HfStatus>(f: F) -> HfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => HfStatus::InternalError,
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, HfStatus> {
    if p.is_null() {
        return Err(HfStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| HfStatus::InvalidInput)
}

fn give_string(s: String, out: *mut *mut c_char) -> HfStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            HfStatus::Ok
        }
        Err(_) => HfStatus::InternalError,
    }
}

fn give_json<T: serde::Serialize>(doc: &T, out: *mut *mut c_char) -> HfStatus {
    match serde_json::to_string(doc) {
        Ok(s) => give_string(s, out),
        Err(_) => HfStatus::InternalError,
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn hf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Release a string returned by any hf_* call.
///
/// # Safety
/// `s` must be a pointer previously returned through an hf_* out-string
/// parameter and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse "a1,a2,a3,a4,a6" into a curve handle.
///
/// # Safety
/// `coeffs` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hf_curve_parse(coeffs: *const c_char, out: *mut *mut HfCurve) -> HfStatus {
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| {
        let text = match read_str(coeffs) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Curve::parse(text) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(HfCurve { inner: c }));
                HfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `curve` must come from [`hf_curve_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hf_curve_free(curve: *mut HfCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Trace of Frobenius a_ell at a good prime ell >= 5.
///
/// # Safety
/// `curve` must be a live handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hf_curve_trace(
    curve: *const HfCurve,
    ell: u64,
    out: *mut i64,
) -> HfStatus {
    if curve.is_null() || out.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| match trace_of_frobenius(&(*curve).inner, ell) {
        Ok(t) => {
            *out = t;
            HfStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Supersingularity test at p >= 5 of good reduction.
///
/// # Safety
/// `curve` must be a live handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hf_curve_is_supersingular(
    curve: *const HfCurve,
    p: u64,
    out: *mut bool,
) -> HfStatus {
    if curve.is_null() || out.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| match is_supersingular(&(*curve).inner, p) {
        Ok(b) => {
            *out = b;
            HfStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Weil height of the algebraic number with the given minimal polynomial
/// (descending comma-separated integer coefficients).
///
/// # Safety
/// `minpoly` must be a valid string; out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn hf_weil_height(
    minpoly: *const c_char,
    out_nats: *mut f64,
    out_abs_error: *mut f64,
) -> HfStatus {
    if out_nats.is_null() || out_abs_error.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| {
        let text = match read_str(minpoly) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let alg = match AlgebraicNumber::parse(text) {
            Ok(a) => a,
            Err(e) => return status_of(&e),
        };
        match weil_height(&alg) {
            Ok(h) => {
                *out_nats = h.nats;
                *out_abs_error = h.abs_error;
                HfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Root-of-unity test; when true, `out_order` receives the order.
///
/// # Safety
/// `minpoly` must be a valid string; out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn hf_is_root_of_unity(
    minpoly: *const c_char,
    out_is: *mut bool,
    out_order: *mut u64,
) -> HfStatus {
    if out_is.is_null() || out_order.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| {
        let text = match read_str(minpoly) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let alg = match AlgebraicNumber::parse(text) {
            Ok(a) => a,
            Err(e) => return status_of(&e),
        };
        match is_root_of_unity(&alg) {
            Some(m) => {
                *out_is = true;
                *out_order = m;
            }
            None => {
                *out_is = false;
                *out_order = 0;
            }
        }
        HfStatus::Ok
    })
}

/// ln of the headline floor (log p)^4 / p^(5 p^4).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hf_final_bound_ln(p: u64, out: *mut f64) -> HfStatus {
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| match final_bound_log(p) {
        Ok(v) => {
            *out = v.ln_f64();
            HfStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// ln of the tame-case floor at a given E.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hf_tame_bound_ln(p: u64, cal_e: u64, out: *mut f64) -> HfStatus {
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| match tame_bound_log(p, cal_e) {
        Ok(v) => {
            *out = v.ln_f64();
            HfStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// ln of the wild-case floor.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hf_wild_bound_ln(p: u64, out: *mut f64) -> HfStatus {
    if out.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| match wild_bound_log(p) {
        Ok(v) => {
            *out = v.ln_f64();
            HfStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Scan for the smallest certified prime; the full outcome document
/// (found certificate or failure histogram) arrives as JSON.
///
/// # Safety
/// `curve` must be a live handle, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn hf_certify_prime_json(
    curve: *const HfCurve,
    d: u32,
    exponent: u32,
    p_max: u64,
    ell_max: u64,
    out_json: *mut *mut c_char,
) -> HfStatus {
    if curve.is_null() || out_json.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| match find_prime(&(*curve).inner, d, exponent, p_max, ell_max) {
        Ok(outcome) => give_json(&outcome, out_json),
        Err(e) => status_of(&e),
    })
}

/// Surjectivity certification scan at one prime, as JSON.
///
/// # Safety
/// `curve` must be a live handle, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn hf_certify_surjective_json(
    curve: *const HfCurve,
    p: u64,
    ell_max: u64,
    out_json: *mut *mut c_char,
) -> HfStatus {
    if curve.is_null() || out_json.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| match certify_surjective(&(*curve).inner, p, ell_max) {
        Ok(cert) => give_json(&cert, out_json),
        Err(e) => status_of(&e),
    })
}

/// Torsion sampling up to nmax against a floor given as its natural log;
/// the floor report arrives as JSON.
///
/// # Safety
/// `curve` must be a live handle, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn hf_torsion_sample_json(
    curve: *const HfCurve,
    n_max: u32,
    bound_ln: f64,
    out_json: *mut *mut c_char,
) -> HfStatus {
    if curve.is_null() || out_json.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| {
        if !bound_ln.is_finite() {
            return HfStatus::InvalidInput;
        }
        let samples = match build_samples(&(*curve).inner, n_max, DEFAULT_CAP) {
            Ok(s) => s,
            Err(e) => return status_of(&e),
        };
        let bound = heightfloor::bounds::LogScaleValue::from_ln_f64(bound_ln);
        match verify_height_floor(&samples, &bound) {
            Ok(report) => give_json(&report, out_json),
            Err(e) => status_of(&e),
        }
    })
}

/// The proof-chain verification report as JSON.
///
/// # Safety
/// `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hf_verify_chain_json(
    p: u64,
    d: u32,
    exponent: u32,
    out_json: *mut *mut c_char,
) -> HfStatus {
    if out_json.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| match verify_chain(p, d, exponent) {
        Ok(report) => give_json(&report, out_json),
        Err(e) => status_of(&e),
    })
}

/// Every group-theory verifier available at p, as JSON; `out_all_match`
/// receives whether everything matched the frozen expectations.
///
/// # Safety
/// Out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hf_gl2_verify_json(
    p: u64,
    out_all_match: *mut bool,
    out_json: *mut *mut c_char,
) -> HfStatus {
    if out_json.is_null() || out_all_match.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| match run_all(p) {
        Ok(report) => {
            *out_all_match = report.all_match_expected;
            give_json(&report, out_json)
        }
        Err(e) => status_of(&e),
    })
}

/// The archimedean embedding-sum inequality check, as JSON.
///
/// # Safety
/// `minpoly` must be a valid string, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn hf_sumexpl_json(
    minpoly: *const c_char,
    delta: f64,
    out_json: *mut *mut c_char,
) -> HfStatus {
    if out_json.is_null() {
        return HfStatus::NullPointer;
    }
    guard(|| {
        let text = match read_str(minpoly) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let alg = match AlgebraicNumber::parse(text) {
            Ok(a) => a,
            Err(e) => return status_of(&e),
        };
        match check_sumexpl(&alg, delta) {
            Ok(report) => give_json(&report, out_json),
            Err(e) => status_of(&e),
        }
    })
}
