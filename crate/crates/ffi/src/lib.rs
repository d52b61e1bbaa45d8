//! C ABI over the `fhit` crate.
//!
//! Candidates and certificates are opaque heap handles released with their
//! `_free` function. Every entry point returns an [`FhitStatus`]; on failure
//! [`fhit_last_error`] gives a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use fhit::dft_bounds::{cn_general, GridSpec, StripPair};
use fhit::io::{load_fcf, save_fcf, CandidateFile, OmegaSpec};
use fhit::map::{golden_mean_f64, model_by_name, StandardForcedMap};
use fhit::solver::{continue_to, export_candidate};
use fhit::validator::{validate, Certificate, ValidationParams};
use fhit::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FhitStatus {
    Ok = 0,
    /// Validation ran to completion and some condition failed.
    ValidationFailed = 1,
    NullPointer = 2,
    InvalidArgument = 3,
    ParseError = 4,
    IoError = 5,
    /// Solver or interval failure (no convergence, overflow, ...).
    NumericError = 6,
    /// Requested certificate field was not computed.
    NotAvailable = 7,
    Panic = 8,
}

/// Certificate fields readable with [`fhit_certificate_get`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FhitBound {
    CnUpper = 0,
    Eps = 1,
    Eps1 = 2,
    Eps2 = 3,
    LambdaS = 4,
    LambdaU = 5,
    Lambda = 6,
    Sigma = 7,
    BOfR = 8,
    RMinus = 9,
    RPlus = 10,
}

pub struct FhitCandidate {
    file: CandidateFile,
}

pub struct FhitCertificate {
    cert: Certificate,
    verdict: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FhitStatus {
    match e {
        Error::Parse { .. } | Error::SizeMismatch(_) => FhitStatus::ParseError,
        Error::Io(_) => FhitStatus::IoError,
        Error::BadStrip { .. }
        | Error::BadSize(_)
        | Error::OddSize(_)
        | Error::TooManyDimensions(_)
        | Error::SizeNotPowerOfTwo(_)
        | Error::UnknownModel(_)
        | Error::DimensionMismatch(_)
        | Error::DomainError(_) => FhitStatus::InvalidArgument,
        _ => FhitStatus::NumericError,
    }
}

fn guard(f: impl FnOnce() -> Result<FhitStatus, (FhitStatus, String)>) -> FhitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            FhitStatus::Panic
        }
    }
}

fn lib<T>(r: fhit::Result<T>) -> Result<T, (FhitStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (FhitStatus, String) {
    (FhitStatus::NullPointer, format!("{what} is null"))
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, (FhitStatus, String)> {
    if p.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| (FhitStatus::InvalidArgument, "path is not UTF-8".into()))
}

/// Message for the last failing call on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn fhit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Encloses C_N(rho, rho_hat) on a 1-D grid of size `n`.
///
/// # Safety
/// `lo` and `hi` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fhit_cn(rho: f64, rho_hat: f64, n: usize, lo: *mut f64, hi: *mut f64) -> FhitStatus {
    guard(|| {
        if lo.is_null() || hi.is_null() {
            return Err(null("output"));
        }
        let c = lib(StripPair::new(rho, rho_hat).and_then(|s| cn_general(&s, &GridSpec::one(n)?)))?;
        *lo = c.lo();
        *hi = c.hi();
        Ok(FhitStatus::Ok)
    })
}

/// Continues the forced standard map from zero forcing to `eps_end` and
/// returns the candidate. `omega <= 0` selects the golden mean.
///
/// # Safety
/// `schedule` must point to `schedule_len` sizes; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fhit_continue(
    kappa: f64,
    omega: f64,
    eps_end: f64,
    steps: usize,
    schedule: *const usize,
    schedule_len: usize,
    out: *mut *mut FhitCandidate,
) -> FhitStatus {
    guard(|| {
        if out.is_null() || schedule.is_null() {
            return Err(null(if out.is_null() { "out" } else { "schedule" }));
        }
        *out = std::ptr::null_mut();
        if schedule_len == 0 || steps == 0 {
            return Err((FhitStatus::InvalidArgument, "empty schedule or zero steps".into()));
        }
        let sched = std::slice::from_raw_parts(schedule, schedule_len);
        let (spec, w) = if omega > 0.0 {
            (OmegaSpec::Value(omega), omega)
        } else {
            (OmegaSpec::Golden, golden_mean_f64())
        };
        let st = lib(continue_to(kappa, w, eps_end, steps, sched))?;
        let data = lib(export_candidate(&st))?;
        let file = CandidateFile {
            model: StandardForcedMap::NAME.to_string(),
            kappa,
            eps_map: st.eps_map,
            omega: spec,
            data,
        };
        *out = Box::into_raw(Box::new(FhitCandidate { file }));
        Ok(FhitStatus::Ok)
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fhit_candidate_load(path: *const c_char, out: *mut *mut FhitCandidate) -> FhitStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = std::ptr::null_mut();
        let file = lib(load_fcf(path_arg(path)?))?;
        *out = Box::into_raw(Box::new(FhitCandidate { file }));
        Ok(FhitStatus::Ok)
    })
}

/// # Safety
/// `cand` must come from this library; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn fhit_candidate_save(cand: *const FhitCandidate, path: *const c_char) -> FhitStatus {
    guard(|| {
        let c = cand.as_ref().ok_or_else(|| null("candidate"))?;
        lib(save_fcf(&c.file, path_arg(path)?))?;
        Ok(FhitStatus::Ok)
    })
}

/// Grid size N of the candidate, 0 for a null handle.
///
/// # Safety
/// `cand` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn fhit_candidate_n(cand: *const FhitCandidate) -> usize {
    cand.as_ref().map_or(0, |c| c.file.data.n())
}

/// Forcing amplitude stored with the candidate.
///
/// # Safety
/// `cand` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn fhit_candidate_eps_map(cand: *const FhitCandidate) -> f64 {
    cand.as_ref().map_or(f64::NAN, |c| c.file.eps_map)
}

/// # Safety
/// `cand` must be null or come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fhit_candidate_free(cand: *mut FhitCandidate) {
    if !cand.is_null() {
        drop(Box::from_raw(cand));
    }
}

/// Runs the rigorous validation. `pad_to == 0` keeps N; `noise_floor <= 0`
/// disables noise truncation. Returns `Ok` when validated and
/// `ValidationFailed` otherwise; in both cases `*out` holds the certificate.
///
/// # Safety
/// `cand` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fhit_validate(
    cand: *const FhitCandidate,
    rho: f64,
    rho_hat: f64,
    radius: f64,
    pad_to: usize,
    noise_floor: f64,
    out: *mut *mut FhitCertificate,
) -> FhitStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = std::ptr::null_mut();
        let c = cand.as_ref().ok_or_else(|| null("candidate"))?;
        let params = ValidationParams {
            rho,
            rho_hat,
            radius,
            pad_to: (pad_to > 0).then_some(pad_to),
            noise_floor: (noise_floor > 0.0).then_some(noise_floor),
        };
        lib(params.check())?;
        let map = lib(model_by_name(&c.file.model, c.file.map_params()))?;
        let cert = validate(&c.file.data, &params, map.as_ref());
        let ok = cert.verdict.is_validated();
        let verdict = CString::new(cert.verdict.to_string()).unwrap_or_default();
        if !ok {
            set_error(format!("validation failed: {:?}", cert.verdict));
        }
        *out = Box::into_raw(Box::new(FhitCertificate { cert, verdict }));
        Ok(if ok {
            FhitStatus::Ok
        } else {
            FhitStatus::ValidationFailed
        })
    })
}

/// `validated` or `failed:<Tag>`. Owned by the certificate.
///
/// # Safety
/// `cert` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn fhit_certificate_verdict(cert: *const FhitCertificate) -> *const c_char {
    cert.as_ref().map_or(std::ptr::null(), |c| c.verdict.as_ptr())
}

/// Reads one certified bound.
///
/// # Safety
/// `cert` must come from this library; `value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fhit_certificate_get(
    cert: *const FhitCertificate,
    which: FhitBound,
    value: *mut f64,
) -> FhitStatus {
    guard(|| {
        let c = &cert.as_ref().ok_or_else(|| null("certificate"))?.cert;
        if value.is_null() {
            return Err(null("value"));
        }
        let v = match which {
            FhitBound::CnUpper => c.cn.map(|x| x.hi()),
            FhitBound::Eps => c.eps_inv_err,
            FhitBound::Eps1 => c.eps_red,
            FhitBound::Eps2 => c.eps_invert,
            FhitBound::LambdaS => c.lambda_s,
            FhitBound::LambdaU => c.lambda_u,
            FhitBound::Lambda => c.lambda,
            FhitBound::Sigma => c.sigma,
            FhitBound::BOfR => c.b_of_r,
            FhitBound::RMinus => c.r_minus,
            FhitBound::RPlus => c.r_plus,
        };
        match v {
            Some(x) => {
                *value = x;
                Ok(FhitStatus::Ok)
            }
            None => Err((FhitStatus::NotAvailable, format!("{which:?} was not computed"))),
        }
    })
}

/// # Safety
/// `cert` must be null or come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fhit_certificate_free(cert: *mut FhitCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}
