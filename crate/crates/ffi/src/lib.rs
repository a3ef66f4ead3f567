//! C ABI over `hamming_witness`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns an
//! [`HwStatus`]; on failure the message is available from
//! [`hw_last_error_message`] on the same thread until the next failing call.
//! Panics are caught and reported as `HW_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hamming_witness::brute_force::{exact_f, DEFAULT_BUDGET};
use hamming_witness::cli::{format_certificate, parse_certificate};
use hamming_witness::verifier::DEFAULT_ENUMERATION_LIMIT;
use hamming_witness::{
    certify, make_partition, rank, unrank, CertifyOptions, Error, HammingParams, Mode, Vertex, VertexId,
    WitnessCertificate,
};

/// Opaque Hamming graph parameters.
pub struct HwParams(HammingParams);

/// Opaque witness certificate.
pub struct HwCertificate(WitnessCertificate);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwStatus {
    Ok = 0,
    NullPointer = 1,
    /// Bad parameter, vertex, partition or residue.
    InvalidArgument = 2,
    /// A size guard refused the request.
    LimitExceeded = 3,
    BudgetExhausted = 4,
    /// A mathematical check found an internal contradiction.
    Inconsistent = 5,
    Parse = 6,
    SamplingFailed = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwMode {
    Exhaustive = 0,
    Sampled = 1,
    CountsOnly = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HwStatus {
    match e {
        Error::LimitExceeded { .. } => HwStatus::LimitExceeded,
        Error::BudgetExhausted { .. } => HwStatus::BudgetExhausted,
        Error::Inconsistent(_) => HwStatus::Inconsistent,
        Error::Parse(_) => HwStatus::Parse,
        Error::SamplingFailed { .. } => HwStatus::SamplingFailed,
        _ => HwStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HwStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            HwStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside hamming-witness".to_string());
            HwStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failing call on this thread, or NULL. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_params_new(n: usize, k: u32, out: *mut *mut HwParams) -> HwStatus {
    guard(|| {
        let p = HammingParams::new(n, k)?;
        write_out(out, Box::into_raw(Box::new(HwParams(p))), "out")
    })
}

/// # Safety
/// `params` must come from `hw_params_new` and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hw_params_free(params: *mut HwParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Stores `k^n`; fails with `HW_STATUS_LIMIT_EXCEEDED` if it overflows 64 bits.
///
/// # Safety
/// `params` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_params_vertex_count(params: *const HwParams, out: *mut u64) -> HwStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        let count = p.enumerable_count(u64::MAX)?;
        write_out(out, count, "out")
    })
}

/// Rank of the word `digits[0..len]` (coordinate 1 first).
///
/// # Safety
/// `digits` must point to `len` readable values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_rank(
    params: *const HwParams,
    digits: *const u32,
    len: usize,
    out: *mut u64,
) -> HwStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        if digits.is_null() && len > 0 {
            return Err(Failure::Null("digits"));
        }
        let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(digits, len) };
        let v = Vertex::new(slice.to_vec(), p)?;
        write_out(out, rank(&v, p)?.0, "out")
    })
}

/// Writes the word of `rank_value` into `digits_out[0..len]`; `len` must equal n.
///
/// # Safety
/// `digits_out` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn hw_unrank(
    params: *const HwParams,
    rank_value: u64,
    digits_out: *mut u32,
    len: usize,
) -> HwStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        if len != p.n() {
            return Err(Error::InvalidVertex(format!("buffer holds {len} digits, need {}", p.n())).into());
        }
        if digits_out.is_null() {
            return Err(Failure::Null("digits_out"));
        }
        let v = unrank(VertexId(rank_value), p)?;
        std::slice::from_raw_parts_mut(digits_out, len).copy_from_slice(v.digits());
        Ok(())
    })
}

/// Certifies the canonical witness. `limit` of 0 selects the default
/// enumeration limit.
///
/// # Safety
/// `params` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_certify(
    params: *const HwParams,
    mode: HwMode,
    sample_size: usize,
    seed: u64,
    limit: u64,
    out: *mut *mut HwCertificate,
) -> HwStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        let opts = CertifyOptions {
            mode: match mode {
                HwMode::Exhaustive => Mode::Exhaustive,
                HwMode::Sampled => Mode::Sampled,
                HwMode::CountsOnly => Mode::CountsOnly,
            },
            sample_size,
            seed,
            limit: if limit == 0 { DEFAULT_ENUMERATION_LIMIT } else { limit },
        };
        let cert = certify(p, &make_partition(p.n())?, &opts)?;
        write_out(out, Box::into_raw(Box::new(HwCertificate(cert))), "out")
    })
}

/// # Safety
/// `cert` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hw_certificate_free(cert: *mut HwCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// True when no check failed. False for NULL.
///
/// # Safety
/// `cert` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn hw_certificate_passed(cert: *const HwCertificate) -> bool {
    cert.as_ref().is_some_and(|c| c.0.passed())
}

/// Selected residues of the certified witness.
///
/// # Safety
/// `cert` must be a live handle; `i1` and `i2` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_certificate_residues(
    cert: *const HwCertificate,
    i1: *mut u32,
    i2: *mut u32,
) -> HwStatus {
    guard(|| {
        let c = &deref(cert, "cert")?.0;
        write_out(i1, c.spec.i1(), "i1")?;
        write_out(i2, c.spec.i2(), "i2")
    })
}

/// Renders the certificate text. Release the string with `hw_string_free`.
///
/// # Safety
/// `cert` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_certificate_to_text(cert: *const HwCertificate, out: *mut *mut c_char) -> HwStatus {
    guard(|| {
        let c = &deref(cert, "cert")?.0;
        let text = CString::new(format_certificate(c)).expect("certificate text has no NUL");
        write_out(out, text.into_raw(), "out")
    })
}

/// Parses certificate text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_certificate_parse(text: *const c_char, out: *mut *mut HwCertificate) -> HwStatus {
    guard(|| {
        if text.is_null() {
            return Err(Failure::Null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Error::Parse("certificate is not UTF-8".into()))?;
        let cert = parse_certificate(s)?;
        write_out(out, Box::into_raw(Box::new(HwCertificate(cert))), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact f(H(n,k)) for `k^n <= 64`. A `budget` of 0 selects the default.
/// `exhausted` is false when the budget ran out and `value` is only an
/// upper bound.
///
/// # Safety
/// `params` must be a live handle; `value` and `exhausted` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_exact_f(
    params: *const HwParams,
    budget: u64,
    value: *mut usize,
    exhausted: *mut bool,
) -> HwStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        let r = exact_f(p, if budget == 0 { DEFAULT_BUDGET } else { budget })?;
        write_out(value, r.value, "value")?;
        write_out(exhausted, r.exhausted, "exhausted")
    })
}
