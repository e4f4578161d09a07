//! C ABI for the semireach library: opaque handles, status codes, and
//! accessors so other languages can parse instances, run the decider and
//! the bounded oracle, apply reductions, and extract DFAs.
//!
//! Conventions: functions return [`SrStatus`]; results come back through
//! out-parameters. Any non-`Ok` status leaves a message retrievable with
//! `sr_last_error`. Strings returned through out-parameters are owned by
//! the caller and must be released with `sr_string_free`; handles have
//! their matching `*_free` functions. Passing null where a handle or
//! out-parameter is expected yields `NullArgument`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use semireach::bundle::ReductionBundle;
use semireach::decide::{decide, rational_language_dfa, DecideOpts};
use semireach::instance::{parse_instance, serialize_instance, Decision, Instance};
use semireach::oracle::oracle_search;
use semireach::paterson::{encode_mpcp, MpcpInstance};
use semireach::reduce::{reduce_any, ReductionTarget};

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    Unsupported = 5,
    InternalError = 6,
}

/// The decision of a decide or oracle call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrAnswer {
    Yes = 0,
    No = 1,
    Unknown = 2,
    Unsupported = 3,
    /// A non-certified No from the one-generator period heuristic.
    NoHeuristic = 4,
}

/// Opaque handle to a parsed problem instance.
pub struct SrInstance {
    inner: Instance,
}

/// Opaque handle to a decision, including any witness.
pub struct SrDecision {
    inner: Decision,
}

/// Opaque handle to a reduction bundle.
pub struct SrBundle {
    inner: ReductionBundle,
}

/// A static version string; do not free.
#[no_mangle]
pub extern "C" fn sr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the last error message of this thread; free with
/// `sr_string_free`. Returns null when no error has been recorded.
#[no_mangle]
pub extern "C" fn sr_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if msg.is_empty() {
            ptr::null_mut()
        } else {
            CString::new(msg.as_str()).unwrap_or_default().into_raw()
        }
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a semireach function and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, SrStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(SrStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        SrStatus::InvalidUtf8
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> SrStatus {
    if out.is_null() {
        set_error("null out-parameter");
        return SrStatus::NullArgument;
    }
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SrStatus::Ok
        }
        Err(_) => {
            set_error("text contains an interior NUL byte");
            SrStatus::InternalError
        }
    }
}

/// Parses the plain-text instance format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_instance_parse(
    text: *const c_char,
    out: *mut *mut SrInstance,
) -> SrStatus {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    if out.is_null() {
        set_error("null out-parameter");
        return SrStatus::NullArgument;
    }
    match parse_instance(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SrInstance { inner }));
            SrStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            SrStatus::ParseError
        }
    }
}

/// # Safety
/// `inst` must be a live handle from this library (or null).
#[no_mangle]
pub unsafe extern "C" fn sr_instance_free(inst: *mut SrInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Serializes an instance to its canonical text.
///
/// # Safety
/// `inst` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_instance_serialize(
    inst: *const SrInstance,
    out: *mut *mut c_char,
) -> SrStatus {
    let Some(inst) = inst.as_ref() else {
        set_error("null instance");
        return SrStatus::NullArgument;
    };
    give_string(serialize_instance(&inst.inner), out)
}

/// Alphabet size, or 0 for a null handle.
///
/// # Safety
/// `inst` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sr_instance_letters(inst: *const SrInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.letters())
}

/// Matrix dimension, or 0 for a null handle.
///
/// # Safety
/// `inst` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sr_instance_dim(inst: *const SrInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.dim())
}

/// Decides an instance. `oracle_fallback` and `r1_bound` are opt-in bounds
/// for undecidable semirings; pass a negative value to disable.
///
/// # Safety
/// `inst` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_decide(
    inst: *const SrInstance,
    oracle_fallback: i64,
    r1_bound: i64,
    out: *mut *mut SrDecision,
) -> SrStatus {
    let Some(inst) = inst.as_ref() else {
        set_error("null instance");
        return SrStatus::NullArgument;
    };
    if out.is_null() {
        set_error("null out-parameter");
        return SrStatus::NullArgument;
    }
    let opts = DecideOpts {
        oracle_fallback: usize::try_from(oracle_fallback).ok(),
        r1_max_pow: usize::try_from(r1_bound).ok(),
    };
    let inner = decide(&inst.inner, &opts);
    *out = Box::into_raw(Box::new(SrDecision { inner }));
    SrStatus::Ok
}

/// Bounded brute-force search.
///
/// # Safety
/// `inst` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_oracle(
    inst: *const SrInstance,
    max_len: usize,
    out: *mut *mut SrDecision,
) -> SrStatus {
    let Some(inst) = inst.as_ref() else {
        set_error("null instance");
        return SrStatus::NullArgument;
    };
    if out.is_null() {
        set_error("null out-parameter");
        return SrStatus::NullArgument;
    }
    let inner = oracle_search(&inst.inner, max_len);
    *out = Box::into_raw(Box::new(SrDecision { inner }));
    SrStatus::Ok
}

/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sr_decision_answer(d: *const SrDecision) -> SrAnswer {
    match d.as_ref().map(|d| &d.inner) {
        Some(Decision::Yes(_)) => SrAnswer::Yes,
        Some(Decision::No { heuristic: false }) => SrAnswer::No,
        Some(Decision::No { heuristic: true }) => SrAnswer::NoHeuristic,
        Some(Decision::Unknown(_)) => SrAnswer::Unknown,
        Some(Decision::Unsupported(_)) | None => SrAnswer::Unsupported,
    }
}

/// Witness length for a Yes decision, -1 otherwise.
///
/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sr_decision_witness_len(d: *const SrDecision) -> isize {
    match d.as_ref().map(|d| &d.inner) {
        Some(Decision::Yes(w)) => w.len() as isize,
        _ => -1,
    }
}

/// Copies the witness letters (1-based) of a Yes decision into `buf`.
///
/// # Safety
/// `d` must be a live handle; `buf` must point to at least `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn sr_decision_witness(
    d: *const SrDecision,
    buf: *mut u32,
    cap: usize,
) -> SrStatus {
    let Some(d) = d.as_ref() else {
        set_error("null decision");
        return SrStatus::NullArgument;
    };
    let Decision::Yes(w) = &d.inner else {
        set_error("decision carries no witness");
        return SrStatus::InvalidArgument;
    };
    if buf.is_null() || cap < w.len() {
        set_error("witness buffer too small");
        return SrStatus::InvalidArgument;
    }
    for (k, &l) in w.letters0().iter().enumerate() {
        *buf.add(k) = (l + 1) as u32;
    }
    SrStatus::Ok
}

/// # Safety
/// `d` must be a live handle from this library (or null).
#[no_mangle]
pub unsafe extern "C" fn sr_decision_free(d: *mut SrDecision) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Applies a reduction by name: scalar2, vector2, matrix2, v2m, s2v, s2m,
/// m2v, or cassaigne. Star-mode inputs are converted to plus first.
///
/// # Safety
/// `inst` must be a live handle; `kind` a NUL-terminated string; `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_reduce(
    inst: *const SrInstance,
    kind: *const c_char,
    out: *mut *mut SrBundle,
) -> SrStatus {
    let Some(inst) = inst.as_ref() else {
        set_error("null instance");
        return SrStatus::NullArgument;
    };
    let kind = match read_str(kind) {
        Ok(k) => k,
        Err(s) => return s,
    };
    if out.is_null() {
        set_error("null out-parameter");
        return SrStatus::NullArgument;
    }
    let Some(target) = ReductionTarget::parse(kind) else {
        set_error(format!("unknown reduction `{kind}`"));
        return SrStatus::InvalidArgument;
    };
    match reduce_any(&inst.inner, target) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SrBundle { inner }));
            SrStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            SrStatus::Unsupported
        }
    }
}

/// # Safety
/// `b` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sr_bundle_sub_count(b: *const SrBundle) -> usize {
    b.as_ref().map_or(0, |b| b.inner.subs.len())
}

/// Clones the sub-instance at `index` into a fresh handle.
///
/// # Safety
/// `b` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_bundle_sub(
    b: *const SrBundle,
    index: usize,
    out: *mut *mut SrInstance,
) -> SrStatus {
    let Some(b) = b.as_ref() else {
        set_error("null bundle");
        return SrStatus::NullArgument;
    };
    if out.is_null() {
        set_error("null out-parameter");
        return SrStatus::NullArgument;
    }
    match b.inner.subs.get(index) {
        Some(sub) => {
            *out = Box::into_raw(Box::new(SrInstance { inner: sub.clone() }));
            SrStatus::Ok
        }
        None => {
            set_error(format!("sub-instance index {index} out of range"));
            SrStatus::InvalidArgument
        }
    }
}

/// The key/value manifest header of the bundle.
///
/// # Safety
/// `b` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_bundle_manifest(
    b: *const SrBundle,
    out: *mut *mut c_char,
) -> SrStatus {
    let Some(b) = b.as_ref() else {
        set_error("null bundle");
        return SrStatus::NullArgument;
    };
    give_string(b.inner.manifest_header(), out)
}

/// # Safety
/// `b` must be a live handle from this library (or null).
#[no_mangle]
pub unsafe extern "C" fn sr_bundle_free(b: *mut SrBundle) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Serializes the DFA of the satisfying language (separable semirings
/// only).
///
/// # Safety
/// `inst` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_dfa_text(inst: *const SrInstance, out: *mut *mut c_char) -> SrStatus {
    let Some(inst) = inst.as_ref() else {
        set_error("null instance");
        return SrStatus::NullArgument;
    };
    match rational_language_dfa(&inst.inner) {
        Ok(dfa) => give_string(dfa.serialize(), out),
        Err(e) => {
            set_error(e.to_string());
            SrStatus::Unsupported
        }
    }
}

/// Parses an mpcp file and encodes it as an integer vector-mortality
/// instance.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_mpcp_encode(
    text: *const c_char,
    out: *mut *mut SrInstance,
) -> SrStatus {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    if out.is_null() {
        set_error("null out-parameter");
        return SrStatus::NullArgument;
    }
    let mpcp = match MpcpInstance::parse(text) {
        Ok(m) => m,
        Err(e) => {
            set_error(e.to_string());
            return SrStatus::ParseError;
        }
    };
    match encode_mpcp(&mpcp) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SrInstance { inner }));
            SrStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            SrStatus::InvalidArgument
        }
    }
}
