//! C ABI over the `dyingrabbit` crate.
//!
//! Every fallible call returns a [`DrStatus`] and writes its result through
//! an out pointer. On failure a message is available from
//! [`dr_last_error`] on the same thread. Strings handed out by this library
//! must be released with [`dr_string_free`], handles with their own `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dyingrabbit::binet::{binet_form, closed_form_eval, verify, BinetForm};
use dyingrabbit::charpoly::{build_g, squarefree_check};
use dyingrabbit::report::{BinetFormRecord, Render};
use dyingrabbit::roots::dominant_root;
use dyingrabbit::sequences::{custom_seq, dying_rabbit_seq};
use dyingrabbit::{numeric, Error, InitialConditions, SequenceParams, SequenceWindow};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrStatus {
    Ok = 0,
    InvalidParameter = 1,
    InitLengthMismatch = 2,
    Unsupported = 3,
    Parse = 4,
    ConvergenceFailure = 5,
    IllConditioned = 6,
    PrecisionExhausted = 7,
    NullPointer = 8,
    Panic = 9,
}

/// Exact terms of a sequence window.
pub struct DrSequence(SequenceWindow);

/// A closed form: roots, coefficients and the seed they reproduce.
pub struct DrBinetForm(BinetForm);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn fail(status: DrStatus, message: impl Into<String>) -> DrStatus {
    set_error(message.into());
    status
}

fn from_error(e: Error) -> DrStatus {
    let status = match e {
        Error::InvalidParameter(_) => DrStatus::InvalidParameter,
        Error::InitLengthMismatch { .. } => DrStatus::InitLengthMismatch,
        Error::Unsupported(_) => DrStatus::Unsupported,
        Error::Parse(_) => DrStatus::Parse,
        Error::ConvergenceFailure(_) => DrStatus::ConvergenceFailure,
        Error::IllConditioned { .. } => DrStatus::IllConditioned,
        Error::PrecisionExhausted { .. } => DrStatus::PrecisionExhausted,
    };
    fail(status, e.to_string())
}

/// Runs `body`, turning errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), DrStatus>) -> DrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DrStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(DrStatus::Panic, "internal panic"),
    }
}

fn check<T>(r: dyingrabbit::Result<T>) -> Result<T, DrStatus> {
    r.map_err(from_error)
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), DrStatus> {
    if p.is_null() {
        Err(fail(DrStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be null or point to a live `T`.
unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, DrStatus> {
    p.as_ref()
        .ok_or_else(|| fail(DrStatus::NullPointer, format!("{name} is null")))
}

fn into_c_string(s: String) -> Result<*mut c_char, DrStatus> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| fail(DrStatus::Parse, "string contains a NUL byte"))
}

/// # Safety
/// `init` must point to `len` readable values when non-null.
unsafe fn read_init(init: *const i64, len: usize) -> Option<InitialConditions> {
    if init.is_null() {
        None
    } else {
        Some(InitialConditions::from_i64(std::slice::from_raw_parts(init, len)))
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dr_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Terms `C_0 .. C_t`. A null `init` selects the default seed; otherwise
/// `init_len` must equal `k + h - 1`.
///
/// # Safety
/// `init` must point to `init_len` values when non-null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dr_sequence_new(
    k: u32,
    h: u32,
    t: u64,
    init: *const i64,
    init_len: usize,
    out: *mut *mut DrSequence,
) -> DrStatus {
    guard(|| {
        non_null(out, "out")?;
        let params = check(SequenceParams::new(k, h))?;
        let window = match read_init(init, init_len) {
            Some(init) => check(custom_seq(params, &init, t))?,
            None => check(dying_rabbit_seq(params, t))?,
        };
        *out = Box::into_raw(Box::new(DrSequence(window)));
        Ok(())
    })
}

/// Number of terms held, zero for null.
///
/// # Safety
/// `seq` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dr_sequence_len(seq: *const DrSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.0.terms.len())
}

/// Term `i` of the window as a decimal string.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dr_sequence_term(seq: *const DrSequence, i: usize, out: *mut *mut c_char) -> DrStatus {
    guard(|| {
        let seq = handle(seq, "seq")?;
        non_null(out, "out")?;
        let term = seq
            .0
            .terms
            .get(i)
            .ok_or_else(|| fail(DrStatus::InvalidParameter, format!("index {i} out of range")))?;
        *out = into_c_string(term.to_string())?;
        Ok(())
    })
}

/// Term `i` as a signed 64-bit integer; fails when it does not fit.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dr_sequence_term_i64(seq: *const DrSequence, i: usize, out: *mut i64) -> DrStatus {
    guard(|| {
        let seq = handle(seq, "seq")?;
        non_null(out, "out")?;
        let term = seq
            .0
            .terms
            .get(i)
            .ok_or_else(|| fail(DrStatus::InvalidParameter, format!("index {i} out of range")))?;
        *out = term
            .to_i64()
            .ok_or_else(|| fail(DrStatus::InvalidParameter, format!("term {term} exceeds 64 bits")))?;
        Ok(())
    })
}

/// All terms joined by commas.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dr_sequence_to_string(seq: *const DrSequence, out: *mut *mut c_char) -> DrStatus {
    guard(|| {
        let seq = handle(seq, "seq")?;
        non_null(out, "out")?;
        *out = into_c_string(seq.0.to_comma_string())?;
        Ok(())
    })
}

/// # Safety
/// `seq` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dr_sequence_free(seq: *mut DrSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Dominant root of `g_{k,h}`. Either output may be null.
///
/// # Safety
/// Non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn dr_dominant_root(
    k: u32,
    h: u32,
    precision_bits: u32,
    out_decimal: *mut *mut c_char,
    out_approx: *mut f64,
) -> DrStatus {
    guard(|| {
        let params = check(SequenceParams::new(k, h))?;
        let root = check(dominant_root(params, precision_bits))?;
        if !out_decimal.is_null() {
            *out_decimal = into_c_string(numeric::format_float(&root.value, precision_bits))?;
        }
        if !out_approx.is_null() {
            *out_approx = root.value.to_f64();
        }
        Ok(())
    })
}

/// Whether `g_{k,h}` has no repeated roots, decided exactly.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dr_squarefree(k: u32, h: u32, out: *mut bool) -> DrStatus {
    guard(|| {
        non_null(out, "out")?;
        let params = check(SequenceParams::new(k, h))?;
        *out = check(squarefree_check(&build_g(params)))?.squarefree;
        Ok(())
    })
}

/// Closed form for `C^(k,h)`. A null `init` selects the default seed.
///
/// # Safety
/// `init` must point to `init_len` values when non-null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dr_binet_form_new(
    k: u32,
    h: u32,
    init: *const i64,
    init_len: usize,
    precision_bits: u32,
    out: *mut *mut DrBinetForm,
) -> DrStatus {
    guard(|| {
        non_null(out, "out")?;
        let params = check(SequenceParams::new(k, h))?;
        let init = read_init(init, init_len);
        let form = check(binet_form(params, init.as_ref(), precision_bits))?;
        *out = Box::into_raw(Box::new(DrBinetForm(form)));
        Ok(())
    })
}

/// Rebuilds a closed form from its JSON rendering.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dr_binet_form_from_json(json: *const c_char, out: *mut *mut DrBinetForm) -> DrStatus {
    guard(|| {
        non_null(json, "json")?;
        non_null(out, "out")?;
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| fail(DrStatus::Parse, "json is not UTF-8"))?;
        let record: BinetFormRecord =
            serde_json::from_str(text).map_err(|e| fail(DrStatus::Parse, format!("malformed json: {e}")))?;
        let form = check(BinetForm::try_from(&record))?;
        *out = Box::into_raw(Box::new(DrBinetForm(form)));
        Ok(())
    })
}

/// JSON rendering: roots and coefficients as `(re, im)` decimal pairs.
///
/// # Safety
/// `form` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dr_binet_form_to_json(form: *const DrBinetForm, out: *mut *mut c_char) -> DrStatus {
    guard(|| {
        let form = handle(form, "form")?;
        non_null(out, "out")?;
        let json = check(BinetFormRecord::from(&form.0).json())?;
        *out = into_c_string(json)?;
        Ok(())
    })
}

/// Recurrence order `k + h - 1`, zero for null.
///
/// # Safety
/// `form` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dr_binet_form_order(form: *const DrBinetForm) -> usize {
    form.as_ref().map_or(0, |f| f.0.params.order())
}

/// `C_n` from the closed form, rounded to the nearest integer.
///
/// # Safety
/// `form` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dr_binet_form_eval(form: *const DrBinetForm, n: u64, out: *mut *mut c_char) -> DrStatus {
    guard(|| {
        let form = handle(form, "form")?;
        non_null(out, "out")?;
        let value = check(closed_form_eval(&form.0, n))?;
        *out = into_c_string(value.rounded.to_string())?;
        Ok(())
    })
}

/// # Safety
/// `form` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dr_binet_form_free(form: *mut DrBinetForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Counts `n <= n_max` where the rounded closed form differs from the
/// recurrence, doubling precision on numerical failure up to
/// `max_precision_bits`.
///
/// # Safety
/// `out_mismatches` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dr_verify(
    k: u32,
    h: u32,
    n_max: u64,
    precision_bits: u32,
    max_precision_bits: u32,
    out_mismatches: *mut u64,
) -> DrStatus {
    guard(|| {
        non_null(out_mismatches, "out_mismatches")?;
        let params = check(SequenceParams::new(k, h))?;
        let report = check(verify(params, None, n_max, precision_bits, max_precision_bits))?;
        *out_mismatches = report.mismatches.len() as u64;
        Ok(())
    })
}
