//! C interface to `lcdecomp`.
//!
//! A problem is parsed once into an opaque [`LcProblem`] handle; every query
//! returns an [`LcStatus`] and writes its result through an out pointer.
//! Strings handed out by the library are NUL-terminated JSON and must be
//! released with [`lc_string_free`]. After a failure,
//! [`lc_last_error_message`] describes it until the next call on the same
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lcdecomp::cli::{HilbertRow, ProblemSpec};
use lcdecomp::decomp::{
    decomposition, full_report, interval_betti_table, laurent_expansion, regularity, series_from_report, Functor,
};
use lcdecomp::oracle::compare;
use lcdecomp::roos::limit_check;
use lcdecomp::{Error, Poset};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The problem description was rejected.
    InputError = 3,
    /// The computation was refused for this input.
    ComputationError = 4,
    /// An internal error; the handle should not be reused.
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcFunctor {
    Hochster = 0,
    Terai = 1,
}

/// A parsed problem together with its poset of sums.
pub struct LcProblem {
    spec: ProblemSpec,
    poset: Poset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> LcStatus {
    if e.is_input_error() {
        LcStatus::InputError
    } else {
        LcStatus::ComputationError
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (LcStatus, String)>) -> LcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            LcStatus::Panic
        }
    }
}

fn fail(e: Error) -> (LcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (LcStatus, String) {
    (LcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(p: *const LcProblem) -> Result<&'a LcProblem, (LcStatus, String)> {
    p.as_ref().ok_or_else(|| null("problem"))
}

unsafe fn write_json<T: serde::Serialize>(out: *mut *mut c_char, value: &T) -> Result<(), (LcStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = serde_json::to_string(value).map_err(|e| (LcStatus::Panic, e.to_string()))?;
    *out = CString::new(s).expect("JSON has no NUL").into_raw();
    Ok(())
}

/// Parses a problem description (the JSON accepted by the command-line
/// tool) and builds its poset. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lc_problem_from_json(json: *const c_char, out: *mut *mut LcProblem) -> LcStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| (LcStatus::InvalidUtf8, e.to_string()))?;
        let spec = ProblemSpec::parse(text).map_err(fail)?;
        let poset = spec.poset().map_err(fail)?;
        *out = Box::into_raw(Box::new(LcProblem { spec, poset }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `problem` must come from [`lc_problem_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn lc_problem_free(problem: *mut LcProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of elements of the poset of sums.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lc_problem_element_count(problem: *const LcProblem, out: *mut usize) -> LcStatus {
    guard(|| {
        let p = handle(problem)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = p.poset.len();
        Ok(())
    })
}

/// The poset as JSON, in the layout of `lcdecomp poset --output json`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lc_poset_json(problem: *const LcProblem, out: *mut *mut c_char) -> LcStatus {
    guard(|| write_json(out, &handle(problem)?.poset.to_json()))
}

/// The decomposition report, in the layout of `lcdecomp decompose --output json`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lc_decompose_json(
    problem: *const LcProblem,
    functor: LcFunctor,
    max_degree: u32,
    out: *mut *mut c_char,
) -> LcStatus {
    guard(|| {
        let p = handle(problem)?;
        let kind = match functor {
            LcFunctor::Hochster => Functor::Hochster,
            LcFunctor::Terai => Functor::Terai,
        };
        let report = full_report(&p.poset, p.spec.field, kind, max_degree).map_err(fail)?;
        write_json(out, &report)
    })
}

/// `{"i": .., "series": {e: c}, "laurent": [[degree, coefficient], ...]}`
/// for the Hilbert series of `H^index_m`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lc_hilbert_json(
    problem: *const LcProblem,
    index: i64,
    depth: usize,
    out: *mut *mut c_char,
) -> LcStatus {
    guard(|| {
        let p = handle(problem)?;
        let table = interval_betti_table(&p.poset, p.spec.field);
        let report = decomposition(&table, Functor::Hochster, p.poset.ring().nvars());
        let series = series_from_report(&report, &table, index);
        let laurent = laurent_expansion(&series, depth);
        write_json(out, &HilbertRow { i: index, series, laurent })
    })
}

/// The degree-wise comparison of `A/I` with the limit.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lc_limit_check_json(
    problem: *const LcProblem,
    max_degree: u32,
    out: *mut *mut c_char,
) -> LcStatus {
    guard(|| {
        let p = handle(problem)?;
        write_json(out, &limit_check(&p.poset, max_degree).map_err(fail)?)
    })
}

/// Comparison with the Stanley–Reisner oracle; squarefree monomial input only.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lc_oracle_compare_json(
    problem: *const LcProblem,
    depth: usize,
    out: *mut *mut c_char,
) -> LcStatus {
    guard(|| {
        let p = handle(problem)?;
        write_json(out, &compare(&p.poset, p.spec.field, depth).map_err(fail)?)
    })
}

/// Castelnuovo–Mumford regularity read off the decomposition.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lc_regularity(problem: *const LcProblem, out: *mut i64) -> LcStatus {
    guard(|| {
        let p = handle(problem)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = regularity(&p.poset, p.spec.field).map_err(fail)?;
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn lc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// is valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn lc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
