//! C ABI for the welfare-equalizing solver.
//!
//! Handles are opaque heap pointers created and released by this
//! library; every fallible call returns a [`WfStatus`] and stores a
//! human-readable message retrievable with [`wf_last_error_message`].
//! All functions are null-safe: a null required pointer yields
//! `WF_STATUS_NULL_POINTER` instead of undefined behavior.
//!
//! The generated C header lives at `include/wefair.h` and is refreshed
//! on every build.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fmt::Display;

use wefair::concepts::UtilityTable;
use wefair::error::Error;
use wefair::io;
use wefair::population::Population;
use wefair::solver::{solve_unconstrained, solve_we, solve_we_bisection, WeSolveResult};

/// Outcome of a C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WfStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input bytes could not be read or decoded.
    Parse = 3,
    /// Well-formed input failed semantic validation.
    Validation = 4,
    /// The solver could not produce a solution for this instance.
    Solve = 5,
    /// A numeric argument was out of range.
    InvalidArgument = 6,
}

/// A validated population behind an opaque handle.
pub struct WfPopulation {
    inner: Population,
}

/// A per-cell utility table behind an opaque handle.
pub struct WfUtility {
    inner: UtilityTable,
}

/// A solve result behind an opaque handle.
pub struct WfResult {
    inner: WeSolveResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Display) {
    let text = message.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(text).expect("NUL bytes stripped"));
    });
}

fn status_of(err: &Error) -> WfStatus {
    if err.is_parse() {
        WfStatus::Parse
    } else if matches!(err, Error::BracketNotFound { .. }) {
        WfStatus::Solve
    } else {
        WfStatus::Validation
    }
}

fn fail(err: Error) -> WfStatus {
    let status = status_of(&err);
    set_error(err);
    status
}

fn null_pointer(what: &str) -> WfStatus {
    set_error(format!("{what} must not be null"));
    WfStatus::NullPointer
}

/// Reads a C string argument, reporting null and encoding failures.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, WfStatus> {
    if ptr.is_null() {
        return Err(null_pointer(what));
    }
    CStr::from_ptr(ptr).to_str().map_err(|e| {
        set_error(format!("{what} is not valid UTF-8: {e}"));
        WfStatus::InvalidUtf8
    })
}

/// Message of the most recent failure on this thread, or null if no
/// call has failed yet.
///
/// The pointer stays valid until the next failing call on the same
/// thread; do not free it.
#[no_mangle]
pub extern "C" fn wf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// Parses and validates a population from JSON
/// (`{"cells": [{x, a, mass, p, alpha_plus, alpha_minus}, ...]}`).
///
/// On success writes a new handle to `out`; release it with
/// [`wf_population_free`].
///
/// # Safety
///
/// `json` must be null or point to a NUL-terminated string; `out` must
/// be null or point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_population_parse_json(
    json: *const c_char,
    out: *mut *mut WfPopulation,
) -> WfStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let text = match read_str(json, "json") {
        Ok(text) => text,
        Err(status) => return status,
    };
    match io::parse_population_json(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(WfPopulation { inner }));
            WfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Number of cells in the population.
///
/// # Safety
///
/// `pop` must be null or a live handle from this library; `out` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn wf_population_cell_count(
    pop: *const WfPopulation,
    out: *mut usize,
) -> WfStatus {
    if pop.is_null() {
        return null_pointer("pop");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    *out = (*pop).inner.cells().len();
    WfStatus::Ok
}

/// Releases a population handle; null is ignored.
///
/// # Safety
///
/// `pop` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wf_population_free(pop: *mut WfPopulation) {
    if !pop.is_null() {
        drop(Box::from_raw(pop));
    }
}

/// Builds a utility table from a concept JSON document (kinds:
/// demographic_parity, equal_opportunity, equalized_odds_member,
/// heterogeneous_eo, custom).
///
/// On success writes a new handle to `out`; release it with
/// [`wf_utility_free`].
///
/// # Safety
///
/// `pop` must be null or a live handle; `json` null or NUL-terminated;
/// `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn wf_utility_from_concept_json(
    pop: *const WfPopulation,
    json: *const c_char,
    out: *mut *mut WfUtility,
) -> WfStatus {
    if pop.is_null() {
        return null_pointer("pop");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    let text = match read_str(json, "json") {
        Ok(text) => text,
        Err(status) => return status,
    };
    let spec = match io::parse_concept_json(text) {
        Ok(spec) => spec,
        Err(e) => return fail(e),
    };
    match wefair::concepts::make_utility(&spec, &(*pop).inner) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(WfUtility { inner }));
            WfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Releases a utility handle; null is ignored.
///
/// # Safety
///
/// `u` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wf_utility_free(u: *mut WfUtility) {
    if !u.is_null() {
        drop(Box::from_raw(u));
    }
}

/// Expected revenue of the unconstrained optimum.
///
/// # Safety
///
/// `pop` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn wf_unconstrained_revenue(
    pop: *const WfPopulation,
    out: *mut f64,
) -> WfStatus {
    if pop.is_null() {
        return null_pointer("pop");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    *out = solve_unconstrained(&(*pop).inner).revenue;
    WfStatus::Ok
}

/// Solves for the revenue-optimal welfare-equalizing classifier with
/// the exact curve algorithm.
///
/// On success writes a new handle to `out`; release it with
/// [`wf_result_free`].
///
/// # Safety
///
/// `pop` and `u` must be null or live handles; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn wf_solve_we(
    pop: *const WfPopulation,
    u: *const WfUtility,
    out: *mut *mut WfResult,
) -> WfStatus {
    if pop.is_null() {
        return null_pointer("pop");
    }
    if u.is_null() {
        return null_pointer("u");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    match solve_we(&(*pop).inner, &(*u).inner) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(WfResult { inner }));
            WfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Solves with the bisection algorithm; `tol` is the multiplier
/// bracket width and must be a positive finite number.
///
/// # Safety
///
/// `pop` and `u` must be null or live handles; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn wf_solve_we_bisection(
    pop: *const WfPopulation,
    u: *const WfUtility,
    tol: f64,
    out: *mut *mut WfResult,
) -> WfStatus {
    if pop.is_null() {
        return null_pointer("pop");
    }
    if u.is_null() {
        return null_pointer("u");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    if !(tol.is_finite() && tol > 0.0) {
        set_error(format!("tol must be positive and finite, got {tol}"));
        return WfStatus::InvalidArgument;
    }
    match solve_we_bisection(&(*pop).inner, &(*u).inner, tol) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(WfResult { inner }));
            WfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

unsafe fn result_field(
    res: *const WfResult,
    out: *mut f64,
    read: impl FnOnce(&WeSolveResult) -> f64,
) -> WfStatus {
    if res.is_null() {
        return null_pointer("res");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    *out = read(&(*res).inner);
    WfStatus::Ok
}

/// Expected revenue of the solution.
///
/// # Safety
///
/// `res` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn wf_result_revenue(res: *const WfResult, out: *mut f64) -> WfStatus {
    result_field(res, out, |r| r.revenue)
}

/// Common welfare level of the solution.
///
/// # Safety
///
/// `res` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn wf_result_w_star(res: *const WfResult, out: *mut f64) -> WfStatus {
    result_field(res, out, |r| r.w_star)
}

/// Writes the two realized group welfares to `out[0]` and `out[1]`.
///
/// # Safety
///
/// `res` must be null or a live handle; `out` null or writable for two
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn wf_result_welfare(res: *const WfResult, out: *mut f64) -> WfStatus {
    if res.is_null() {
        return null_pointer("res");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    let welfare = (*res).inner.welfare;
    std::ptr::copy_nonoverlapping(welfare.as_ptr(), out, 2);
    WfStatus::Ok
}

/// Writes the two per-group threshold multipliers to `out[0]` and
/// `out[1]`.
///
/// # Safety
///
/// `res` must be null or a live handle; `out` null or writable for two
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn wf_result_lambda(res: *const WfResult, out: *mut f64) -> WfStatus {
    if res.is_null() {
        return null_pointer("res");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    let lambda = (*res).inner.lambda;
    std::ptr::copy_nonoverlapping(lambda.as_ptr(), out, 2);
    WfStatus::Ok
}

/// Serializes the full solution (revenue, w_star, welfare, lambda,
/// classifier, tie cells, algorithm) as pretty JSON.
///
/// On success writes a NUL-terminated string to `out`; release it with
/// [`wf_string_free`].
///
/// # Safety
///
/// `res` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn wf_result_to_json(
    res: *const WfResult,
    out: *mut *mut c_char,
) -> WfStatus {
    if res.is_null() {
        return null_pointer("res");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    let text = match io::to_json_string(&(*res).inner) {
        Ok(text) => text,
        Err(e) => return fail(e),
    };
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            WfStatus::Ok
        }
        Err(e) => {
            set_error(e);
            WfStatus::Validation
        }
    }
}

/// Releases a result handle; null is ignored.
///
/// # Safety
///
/// `res` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wf_result_free(res: *mut WfResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
///
/// `s` must be null or a string pointer from this library not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn wf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
