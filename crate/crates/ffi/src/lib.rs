//! C ABI over the `nonclassical` crate.
//!
//! States live behind an opaque `nc_state_t` handle. Every call returns an
//! `nc_status_t`; on failure `nc_last_error_message` holds a description for
//! the calling thread. Panics never cross the boundary.

#![allow(non_camel_case_types)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nonclassical::states::{self, DetectorSpec, StateSpec, SupParams};
use nonclassical::witnesses::{Criterion, Note};
use nonclassical::{required_order, Backend, Error, Evaluator};
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum nc_status_t {
    NC_OK = 0,
    NC_INVALID_ARGUMENT = 1,
    NC_DEGENERATE = 2,
    NC_UNDEFINED = 3,
    NC_NUMERICAL = 4,
    NC_NULL_POINTER = 5,
    NC_PANIC = 6,
}

pub const NC_BACKEND_CLOSED: u32 = 0;
pub const NC_BACKEND_ORACLE: u32 = 1;

pub const NC_CRITERION_MANDEL_Q: u32 = 0;
pub const NC_CRITERION_HOA: u32 = 1;
pub const NC_CRITERION_HOSPS: u32 = 2;
pub const NC_CRITERION_HOS: u32 = 3;
pub const NC_CRITERION_AGARWAL_TARA: u32 = 4;
pub const NC_CRITERION_KLYSHKO: u32 = 5;
pub const NC_CRITERION_HUSIMI: u32 = 6;

/// Outcome of one witness evaluation.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct nc_witness_t {
    pub value: f64,
    /// Negative value, or a located zero for the Husimi criterion.
    pub nonclassical: bool,
    /// Set when the Agarwal-Tara value sits on its pole; `nonclassical` is
    /// then meaningless.
    pub singular: bool,
}

/// Opaque state handle.
pub struct nc_state_t {
    spec: StateSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> nc_status_t {
    match err {
        Error::InvalidArgument(_) | Error::SizeLimit { .. } | Error::OrderLimit { .. } => {
            nc_status_t::NC_INVALID_ARGUMENT
        }
        Error::DegenerateState(_) | Error::DegenerateDenominator(_) => nc_status_t::NC_DEGENERATE,
        Error::UndefinedWitness(_) => nc_status_t::NC_UNDEFINED,
        _ => nc_status_t::NC_NUMERICAL,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard<F>(f: F) -> nc_status_t
where
    F: FnOnce() -> Result<(), nc_status_t>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => nc_status_t::NC_OK,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            nc_status_t::NC_PANIC
        }
    }
}

fn fail(err: Error) -> nc_status_t {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn null(what: &str) -> nc_status_t {
    set_error(format!("null pointer: {what}"));
    nc_status_t::NC_NULL_POINTER
}

fn invalid(msg: String) -> nc_status_t {
    set_error(msg);
    nc_status_t::NC_INVALID_ARGUMENT
}

fn backend(code: u32) -> Result<Backend, nc_status_t> {
    match code {
        NC_BACKEND_CLOSED => Ok(Backend::Closed),
        NC_BACKEND_ORACLE => Ok(Backend::Oracle),
        other => Err(invalid(format!("unknown backend {other}"))),
    }
}

fn criterion(code: u32) -> Result<Criterion, nc_status_t> {
    Criterion::ALL
        .get(code as usize)
        .copied()
        .ok_or_else(|| invalid(format!("unknown criterion {code}")))
}

fn make_state(spec: Result<StateSpec, Error>, out: *mut *mut nc_state_t) -> nc_status_t {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = spec.map_err(fail)?;
        // reject degenerate inputs up front
        spec.normalization().map_err(fail)?;
        let handle = Box::new(nc_state_t { spec });
        unsafe { *out = Box::into_raw(handle) };
        Ok(())
    })
}

/// Creates a SUP-operated coherent state `D(η) (s a a† + t a† a) |α⟩`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_state_socs_new(
    s: f64,
    t: f64,
    alpha_re: f64,
    alpha_im: f64,
    eta: f64,
    out: *mut *mut nc_state_t,
) -> nc_status_t {
    let spec = SupParams::new(s, t).and_then(|sup| {
        Ok(StateSpec::socs(sup, Complex64::new(alpha_re, alpha_im))?.with_detector(DetectorSpec::new(eta)?))
    });
    make_state(spec, out)
}

/// Creates a SUP-operated thermal state with mean photon number `nbar`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_state_sots_new(
    s: f64,
    t: f64,
    nbar: f64,
    eta: f64,
    out: *mut *mut nc_state_t,
) -> nc_status_t {
    let spec = SupParams::new(s, t)
        .and_then(|sup| Ok(StateSpec::sots(sup, nbar)?.with_detector(DetectorSpec::new(eta)?)));
    make_state(spec, out)
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `state` must come from a constructor above and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nc_state_free(state: *mut nc_state_t) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

unsafe fn state_ref<'a>(state: *const nc_state_t) -> Result<&'a nc_state_t, nc_status_t> {
    state.as_ref().ok_or_else(|| null("state"))
}

/// `⟨a†^m a^n⟩`.
///
/// # Safety
/// `state` must be a live handle; `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_state_moment(
    state: *const nc_state_t,
    m: u32,
    n: u32,
    backend_code: u32,
    out_re: *mut f64,
    out_im: *mut f64,
) -> nc_status_t {
    guard(|| {
        let st = state_ref(state)?;
        if out_re.is_null() || out_im.is_null() {
            return Err(null("out"));
        }
        let b = backend(backend_code)?;
        let order = m.max(n) as usize;
        let ev = Evaluator::new(&st.spec, b, order).map_err(fail)?;
        let z = ev.provider().moment(m as usize, n as usize).map_err(fail)?;
        *out_re = z.re;
        *out_im = z.im;
        Ok(())
    })
}

/// Photon-number probability `p_m` from the closed form.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_state_photon_probability(
    state: *const nc_state_t,
    m: u32,
    out: *mut f64,
) -> nc_status_t {
    guard(|| {
        let st = state_ref(state)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = states::photon_probability(&st.spec, m as usize).map_err(fail)?;
        Ok(())
    })
}

/// Evaluates one criterion; `order` is `l` for moment criteria and `m` for
/// Klyshko, and is ignored for Agarwal-Tara and Husimi.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_state_witness(
    state: *const nc_state_t,
    criterion_code: u32,
    order: u32,
    backend_code: u32,
    out: *mut nc_witness_t,
) -> nc_status_t {
    guard(|| {
        let st = state_ref(state)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = criterion(criterion_code)?;
        let b = backend(backend_code)?;
        let ev = Evaluator::new(&st.spec, b, required_order(c, order as usize)).map_err(fail)?;
        let r = ev.evaluate(c, order as usize).map_err(fail)?;
        *out = nc_witness_t {
            value: r.value,
            nonclassical: r.nonclassical,
            singular: r.note == Some(Note::Singular),
        };
        Ok(())
    })
}

/// Husimi function `Q(β)` from the closed form.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_state_husimi(
    state: *const nc_state_t,
    beta_re: f64,
    beta_im: f64,
    out: *mut f64,
) -> nc_status_t {
    guard(|| {
        let st = state_ref(state)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = states::husimi(&st.spec, Complex64::new(beta_re, beta_im)).map_err(fail)?;
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn nc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
