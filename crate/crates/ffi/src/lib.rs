//! C ABI over `satscheme`.
//!
//! Schemes live behind an opaque `SatScheme` handle. Every fallible function
//! returns a [`SatStatus`]; on failure a message is available from
//! [`satscheme_last_error`] until the next failing call on the same thread.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with [`satscheme_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use satscheme::checks::{run_all, VerdictKind};
use satscheme::counting::count_solutions;
use satscheme::format::{read_scheme, TautologyPolicy};
use satscheme::minimizer::{minimize_u, MinimizeOptions};
use satscheme::pseudo_boolean::{pb_coefficients, Style, WeightScheme};
use satscheme::{fixtures, Assignment, Scheme};

/// Opaque scheme handle.
pub struct SatScheme {
    inner: Scheme,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Limit = 5,
    Internal = 6,
}

/// `satscheme_check_all` verdicts, matching the CLI exit codes.
pub const SATSCHEME_INCONCLUSIVE: i32 = 0;
pub const SATSCHEME_SAT: i32 = 10;
pub const SATSCHEME_UNSAT: i32 = 20;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: SatStatus, msg: impl std::fmt::Display) -> SatStatus {
    let c = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
    status
}

fn guard(f: impl FnOnce() -> SatStatus) -> SatStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(SatStatus::Internal, "panic inside satscheme"))
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, SatStatus> {
    if p.is_null() {
        return Err(fail(SatStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(SatStatus::InvalidUtf8, e))
}

unsafe fn handle<'a>(h: *const SatScheme) -> Result<&'a Scheme, SatStatus> {
    h.as_ref().map(|s| &s.inner).ok_or_else(|| fail(SatStatus::NullPointer, "null scheme handle"))
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> SatStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            SatStatus::Ok
        }
        Err(e) => fail(SatStatus::Internal, e),
    }
}

unsafe fn give_handle(out: *mut *mut SatScheme, s: Scheme) -> SatStatus {
    *out = Box::into_raw(Box::new(SatScheme { inner: s }));
    SatStatus::Ok
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Parses DIMACS, scheme text or JSON (auto-detected). Tautological clauses
/// are rejected when `drop_tautologies` is false.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satscheme_parse(text: *const c_char, drop_tautologies: bool, out: *mut *mut SatScheme) -> SatStatus {
    guard(|| {
        if out.is_null() {
            return fail(SatStatus::NullPointer, "null out pointer");
        }
        let text = try_status!(str_arg(text));
        let policy = if drop_tautologies { TautologyPolicy::Drop } else { TautologyPolicy::Reject };
        match read_scheme(text, policy) {
            Ok(s) => give_handle(out, s),
            Err(e) => fail(SatStatus::Parse, e),
        }
    })
}

/// Loads a built-in formula: `F4`, `F5`, `G` or `Gext`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satscheme_fixture(name: *const c_char, out: *mut *mut SatScheme) -> SatStatus {
    guard(|| {
        if out.is_null() {
            return fail(SatStatus::NullPointer, "null out pointer");
        }
        let name = try_status!(str_arg(name));
        match fixtures::by_name(name) {
            Some(s) => give_handle(out, s),
            None => fail(SatStatus::InvalidArgument, format!("unknown fixture {name:?}")),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn satscheme_free(h: *mut SatScheme) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn satscheme_num_vars(h: *const SatScheme) -> usize {
    h.as_ref().map_or(0, |s| s.inner.n())
}

/// Number of clauses, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn satscheme_num_clauses(h: *const SatScheme) -> usize {
    h.as_ref().map_or(0, |s| s.inner.m())
}

/// Evaluates the formula at `signs[0..len]`, each `+1` (true) or `-1`.
///
/// # Safety
/// `signs` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satscheme_evaluate(h: *const SatScheme, signs: *const i8, len: usize, out: *mut bool) -> SatStatus {
    guard(|| {
        let s = try_status!(handle(h));
        if out.is_null() || (signs.is_null() && len > 0) {
            return fail(SatStatus::NullPointer, "null pointer argument");
        }
        let v = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(signs, len).to_vec() };
        let x = match Assignment::from_signs(v) {
            Ok(x) => x,
            Err(e) => return fail(SatStatus::InvalidArgument, e),
        };
        match s.evaluate(&x) {
            Ok(b) => {
                *out = b;
                SatStatus::Ok
            }
            Err(e) => fail(SatStatus::InvalidArgument, e),
        }
    })
}

/// Exact model count as a decimal string.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satscheme_count(h: *const SatScheme, out: *mut *mut c_char) -> SatStatus {
    guard(|| {
        let s = try_status!(handle(h));
        if out.is_null() {
            return fail(SatStatus::NullPointer, "null out pointer");
        }
        match count_solutions(s) {
            Ok(r) => give_string(out, r.total.to_string()),
            Err(e) => fail(SatStatus::Limit, e),
        }
    })
}

/// Runs every check. `verdict` receives 10 (SAT), 20 (UNSAT) or 0; `report`,
/// if not null, receives the JSON report.
///
/// # Safety
/// `h` must be a live handle; `verdict` must be writable; `report` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn satscheme_check_all(h: *const SatScheme, verdict: *mut i32, report: *mut *mut c_char) -> SatStatus {
    guard(|| {
        let s = try_status!(handle(h));
        if verdict.is_null() {
            return fail(SatStatus::NullPointer, "null out pointer");
        }
        let r = match run_all(s) {
            Ok(r) => r,
            Err(e) => return fail(SatStatus::Internal, e),
        };
        *verdict = match r.overall {
            VerdictKind::SatCertified => SATSCHEME_SAT,
            VerdictKind::UnsatCertified => SATSCHEME_UNSAT,
            VerdictKind::Inconclusive => SATSCHEME_INCONCLUSIVE,
        };
        if report.is_null() {
            return SatStatus::Ok;
        }
        match serde_json::to_string(&r) {
            Ok(j) => give_string(report, j),
            Err(e) => fail(SatStatus::Internal, e),
        }
    })
}

/// Minimum number of violated clauses. If `minimizer` is not null it must
/// hold `len == satscheme_num_vars(h)` bytes and receives the signs of a
/// minimizing assignment.
///
/// # Safety
/// `h` must be a live handle; `u_min` writable; `minimizer` null or `len`
/// writable bytes.
#[no_mangle]
pub unsafe extern "C" fn satscheme_minimize(h: *const SatScheme, u_min: *mut u64, minimizer: *mut i8, len: usize) -> SatStatus {
    guard(|| {
        let s = try_status!(handle(h));
        if u_min.is_null() {
            return fail(SatStatus::NullPointer, "null out pointer");
        }
        if !minimizer.is_null() && len != s.n() {
            return fail(SatStatus::InvalidArgument, format!("minimizer buffer has {len} entries, need {}", s.n()));
        }
        let o = match minimize_u(s, None, &MinimizeOptions::default()) {
            Ok(o) => o,
            Err(e) => return fail(SatStatus::Limit, e),
        };
        *u_min = o.u_min.to_integer().and_then(|v| u64::try_from(v).ok()).unwrap_or(u64::MAX);
        if !minimizer.is_null() {
            std::slice::from_raw_parts_mut(minimizer, len).copy_from_slice(o.minimizer.signs());
        }
        SatStatus::Ok
    })
}

/// The canonical-weight polynomial, e.g. `8u = 12 + x1 - 2x2 ...`, in ASCII
/// or (when `unicode`) with subscripts and minus signs.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn satscheme_pbform(h: *const SatScheme, unicode: bool, out: *mut *mut c_char) -> SatStatus {
    guard(|| {
        let s = try_status!(handle(h));
        if out.is_null() {
            return fail(SatStatus::NullPointer, "null out pointer");
        }
        match pb_coefficients(s, &WeightScheme::Canonical) {
            Ok(p) => give_string(out, p.render(if unicode { Style::Unicode } else { Style::Ascii })),
            Err(e) => fail(SatStatus::InvalidArgument, e),
        }
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the thread.
#[no_mangle]
pub extern "C" fn satscheme_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn satscheme_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
