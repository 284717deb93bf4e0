//! C ABI over the lck library: opaque handles, integer status codes, and
//! UTF-8 JSON strings. Every entry point catches panics, never unwinds
//! across the boundary, and records a thread-local error message
//! retrievable with `lck_last_error`.
//!
//! Memory contract: handles are freed with `lck_algebra_free`; every
//! `char*` the library returns is freed with `lck_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lck::analysis::structural_theorem_suite;
use lck::construct::{classify_dim4, Dim4Class};
use lck::doc::{render_report_json, AlgebraDocument, TripleDocument};
use lck::error::Error;
use lck::hermitian::HermitianStructure;
use lck::lie::LieAlgebra;
use lck::scalar::{render_scalar, Rat};
use lck::verify::run_suite;

/// The call succeeded.
pub const LCK_STATUS_OK: i32 = 0;
/// The input failed to parse (malformed document or rational string).
pub const LCK_STATUS_PARSE_ERROR: i32 = 2;
/// The input parsed but violates a mathematical invariant.
pub const LCK_STATUS_INVARIANT_ERROR: i32 = 3;
/// A required pointer argument was null.
pub const LCK_STATUS_NULL_ARGUMENT: i32 = 4;
/// An internal panic was caught at the boundary.
pub const LCK_STATUS_PANIC: i32 = 5;

/// Opaque handle to a validated metric Lie algebra with a complex structure.
pub struct LckAlgebra {
    alg: LieAlgebra<Rat>,
    herm: HermitianStructure<Rat>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn clear_last_error() {
    set_last_error("");
}

fn status_of(e: &Error) -> i32 {
    set_last_error(e.to_string());
    if e.is_parse_error() {
        LCK_STATUS_PARSE_ERROR
    } else {
        LCK_STATUS_INVARIANT_ERROR
    }
}

fn guarded(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_last_error("internal panic caught at the C boundary");
            LCK_STATUS_PANIC
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn read_c_str<'a>(ptr: *const c_char) -> Result<&'a str, i32> {
    if ptr.is_null() {
        set_last_error("null string argument");
        return Err(LCK_STATUS_NULL_ARGUMENT);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_last_error("string argument is not valid UTF-8");
        LCK_STATUS_PARSE_ERROR
    })
}

fn give_string(out: *mut *mut c_char, text: &str) -> i32 {
    let c = CString::new(text.replace('\0', " ")).expect("interior NULs removed");
    unsafe { *out = c.into_raw() };
    LCK_STATUS_OK
}

/// Parse and validate an algebra document (JSON, the same format the CLI
/// reads); on success stores a handle in `out`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lck_algebra_from_json(
    json: *const c_char,
    out: *mut *mut LckAlgebra,
) -> i32 {
    guarded(|| {
        if out.is_null() {
            set_last_error("null output pointer");
            return LCK_STATUS_NULL_ARGUMENT;
        }
        let text = match unsafe { read_c_str(json) } {
            Ok(t) => t,
            Err(code) => return code,
        };
        let parsed = AlgebraDocument::from_json_str(text).and_then(|doc| doc.instantiate::<Rat>());
        match parsed {
            Ok((alg, herm)) => {
                clear_last_error();
                unsafe { *out = Box::into_raw(Box::new(LckAlgebra { alg, herm })) };
                LCK_STATUS_OK
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a handle returned by `lck_algebra_from_json`. Null is a no-op.
///
/// # Safety
/// `handle` must be null or a pointer previously returned by this library
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lck_algebra_free(handle: *mut LckAlgebra) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Dimension of the algebra behind `handle`, or -1 if `handle` is null.
///
/// # Safety
/// `handle` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn lck_algebra_dim(handle: *const LckAlgebra) -> i32 {
    if handle.is_null() {
        return -1;
    }
    unsafe { &*handle }.alg.dim() as i32
}

/// Run the full structure analysis and store the report as a JSON string
/// in `out` (free it with `lck_string_free`).
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lck_algebra_report_json(
    handle: *const LckAlgebra,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            set_last_error("null argument");
            return LCK_STATUS_NULL_ARGUMENT;
        }
        let h = unsafe { &*handle };
        match structural_theorem_suite(&h.alg, &h.herm) {
            Ok(report) => {
                clear_last_error();
                let value = render_report_json(&report);
                give_string(out, &value.to_string())
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Classify a 4-dimensional triple document (JSON). On success stores the
/// verdict (`"D4"` or `"gb b=<rational>"`) in `out`.
///
/// # Safety
/// `triple_json` must be a valid NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn lck_classify4_json(
    triple_json: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        if out.is_null() {
            set_last_error("null output pointer");
            return LCK_STATUS_NULL_ARGUMENT;
        }
        let text = match unsafe { read_c_str(triple_json) } {
            Ok(t) => t,
            Err(code) => return code,
        };
        let verdict = TripleDocument::from_json_str(text)
            .and_then(|doc| doc.instantiate::<Rat>())
            .and_then(|t| classify_dim4(&t));
        match verdict {
            Ok(v) => {
                clear_last_error();
                let label = match v.class {
                    Dim4Class::D4 => "D4".to_string(),
                    Dim4Class::FamilyGb(b) => format!("gb b={}", render_scalar(&b)),
                };
                give_string(out, &label)
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Run the built-in verification suite (all sections when `section` is
/// null, otherwise one of "section2" … "section7"). The rendered
/// one-line-per-check report is stored in `out`; the status is OK exactly
/// when every check passed.
///
/// # Safety
/// `section` must be null or a valid NUL-terminated string; `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lck_verify_paper(section: *const c_char, out: *mut *mut c_char) -> i32 {
    guarded(|| {
        if out.is_null() {
            set_last_error("null output pointer");
            return LCK_STATUS_NULL_ARGUMENT;
        }
        let only = if section.is_null() {
            None
        } else {
            match unsafe { read_c_str(section) } {
                Ok(t) => Some(t),
                Err(code) => return code,
            }
        };
        match run_suite::<Rat>(only) {
            Ok(report) => {
                let code = if report.passed() {
                    clear_last_error();
                    LCK_STATUS_OK
                } else {
                    let first = report
                        .first_failure()
                        .map(|c| c.name.clone())
                        .unwrap_or_default();
                    set_last_error(format!("first failing check: {first}"));
                    LCK_STATUS_INVARIANT_ERROR
                };
                let render_code = give_string(out, &report.render());
                if render_code == LCK_STATUS_OK {
                    code
                } else {
                    render_code
                }
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Return a copy of the error message from the most recent failing call on
/// this thread (empty string if the last call succeeded). Free it with
/// `lck_string_free`.
#[no_mangle]
pub extern "C" fn lck_last_error() -> *mut c_char {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    CString::new(msg.replace('\0', " "))
        .expect("interior NULs removed")
        .into_raw()
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string previously returned by this library and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
