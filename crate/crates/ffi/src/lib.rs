//! C ABI for strategy evaluation: opaque handles, integer status codes,
//! and a thread-local message for the last failure.
//!
//! Every function is panic-safe: unwinding is caught at the boundary and
//! reported as [`SEQCHSH_STATUS_PANIC`]. The committed header lives at
//! `include/seqchsh.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use seqchsh::catalog::{self, CatalogParams};
use seqchsh::io;
use seqchsh::scenario::{evaluate_strategy, SequentialStrategy};
use seqchsh::{analysis, boundary, Error};

pub const SEQCHSH_STATUS_OK: i32 = 0;
pub const SEQCHSH_STATUS_NULL_ARGUMENT: i32 = 1;
pub const SEQCHSH_STATUS_INVALID_ARGUMENT: i32 = 2;
pub const SEQCHSH_STATUS_SCHEMA: i32 = 3;
pub const SEQCHSH_STATUS_OUT_OF_DOMAIN: i32 = 4;
pub const SEQCHSH_STATUS_NOT_FOUND: i32 = 5;
pub const SEQCHSH_STATUS_NUMERICAL: i32 = 6;
pub const SEQCHSH_STATUS_IO: i32 = 7;
pub const SEQCHSH_STATUS_BUFFER_TOO_SMALL: i32 = 8;
pub const SEQCHSH_STATUS_PANIC: i32 = 9;

/// Opaque validated strategy handle.
pub struct SeqchshStrategy {
    inner: SequentialStrategy,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("no interior nul");
    });
}

fn status_of(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::InvalidInstrument(_) => {
            SEQCHSH_STATUS_INVALID_ARGUMENT
        }
        Error::Schema(_) => SEQCHSH_STATUS_SCHEMA,
        Error::OutOfDomain(_) => SEQCHSH_STATUS_OUT_OF_DOMAIN,
        Error::NotFound(_) => SEQCHSH_STATUS_NOT_FOUND,
        Error::Numerical(_) => SEQCHSH_STATUS_NUMERICAL,
        Error::Io(_) => SEQCHSH_STATUS_IO,
    }
}

fn fail(err: &Error) -> i32 {
    set_last_error(&err.to_string());
    status_of(err)
}

fn guard(body: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic");
            SEQCHSH_STATUS_PANIC
        }
    }
}

/// Copies the message of the most recent failure on this thread into
/// `buffer` as a NUL-terminated string.
///
/// Returns the required buffer size (including the terminator). When
/// `buffer` is null or `capacity` is too small, nothing is written.
///
/// # Safety
///
/// `buffer` must either be null or point to `capacity` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn seqchsh_last_error(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes_with_nul();
        if !buffer.is_null() && capacity >= bytes.len() {
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buffer, bytes.len());
        }
        bytes.len()
    })
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, i32> {
    if ptr.is_null() {
        set_last_error("null string argument");
        return Err(SEQCHSH_STATUS_NULL_ARGUMENT);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error("string argument is not valid UTF-8");
        SEQCHSH_STATUS_INVALID_ARGUMENT
    })
}

fn emit_strategy(strategy: SequentialStrategy, out: *mut *mut SeqchshStrategy) -> i32 {
    let handle = Box::new(SeqchshStrategy { inner: strategy });
    unsafe {
        *out = Box::into_raw(handle);
    }
    SEQCHSH_STATUS_OK
}

/// Parses and validates a strategy document.
///
/// On success writes a handle into `out`; release it with
/// [`seqchsh_strategy_free`].
///
/// # Safety
///
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqchsh_strategy_from_json(
    json: *const c_char,
    out: *mut *mut SeqchshStrategy,
) -> i32 {
    guard(|| {
        if out.is_null() {
            set_last_error("null output pointer");
            return SEQCHSH_STATUS_NULL_ARGUMENT;
        }
        let text = match read_str(json) {
            Ok(text) => text,
            Err(status) => return status,
        };
        match io::parse_strategy(text).and_then(|file| file.to_strategy()) {
            Ok(strategy) => emit_strategy(strategy, out),
            Err(err) => fail(&err),
        }
    })
}

/// Builds a named catalog strategy with its canonical parameters.
///
/// # Safety
///
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqchsh_strategy_from_catalog(
    id: *const c_char,
    out: *mut *mut SeqchshStrategy,
) -> i32 {
    guard(|| {
        if out.is_null() {
            set_last_error("null output pointer");
            return SEQCHSH_STATUS_NULL_ARGUMENT;
        }
        let id = match read_str(id) {
            Ok(id) => id,
            Err(status) => return status,
        };
        match catalog::from_id(id, CatalogParams::default()) {
            Ok(strategy) => emit_strategy(strategy, out),
            Err(err) => fail(&err),
        }
    })
}

/// Releases a strategy handle. Null is a no-op.
///
/// # Safety
///
/// `strategy` must be null or a handle produced by this library that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn seqchsh_strategy_free(strategy: *mut SeqchshStrategy) {
    if !strategy.is_null() {
        drop(Box::from_raw(strategy));
    }
}

/// Writes the number of sequential CHSH pairs into `out`.
///
/// # Safety
///
/// `strategy` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqchsh_strategy_pair_count(
    strategy: *const SeqchshStrategy,
    out: *mut usize,
) -> i32 {
    guard(|| {
        if strategy.is_null() || out.is_null() {
            set_last_error("null argument");
            return SEQCHSH_STATUS_NULL_ARGUMENT;
        }
        *out = (*strategy).inner.pair_count();
        SEQCHSH_STATUS_OK
    })
}

/// Evaluates the strategy and writes its pair values into `values`.
///
/// `capacity` is the length of `values`; `written` receives the number of
/// pairs. Fails with [`SEQCHSH_STATUS_BUFFER_TOO_SMALL`] if the buffer
/// cannot hold them.
///
/// # Safety
///
/// `strategy` must be a live handle, `values` must point to `capacity`
/// writable doubles, and `written` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqchsh_strategy_evaluate(
    strategy: *const SeqchshStrategy,
    values: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> i32 {
    guard(|| {
        if strategy.is_null() || values.is_null() || written.is_null() {
            set_last_error("null argument");
            return SEQCHSH_STATUS_NULL_ARGUMENT;
        }
        let point = match evaluate_strategy(&(*strategy).inner) {
            Ok(point) => point,
            Err(err) => return fail(&err),
        };
        let s = point.values();
        if capacity < s.len() {
            set_last_error("value buffer is too small");
            return SEQCHSH_STATUS_BUFFER_TOO_SMALL;
        }
        ptr::copy_nonoverlapping(s.as_ptr(), values, s.len());
        *written = s.len();
        SEQCHSH_STATUS_OK
    })
}

/// Writes the optimal S2 bound at `s1` for the maximally entangled state
/// into `out`.
///
/// # Safety
///
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqchsh_boundary_value(s1: f64, out: *mut f64) -> i32 {
    guard(|| {
        if out.is_null() {
            set_last_error("null output pointer");
            return SEQCHSH_STATUS_NULL_ARGUMENT;
        }
        match boundary::optimal_boundary().value(s1) {
            Ok(s2) => {
                *out = s2;
                SEQCHSH_STATUS_OK
            }
            Err(err) => fail(&err),
        }
    })
}

/// Writes the isotropic-noise visibility above which every pair value of
/// `strategy` exceeds `target`.
///
/// # Safety
///
/// `strategy` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqchsh_visibility_threshold(
    strategy: *const SeqchshStrategy,
    target: f64,
    out: *mut f64,
) -> i32 {
    guard(|| {
        if strategy.is_null() || out.is_null() {
            set_last_error("null argument");
            return SEQCHSH_STATUS_NULL_ARGUMENT;
        }
        match analysis::visibility_threshold(&(*strategy).inner, target) {
            Ok(v) => {
                *out = v;
                SEQCHSH_STATUS_OK
            }
            Err(err) => fail(&err),
        }
    })
}
