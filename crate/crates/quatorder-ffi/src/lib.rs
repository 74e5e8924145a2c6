//! C bindings for the `quatorder` library.
//!
//! Every function returns a status code mirroring the CLI's exit codes
//! (`QO_STATUS_OK` and friends); results come back through out-pointers
//! that are written only on success. Strings handed to the caller are
//! NUL-terminated UTF-8 and must be released with [`qo_string_free`];
//! orders are opaque handles released with [`qo_order_free`]. After any
//! failure, [`qo_last_error_message`] describes what went wrong on the
//! current thread.
//!
//! Rust panics never cross the boundary: they are caught and reported
//! as `QO_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quatorder::report::{info_report, order_to_json, parse_order_json, render_table, TableFormat};
use quatorder::search::classify_all_z;
use quatorder::{Error, Order};

/// The call succeeded.
pub const QO_STATUS_OK: c_int = 0;
/// An internal invariant failed (including a caught panic).
pub const QO_STATUS_INTERNAL: c_int = 1;
/// The input could not be parsed.
pub const QO_STATUS_PARSE: c_int = 2;
/// The input parsed but does not describe a valid object.
pub const QO_STATUS_SEMANTIC: c_int = 3;
/// A documented precondition was violated (including null pointers).
pub const QO_STATUS_PRECONDITION: c_int = 4;

/// An order in a definite quaternion algebra over ℚ.
pub struct QoOrder {
    inner: Order,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message)
        .unwrap_or_else(|_| CString::new("error text contained a NUL byte").expect("literal"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn error_pair(e: Error) -> (c_int, String) {
    (e.exit_code() as c_int, e.to_string())
}

fn panic_text(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        format!("panic: {s}")
    } else if let Some(s) = payload.downcast_ref::<String>() {
        format!("panic: {s}")
    } else {
        "panic of unknown type".into()
    }
}

/// Runs `body`, writes its result through `out` on success, and turns
/// errors and panics into status codes plus a thread-local message.
fn guarded<T>(out: *mut T, body: impl FnOnce() -> Result<T, (c_int, String)>) -> c_int {
    if out.is_null() {
        set_error("output pointer is null".into());
        return QO_STATUS_PRECONDITION;
    }
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            // Safety: the caller promised `out` points at writable storage.
            unsafe { out.write(value) };
            QO_STATUS_OK
        }
        Ok(Err((code, message))) => {
            set_error(message);
            code
        }
        Err(payload) => {
            set_error(panic_text(payload));
            QO_STATUS_INTERNAL
        }
    }
}

/// Safety: `text` must be null or a NUL-terminated pointer.
unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, (c_int, String)> {
    if text.is_null() {
        return Err((QO_STATUS_PRECONDITION, "input pointer is null".into()));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| (QO_STATUS_PARSE, "input is not valid UTF-8".into()))
}

fn into_c_string(text: String) -> Result<*mut c_char, (c_int, String)> {
    CString::new(text)
        .map(CString::into_raw)
        .map_err(|_| (QO_STATUS_INTERNAL, "output contained a NUL byte".into()))
}

/// Parses a JSON order file (the same format the CLI reads) into a new
/// handle, written to `*out` on success. The handle must be released
/// with [`qo_order_free`].
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be null
/// or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn qo_order_parse_json(
    json: *const c_char,
    out: *mut *mut QoOrder,
) -> c_int {
    guarded(out, || {
        let text = read_str(json)?;
        let order = parse_order_json(text).map_err(error_pair)?;
        Ok(Box::into_raw(Box::new(QoOrder { inner: order })))
    })
}

/// Releases a handle returned by [`qo_order_parse_json`]. Null is a
/// no-op.
///
/// # Safety
/// `order` must be null or a pointer previously returned by
/// [`qo_order_parse_json`] that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn qo_order_free(order: *mut QoOrder) {
    if !order.is_null() {
        drop(Box::from_raw(order));
    }
}

/// Writes the order back out as a canonical JSON order file.
///
/// # Safety
/// `order` must be a live handle; `out` must be null or point to
/// writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn qo_order_to_json(order: *const QoOrder, out: *mut *mut c_char) -> c_int {
    guarded(out, || {
        if order.is_null() {
            return Err((QO_STATUS_PRECONDITION, "order handle is null".into()));
        }
        into_c_string(order_to_json(&(*order).inner))
    })
}

/// Writes the full invariant sheet of the order — the same text the
/// `quatorder info` subcommand prints.
///
/// # Safety
/// `order` must be a live handle; `out` must be null or point to
/// writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn qo_order_report(order: *const QoOrder, out: *mut *mut c_char) -> c_int {
    guarded(out, || {
        if order.is_null() {
            return Err((QO_STATUS_PRECONDITION, "order handle is null".into()));
        }
        let report = info_report(&(*order).inner).map_err(error_pair)?;
        into_c_string(report)
    })
}

/// Runs the full classification over ℤ and writes the forty records as
/// JSON lines (one record per line). This recomputes everything and
/// takes a few seconds.
///
/// # Safety
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn qo_classify_json(out: *mut *mut c_char) -> c_int {
    guarded(out, || {
        let records = classify_all_z().map_err(error_pair)?;
        into_c_string(render_table(&records, TableFormat::JsonLines))
    })
}

/// Releases a string returned by any `qo_*` function. Null is a no-op.
///
/// # Safety
/// `text` must be null or a string previously returned by this library
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn qo_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// A description of the most recent failure on the calling thread, or
/// null if there has been none. The pointer stays valid until the next
/// failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn qo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |text| text.as_ptr())
    })
}
