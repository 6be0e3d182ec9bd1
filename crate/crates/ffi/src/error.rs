use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use haarwell::Error;

/// Result code of every fallible `hw_*` call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HwStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    /// A size cap of the engine was exceeded.
    CapExceeded = 5,
    /// Evaluation at a pole, or a singular system.
    Pole = 6,
    Unsupported = 7,
    Io = 8,
    /// A Rust panic was caught at the boundary.
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

pub(crate) fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Message of the last failed call on this thread, or null.
///
/// The pointer stays valid until the next `hw_*` call on the same thread.
#[no_mangle]
pub extern "C" fn hw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

pub(crate) fn status_of(e: &Error) -> HwStatus {
    match e {
        Error::Parse(_) => HwStatus::Parse,
        Error::CapExceeded { .. } => HwStatus::CapExceeded,
        Error::Pole { .. } | Error::DivisionByZero | Error::Singular { .. } => HwStatus::Pole,
        Error::Unsupported(_) => HwStatus::Unsupported,
        Error::Io(_) | Error::Cache(_) => HwStatus::Io,
        Error::InvalidArgument(_) | Error::SizeMismatch(_) | Error::NotSymmetric => HwStatus::InvalidArgument,
    }
}

/// Failure inside an FFI body.
pub(crate) struct Failure(pub HwStatus, pub String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `body`, records any error or panic message, and maps the outcome to
/// a status code.
pub(crate) fn guard<F>(body: F) -> HwStatus
where
    F: FnOnce() -> Result<(), Failure> + UnwindSafe,
{
    clear_last_error();
    match catch_unwind(body) {
        Ok(Ok(())) => HwStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {message}"));
            HwStatus::Panic
        }
    }
}

/// Borrow a required C string.
///
/// # Safety
/// `ptr` must be null or point to a nul-terminated string.
pub(crate) unsafe fn required_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(Failure(HwStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(HwStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// Borrow an optional C string; null maps to `None`.
///
/// # Safety
/// As for [`required_str`].
pub(crate) unsafe fn optional_str<'a>(ptr: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if ptr.is_null() {
        Ok(None)
    } else {
        required_str(ptr, what).map(Some)
    }
}

pub(crate) fn check_out<T>(ptr: *mut T, what: &str) -> Result<(), Failure> {
    if ptr.is_null() {
        Err(Failure(HwStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

pub(crate) fn into_c_string(text: String) -> *mut c_char {
    CString::new(text.replace('\0', " ")).expect("interior nul removed").into_raw()
}
