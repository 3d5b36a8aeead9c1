//! C ABI for the demerit-factor moment engine.
//!
//! The surface is deliberately small: create an engine handle, ask it for
//! moments (exact `num/den` strings or fixed-precision decimals), class
//! listings as JSON, and free what you were given. All functions are
//! `extern "C"`; the handle is opaque; results are NUL-terminated UTF-8
//! strings allocated by this library and released with
//! [`dfm_string_free`]. Errors are reported by status code, with the last
//! message retrievable per handle.

use std::ffi::{c_char, c_int, CString};
use std::sync::Mutex;

use dfm::moments;
use dfm::rat::format_rat;

/// Status codes returned by every fallible call.
#[repr(C)]
pub enum DfmStatus {
    Ok = 0,
    /// Computation failed; see `dfm_last_error`.
    Failed = 1,
    /// Invalid argument (order out of range, zero length, null pointer).
    Usage = 2,
}

/// Opaque engine handle. Holds the last error message; classification
/// results are cached process-wide, so handles are cheap.
pub struct DfmEngine {
    last_error: Mutex<Option<CString>>,
}

fn set_error(engine: &DfmEngine, message: String) {
    let mut slot = engine.last_error.lock().unwrap();
    *slot = CString::new(message).ok();
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// Creates an engine handle. Never fails; free with [`dfm_engine_free`].
#[no_mangle]
pub extern "C" fn dfm_engine_new() -> *mut DfmEngine {
    Box::into_raw(Box::new(DfmEngine {
        last_error: Mutex::new(None),
    }))
}

/// Frees an engine handle. A null pointer is ignored.
///
/// # Safety
/// `engine` must have come from [`dfm_engine_new`] and not been freed.
#[no_mangle]
pub unsafe extern "C" fn dfm_engine_free(engine: *mut DfmEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Frees a string returned by this library. A null pointer is ignored.
///
/// # Safety
/// `s` must have been returned by a `dfm_*` function and not been freed.
#[no_mangle]
pub unsafe extern "C" fn dfm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Last error message for this handle, or null. The returned string is
/// owned by the handle; do not free it.
///
/// # Safety
/// `engine` must be a live handle from [`dfm_engine_new`].
#[no_mangle]
pub unsafe extern "C" fn dfm_last_error(engine: *const DfmEngine) -> *const c_char {
    if engine.is_null() {
        return std::ptr::null();
    }
    let slot = (*engine).last_error.lock().unwrap();
    slot.as_ref().map_or(std::ptr::null(), |s| s.as_ptr())
}

fn guard_order(p: usize) -> bool {
    (1..=4).contains(&p)
}

/// Exact central moment at a given length, as a `num/den` string in `out`.
/// `statistic` is 0 for the sum of squared autocorrelations, 1 for the
/// demerit factor.
///
/// # Safety
/// `engine` must be a live handle; `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dfm_moment_value(
    engine: *mut DfmEngine,
    p: usize,
    ell: u64,
    statistic: c_int,
    out: *mut *mut c_char,
) -> c_int {
    if engine.is_null() || out.is_null() {
        return DfmStatus::Usage as c_int;
    }
    let engine = &*engine;
    if !guard_order(p) || ell == 0 || !(statistic == 0 || statistic == 1) {
        set_error(
            engine,
            "usage: p in 1..=4, ell >= 1, statistic in {0,1}".into(),
        );
        return DfmStatus::Usage as c_int;
    }
    let result = if statistic == 0 {
        moments::ssac_central_moment(p).map(|qp| format_rat(&qp.eval_u64(ell)))
    } else {
        moments::adf_central_moment(p, ell).map(|v| format_rat(&v))
    };
    match result {
        Ok(s) => {
            *out = to_c_string(s);
            DfmStatus::Ok as c_int
        }
        Err(e) => {
            set_error(engine, e.to_string());
            DfmStatus::Failed as c_int
        }
    }
}

/// Standardized moment as a decimal string with `digits` digits after the
/// point (exact truncation).
///
/// # Safety
/// `engine` must be a live handle; `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dfm_standardized_moment(
    engine: *mut DfmEngine,
    p: usize,
    ell: u64,
    digits: usize,
    out: *mut *mut c_char,
) -> c_int {
    if engine.is_null() || out.is_null() {
        return DfmStatus::Usage as c_int;
    }
    let engine = &*engine;
    if !guard_order(p) || ell == 0 || digits > 10_000 {
        set_error(
            engine,
            "usage: p in 1..=4, ell >= 1, digits <= 10000".into(),
        );
        return DfmStatus::Usage as c_int;
    }
    match moments::standardized_moment(p, ell, digits) {
        Ok(s) => {
            *out = to_c_string(s);
            DfmStatus::Ok as c_int
        }
        Err(e) => {
            set_error(engine, e.to_string());
            DfmStatus::Failed as c_int
        }
    }
}

/// Isomorphism classes for order `p` as a JSON array (representative class
/// lists, orbit sizes, solution-count quasi-polynomials).
///
/// # Safety
/// `engine` must be a live handle; `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dfm_classes_json(
    engine: *mut DfmEngine,
    p: usize,
    out: *mut *mut c_char,
) -> c_int {
    if engine.is_null() || out.is_null() {
        return DfmStatus::Usage as c_int;
    }
    let engine = &*engine;
    if !guard_order(p) {
        set_error(engine, "usage: p in 1..=4".into());
        return DfmStatus::Usage as c_int;
    }
    let classes = match moments::catalog(p) {
        Ok(c) => c,
        Err(e) => {
            set_error(engine, e.to_string());
            return DfmStatus::Failed as c_int;
        }
    };
    let records: Vec<serde_json::Value> = classes
        .iter()
        .map(|c| {
            serde_json::json!({
                "representative": c.representative.classes(),
                "orbit_size": c.orbit_size,
                "sols": c.sols,
            })
        })
        .collect();
    match serde_json::to_string(&records) {
        Ok(s) => {
            *out = to_c_string(s);
            DfmStatus::Ok as c_int
        }
        Err(e) => {
            set_error(engine, e.to_string());
            DfmStatus::Failed as c_int
        }
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn dfm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn moment_value_round_trip() {
        let engine = dfm_engine_new();
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = unsafe { dfm_moment_value(engine, 2, 4, 0, &mut out) };
        assert_eq!(status, 0);
        let s = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
        assert_eq!(s, "96/1");
        unsafe { dfm_string_free(out) };

        let mut out2: *mut c_char = std::ptr::null_mut();
        let status = unsafe { dfm_moment_value(engine, 2, 4, 1, &mut out2) };
        assert_eq!(status, 0);
        let s = unsafe { CStr::from_ptr(out2) }.to_str().unwrap().to_owned();
        assert_eq!(s, "3/8");
        unsafe { dfm_string_free(out2) };
        unsafe { dfm_engine_free(engine) };
    }

    #[test]
    fn bad_arguments_set_usage_status() {
        let engine = dfm_engine_new();
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = unsafe { dfm_moment_value(engine, 9, 4, 0, &mut out) };
        assert_eq!(status, 2);
        let err = unsafe { dfm_last_error(engine) };
        assert!(!err.is_null());
        unsafe { dfm_engine_free(engine) };
    }

    #[test]
    fn standardized_and_classes() {
        let engine = dfm_engine_new();
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = unsafe { dfm_standardized_moment(engine, 3, 5, 5, &mut out) };
        assert_eq!(status, 0);
        let s = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
        assert_eq!(s, "1.78125");
        unsafe { dfm_string_free(out) };

        let mut out2: *mut c_char = std::ptr::null_mut();
        let status = unsafe { dfm_classes_json(engine, 2, &mut out2) };
        assert_eq!(status, 0);
        let json = unsafe { CStr::from_ptr(out2) }.to_str().unwrap().to_owned();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.as_array().unwrap().len(), 2);
        unsafe { dfm_string_free(out2) };
        unsafe { dfm_engine_free(engine) };
    }
}
