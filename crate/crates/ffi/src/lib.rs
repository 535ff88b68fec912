// SPDX-License-Identifier: Apache-2.0

//! C ABI over `quct`. Rings are opaque handles; every fallible call returns a
//! `QuctStatus` and leaves a message for `quct_last_error`. Strings returned
//! through out-parameters are owned by the caller and released with
//! `quct_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use quct::error::Error;
use quct::invariants::{energy_closed, hyperenergetic, ramanujan_check, ramanujan_classified, triangles_closed};
use quct::report::{build_report, ReportOptions, Source};
use quct::ring::DEFAULT_CAP;
use quct::verify::{verify_ring, VerifyOptions};
use quct::{closed_spectrum, Classification, ProductRing, RingSpec};

/// Opaque ring handle.
pub struct QuctRing {
    ring: ProductRing,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuctStatus {
    Ok = 0,
    NullArgument = 1,
    ParseError = 2,
    Unsupported = 3,
    SizeCap = 4,
    InvalidUtf8 = 5,
    Numeric = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuctClassification {
    AllOneMod4 = 0,
    OneThreeMod4 = 1,
    Unsupported = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuctMethod {
    Closed = 0,
    Oracle = 1,
    Both = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(err: &Error) -> QuctStatus {
    match err {
        Error::Parse { .. } | Error::NotPrimePower(_) | Error::NotPrime(_) => QuctStatus::ParseError,
        Error::UnsupportedRingClass { .. } | Error::EvenCharacteristicUnsupported(_) => QuctStatus::Unsupported,
        Error::SizeCapExceeded { .. } => QuctStatus::SizeCap,
        Error::PrecisionLoss(_) | Error::NoConvergence { .. } | Error::NonRealCharacterSum(_) => QuctStatus::Numeric,
        _ => QuctStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into a status plus message.
fn guard<F: FnOnce() -> Result<(), (QuctStatus, String)>>(f: F) -> QuctStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QuctStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QuctStatus::Internal
        }
    }
}

fn lib_err(err: Error) -> (QuctStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (QuctStatus, String) {
    (QuctStatus::NullArgument, format!("{what} is null"))
}

unsafe fn ring_ref<'a>(ring: *const QuctRing) -> Result<&'a ProductRing, (QuctStatus, String)> {
    // SAFETY: callers pass a handle from `quct_ring_parse` or null.
    unsafe { ring.as_ref() }.map(|h| &h.ring).ok_or_else(|| null("ring"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (QuctStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: non-null and supplied by the caller as writable.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), (QuctStatus, String)> {
    let c = CString::new(text).map_err(|e| (QuctStatus::Internal, e.to_string()))?;
    unsafe { write_out(out, c.into_raw()) }
}

/// Parses and builds a ring. `cap == 0` selects the default order cap.
/// On success `*out` owns a handle to release with `quct_ring_free`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn quct_ring_parse(spec: *const c_char, cap: u64, out: *mut *mut QuctRing) -> QuctStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        // SAFETY: NUL-terminated per contract.
        let text = unsafe { CStr::from_ptr(spec) }
            .to_str()
            .map_err(|e| (QuctStatus::InvalidUtf8, e.to_string()))?;
        let cap = if cap == 0 { DEFAULT_CAP } else { cap };
        let ring = RingSpec::parse(text).map_err(lib_err)?.build_with_cap(cap);
        ring.check_cap().map_err(lib_err)?;
        let handle = Box::into_raw(Box::new(QuctRing { ring }));
        unsafe { write_out(out, handle) }.inspect_err(|_| {
            // SAFETY: just allocated above and not shared.
            drop(unsafe { Box::from_raw(handle) });
        })
    })
}

/// # Safety
/// `ring` must be null or a handle from `quct_ring_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn quct_ring_free(ring: *mut QuctRing) {
    if !ring.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(ring) });
    }
}

/// Vertex count `|R|`, or 0 for a null handle.
///
/// # Safety
/// `ring` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn quct_ring_order(ring: *const QuctRing) -> u64 {
    unsafe { ring_ref(ring) }.map_or(0, ProductRing::order)
}

/// # Safety
/// `ring` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn quct_ring_classification(ring: *const QuctRing, out: *mut QuctClassification) -> QuctStatus {
    guard(|| {
        let class = match unsafe { ring_ref(ring) }?.classification() {
            Classification::All1Mod4 => QuctClassification::AllOneMod4,
            Classification::One3Mod4 => QuctClassification::OneThreeMod4,
            Classification::Unsupported => QuctClassification::Unsupported,
        };
        unsafe { write_out(out, class) }
    })
}

/// Canonical name such as `Z9*F5`.
///
/// # Safety
/// `ring` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn quct_ring_canonical(ring: *const QuctRing, out: *mut *mut c_char) -> QuctStatus {
    guard(|| {
        let name = unsafe { ring_ref(ring) }?.canonical();
        unsafe { write_string(out, name) }
    })
}

/// Closed-form spectrum as JSON `[{"value", "approx", "multiplicity"}]`.
///
/// # Safety
/// `ring` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn quct_spectrum_json(ring: *const QuctRing, out: *mut *mut c_char) -> QuctStatus {
    guard(|| {
        let spectrum = closed_spectrum(unsafe { ring_ref(ring) }?).map_err(lib_err)?;
        let text = serde_json::to_string(&spectrum).map_err(|e| (QuctStatus::Internal, e.to_string()))?;
        unsafe { write_string(out, text) }
    })
}

/// Full report as JSON, the same document `quct report --format json` prints.
///
/// # Safety
/// `ring` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn quct_report_json(
    ring: *const QuctRing,
    method: QuctMethod,
    k_max: u32,
    out: *mut *mut c_char,
) -> QuctStatus {
    guard(|| {
        let source = match method {
            QuctMethod::Closed => Source::Closed,
            QuctMethod::Oracle => Source::Oracle,
            QuctMethod::Both => Source::Both,
        };
        let opts = ReportOptions {
            source,
            k_max: k_max.clamp(1, 8),
        };
        let report = build_report(unsafe { ring_ref(ring) }?, &opts).map_err(lib_err)?;
        let text = serde_json::to_string(&report).map_err(|e| (QuctStatus::Internal, e.to_string()))?;
        unsafe { write_string(out, text) }
    })
}

/// Exact energy. `approx` receives the float value and, when `exact` is
/// non-null, `*exact` receives the exact value as text such as `8 + 8*sqrt(5)`.
///
/// # Safety
/// `ring` must be a live handle, `approx` writable, `exact` null or writable.
#[no_mangle]
pub unsafe extern "C" fn quct_energy(ring: *const QuctRing, approx: *mut f64, exact: *mut *mut c_char) -> QuctStatus {
    guard(|| {
        let e = energy_closed(unsafe { ring_ref(ring) }?).map_err(lib_err)?;
        unsafe { write_out(approx, e.to_f64()) }?;
        if !exact.is_null() {
            unsafe { write_string(exact, e.to_string()) }?;
        }
        Ok(())
    })
}

/// Closed-form triangle count.
///
/// # Safety
/// `ring` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn quct_triangles(ring: *const QuctRing, out: *mut u64) -> QuctStatus {
    guard(|| {
        let t = triangles_closed(unsafe { ring_ref(ring) }?).map_err(lib_err)?;
        let t = u64::try_from(t).map_err(|e| (QuctStatus::Internal, e.to_string()))?;
        unsafe { write_out(out, t) }
    })
}

/// Ramanujan property from the spectrum and from the ring shape.
///
/// # Safety
/// `ring` must be a live handle; `computed` and `classifier` writable.
#[no_mangle]
pub unsafe extern "C" fn quct_ramanujan(
    ring: *const QuctRing,
    computed: *mut bool,
    classifier: *mut bool,
) -> QuctStatus {
    guard(|| {
        let r = unsafe { ring_ref(ring) }?;
        let spectrum = closed_spectrum(r).map_err(lib_err)?;
        let degree = spectrum
            .largest()
            .value
            .to_integer()
            .and_then(|d| u64::try_from(d).ok())
            .unwrap_or(0);
        let c = ramanujan_check(&spectrum, degree).map_err(lib_err)?;
        let p = ramanujan_classified(r).map_err(lib_err)?;
        unsafe { write_out(computed, c) }?;
        unsafe { write_out(classifier, p) }
    })
}

/// Whether the energy exceeds `2(n - 1)`, exactly and per the classifier.
///
/// # Safety
/// `ring` must be a live handle; `computed` and `classifier` writable.
#[no_mangle]
pub unsafe extern "C" fn quct_hyperenergetic(
    ring: *const QuctRing,
    computed: *mut bool,
    classifier: *mut bool,
) -> QuctStatus {
    guard(|| {
        let v = hyperenergetic(unsafe { ring_ref(ring) }?).map_err(lib_err)?;
        unsafe { write_out(computed, v.computed) }?;
        unsafe { write_out(classifier, v.classifier.unwrap_or(v.computed)) }
    })
}

/// Runs the invariant battery. `*pass` is the overall verdict; when `json`
/// is non-null `*json` receives the per-check report.
///
/// # Safety
/// `ring` must be a live handle, `pass` writable, `json` null or writable.
#[no_mangle]
pub unsafe extern "C" fn quct_verify(ring: *const QuctRing, pass: *mut bool, json: *mut *mut c_char) -> QuctStatus {
    guard(|| {
        let report = verify_ring(unsafe { ring_ref(ring) }?, &VerifyOptions::default()).map_err(lib_err)?;
        unsafe { write_out(pass, report.pass) }?;
        if !json.is_null() {
            let text = serde_json::to_string(&report).map_err(|e| (QuctStatus::Internal, e.to_string()))?;
            unsafe { write_string(json, text) }?;
        }
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn quct_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by `CString::into_raw` in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message for the last failed call on this thread, empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn quct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn quct_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

#[cfg(test)]
mod tests {
    use std::ptr;

    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::NotPrime(6)), QuctStatus::ParseError);
        assert_eq!(
            status_of(&Error::SizeCapExceeded { order: 9, cap: 1 }),
            QuctStatus::SizeCap
        );
        assert_eq!(
            status_of(&Error::UnsupportedRingClass { ring: "F3*F7".into() }),
            QuctStatus::Unsupported
        );
        assert_eq!(status_of(&Error::PrecisionLoss("x".into())), QuctStatus::Numeric);
    }

    #[test]
    fn null_handles() {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { quct_ring_canonical(ptr::null(), &mut out) },
            QuctStatus::NullArgument
        );
        assert!(out.is_null());
        assert_eq!(unsafe { quct_ring_order(ptr::null()) }, 0);
        unsafe { quct_ring_free(ptr::null_mut()) };
        unsafe { quct_string_free(ptr::null_mut()) };
    }
}
