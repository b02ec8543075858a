//! C ABI over `swo-core`.
//!
//! Profiles and orderings are opaque handles created by `*_parse` /
//! `*_from_toml` and released with the matching `*_free`. Every fallible
//! call returns a [`SwoStatus`]; on failure the message is available from
//! [`swo_last_error`] until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use swo::propositions::{parse_certificate, validate_chain};
use swo::{Error, OrderingSpec, Tolerance, Verdict, WellbeingProfile};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidParams = 4,
    Domain = 5,
    NotValueBased = 6,
    TooLarge = 7,
    Guard = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwoVerdict {
    StrictlyBetter = 0,
    Equivalent = 1,
    StrictlyWorse = 2,
    Incomparable = 3,
}

impl From<Verdict> for SwoVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::StrictlyBetter => SwoVerdict::StrictlyBetter,
            Verdict::Equivalent => SwoVerdict::Equivalent,
            Verdict::StrictlyWorse => SwoVerdict::StrictlyWorse,
            Verdict::Incomparable => SwoVerdict::Incomparable,
        }
    }
}

/// Opaque well-being profile.
pub struct SwoProfile(WellbeingProfile);

/// Opaque social ordering.
pub struct SwoOrdering(OrderingSpec);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SwoStatus {
    match e {
        Error::Parse { .. } => SwoStatus::Parse,
        Error::Domain { .. } => SwoStatus::Domain,
        Error::NotValueBased(_) => SwoStatus::NotValueBased,
        Error::TooLarge(_) => SwoStatus::TooLarge,
        Error::Guard(_) => SwoStatus::Guard,
        _ => SwoStatus::InvalidParams,
    }
}

fn guarded(f: impl FnOnce() -> Result<(), SwoStatus>) -> SwoStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SwoStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            SwoStatus::Panic
        }
    }
}

fn fail(e: Error) -> SwoStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, SwoStatus> {
    if p.is_null() {
        set_error("null string".into());
        return Err(SwoStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string is not UTF-8".into());
        SwoStatus::InvalidUtf8
    })
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, SwoStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle".into());
        SwoStatus::NullPointer
    })
}

/// Message for the last failed call on this thread, or NULL.
/// The pointer stays valid until the next `swo_*` call on this thread.
#[no_mangle]
pub extern "C" fn swo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses one profile line such as `"90, 999*100, 999000*300"`.
///
/// # Safety
/// `text_ptr` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn swo_profile_parse(text_ptr: *const c_char, out: *mut *mut SwoProfile) -> SwoStatus {
    guarded(|| {
        if out.is_null() {
            return Err(SwoStatus::NullPointer);
        }
        let s = text(text_ptr)?;
        let p: WellbeingProfile = s.parse().map_err(fail)?;
        *out = Box::into_raw(Box::new(SwoProfile(p)));
        Ok(())
    })
}

/// Number of individuals; 0 for a null handle.
///
/// # Safety
/// `p` must be NULL or a live profile handle.
#[no_mangle]
pub unsafe extern "C" fn swo_profile_len(p: *const SwoProfile) -> u64 {
    p.as_ref().map_or(0, |p| p.0.len())
}

/// The profile in its canonical text form; free with [`swo_string_free`].
///
/// # Safety
/// `p` must be NULL or a live profile handle.
#[no_mangle]
pub unsafe extern "C" fn swo_profile_to_string(p: *const SwoProfile) -> *mut c_char {
    match p.as_ref() {
        Some(p) => CString::new(p.0.to_string()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `p` must be NULL or a handle from [`swo_profile_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn swo_profile_free(p: *mut SwoProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Reads an ordering from its TOML config text.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn swo_ordering_from_toml(toml: *const c_char, out: *mut *mut SwoOrdering) -> SwoStatus {
    guarded(|| {
        if out.is_null() {
            return Err(SwoStatus::NullPointer);
        }
        let spec = OrderingSpec::from_toml(text(toml)?).map_err(fail)?;
        *out = Box::into_raw(Box::new(SwoOrdering(spec)));
        Ok(())
    })
}

/// # Safety
/// `o` must be NULL or a handle from [`swo_ordering_from_toml`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn swo_ordering_free(o: *mut SwoOrdering) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Compares `u` against `v`. `tolerance` is the relative tolerance for
/// floating orderings; pass 0 for the default.
///
/// # Safety
/// Handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn swo_compare(
    o: *const SwoOrdering,
    u: *const SwoProfile,
    v: *const SwoProfile,
    tolerance: f64,
    out: *mut SwoVerdict,
) -> SwoStatus {
    guarded(|| {
        let (o, u, v) = (deref(o)?, deref(u)?, deref(v)?);
        if out.is_null() {
            return Err(SwoStatus::NullPointer);
        }
        let tol = if tolerance == 0.0 {
            Tolerance::default()
        } else {
            Tolerance::new(tolerance).map_err(fail)?
        };
        let c = o.0.compare(&u.0, &v.0, tol).map_err(fail)?;
        *out = c.verdict.into();
        Ok(())
    })
}

/// Value of `p` under a value-based ordering, with its absolute error
/// bound (0 for exact values).
///
/// # Safety
/// Handles must be live; `value` and `bound` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn swo_value(o: *const SwoOrdering, p: *const SwoProfile, value: *mut f64, bound: *mut f64) -> SwoStatus {
    guarded(|| {
        let (o, p) = (deref(o)?, deref(p)?);
        if value.is_null() || bound.is_null() {
            return Err(SwoStatus::NullPointer);
        }
        let a = o.0.value(&p.0).map_err(fail)?.approx();
        *value = a.value;
        *bound = a.bound;
        Ok(())
    })
}

/// Re-validates a chain certificate. `failures` receives the number of
/// steps whose preconditions or linkage fail (0 means valid).
///
/// # Safety
/// `cert` must be a NUL-terminated string and `failures` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn swo_certificate_validate(cert: *const c_char, failures: *mut u64) -> SwoStatus {
    guarded(|| {
        if failures.is_null() {
            return Err(SwoStatus::NullPointer);
        }
        let chain = parse_certificate(text(cert)?).map_err(fail)?;
        let report = validate_chain(&chain, None).map_err(fail)?;
        *failures = report.failures.len() as u64;
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn swo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
