//! C ABI bindings.
//!
//! Objects cross the boundary as opaque pointers created by `*_new`/`*_parse`
//! style calls and released with the matching `*_free`. Every fallible call
//! returns an [`AvcStatus`]; on failure the message is available from
//! [`avc_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use avcheck::catalog::{catalog_form, SingularityType};
use avcheck::checker::{check_petrovskii, check_theorem_a, InequalityReport, Verdict};
use avcheck::scheme::{CurveScheme, SchemeError};
use avcheck::RationalSymmetricForm;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AvcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidForm = 3,
    InvalidScheme = 4,
    UnknownType = 5,
    Io = 6,
    OutOfRange = 7,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AvcVerdict {
    Consistent = 0,
    Prohibited = 1,
}

/// Rational symmetric bilinear form.
pub struct AvcForm(RationalSymmetricForm);

/// Validated curve scheme.
pub struct AvcScheme(CurveScheme);

/// Result of checking a scheme.
pub struct AvcReport(InequalityReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(AvcStatus, String);

impl From<SchemeError> for Failure {
    fn from(e: SchemeError) -> Self {
        let status = match e {
            SchemeError::Io { .. } => AvcStatus::Io,
            _ => AvcStatus::InvalidScheme,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AvcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            AvcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            AvcStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(AvcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(AvcStatus::InvalidUtf8, e.to_string()))
}

unsafe fn obj<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("no interior nul")
        .into_raw()
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn avc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn avc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn avc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a whitespace separated matrix, one row per line.
///
/// # Safety
/// `matrix_text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn avc_form_parse(
    matrix_text: *const c_char,
    out: *mut *mut AvcForm,
) -> AvcStatus {
    guard(|| {
        let form: RationalSymmetricForm = text(matrix_text)?
            .parse()
            .map_err(|e: avcheck::FormError| Failure(AvcStatus::InvalidForm, e.to_string()))?;
        put(out, Box::into_raw(Box::new(AvcForm(form))))
    })
}

/// # Safety
/// `form` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn avc_form_free(form: *mut AvcForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Dimension of the form; 0 for NULL.
///
/// # Safety
/// `form` must be NULL or a live form.
#[no_mangle]
pub unsafe extern "C" fn avc_form_dim(form: *const AvcForm) -> usize {
    form.as_ref().map_or(0, |f| f.0.dim())
}

/// Writes the numbers of positive, negative and zero squares.
///
/// # Safety
/// `form` must be a live form and the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn avc_form_inertia(
    form: *const AvcForm,
    plus: *mut usize,
    minus: *mut usize,
    zero: *mut usize,
) -> AvcStatus {
    guard(|| {
        let i = obj(form)?.0.inertia();
        put(plus, i.sigma_plus)?;
        put(minus, i.sigma_minus)?;
        put(zero, i.sigma_zero)
    })
}

/// Entry `(i, j)` as a `p/q` string; free with [`avc_string_free`].
///
/// # Safety
/// `form` must be a live form and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn avc_form_entry(
    form: *const AvcForm,
    i: usize,
    j: usize,
    out: *mut *mut c_char,
) -> AvcStatus {
    guard(|| {
        let f = &obj(form)?.0;
        if i >= f.dim() || j >= f.dim() {
            return Err(Failure(
                AvcStatus::OutOfRange,
                format!("index ({i}, {j}) outside a {}-dimensional form", f.dim()),
            ));
        }
        put(
            out,
            owned_string(avcheck::rational::format_rational(f.entry(i, j))),
        )
    })
}

/// Matrix text in the same format [`avc_form_parse`] accepts.
///
/// # Safety
/// `form` must be a live form and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn avc_form_to_text(
    form: *const AvcForm,
    out: *mut *mut c_char,
) -> AvcStatus {
    guard(|| put(out, owned_string(obj(form)?.0.to_matrix_text())))
}

/// Local form of a catalog type such as `"A3"` with variant `"x^{2n}-y^2"`.
///
/// # Safety
/// Both strings must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn avc_catalog_form(
    name: *const c_char,
    variant: *const c_char,
    out: *mut *mut AvcForm,
) -> AvcStatus {
    guard(|| {
        let t = SingularityType::parse(text(name)?, text(variant)?)
            .map_err(|e| Failure(AvcStatus::UnknownType, e.to_string()))?;
        put(out, Box::into_raw(Box::new(AvcForm(catalog_form(&t)))))
    })
}

/// Parses and validates a scheme from JSON text. Fixture paths are resolved
/// against the current directory.
///
/// # Safety
/// `json` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn avc_scheme_from_json(
    json: *const c_char,
    out: *mut *mut AvcScheme,
) -> AvcStatus {
    guard(|| {
        let s = CurveScheme::from_json(text(json)?)?;
        put(out, Box::into_raw(Box::new(AvcScheme(s))))
    })
}

/// Loads a scheme file; fixture paths resolve against its directory.
///
/// # Safety
/// `path` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn avc_scheme_load(
    path: *const c_char,
    out: *mut *mut AvcScheme,
) -> AvcStatus {
    guard(|| {
        let s = CurveScheme::load(Path::new(text(path)?))?;
        put(out, Box::into_raw(Box::new(AvcScheme(s))))
    })
}

/// # Safety
/// `scheme` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn avc_scheme_free(scheme: *mut AvcScheme) {
    if !scheme.is_null() {
        drop(Box::from_raw(scheme));
    }
}

/// Runs the inequality check.
///
/// # Safety
/// `scheme` must be a live scheme and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn avc_check(
    scheme: *const AvcScheme,
    out: *mut *mut AvcReport,
) -> AvcStatus {
    guard(|| {
        let r = check_theorem_a(&obj(scheme)?.0)?;
        put(out, Box::into_raw(Box::new(AvcReport(r))))
    })
}

/// # Safety
/// `report` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn avc_report_free(report: *mut AvcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live report and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn avc_report_verdict(
    report: *const AvcReport,
    out: *mut AvcVerdict,
) -> AvcStatus {
    guard(|| {
        let v = match obj(report)?.0.verdict {
            Verdict::Consistent => AvcVerdict::Consistent,
            Verdict::Prohibited => AvcVerdict::Prohibited,
        };
        put(out, v)
    })
}

/// Whether inequality `index` (1 to 4) holds.
///
/// # Safety
/// `report` must be a live report and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn avc_report_holds(
    report: *const AvcReport,
    index: u32,
    out: *mut bool,
) -> AvcStatus {
    guard(|| {
        let holds = obj(report)?.0.holds();
        let h = match index {
            1..=4 => holds[index as usize - 1],
            _ => {
                return Err(Failure(
                    AvcStatus::OutOfRange,
                    format!("inequality index {index} not in 1..=4"),
                ))
            }
        };
        put(out, h)
    })
}

/// Full report as pretty JSON; free with [`avc_string_free`].
///
/// # Safety
/// `report` must be a live report and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn avc_report_to_json(
    report: *const AvcReport,
    out: *mut *mut c_char,
) -> AvcStatus {
    guard(|| put(out, owned_string(obj(report)?.0.to_json())))
}

/// Classical lower and upper bounds on the Euler characteristic of the
/// positive region of a nonsingular curve of degree `2k`.
///
/// # Safety
/// The out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn avc_check_petrovskii(
    chi_w: i64,
    k: u32,
    lower_holds: *mut bool,
    upper_holds: *mut bool,
) -> AvcStatus {
    guard(|| {
        let (lo, hi) = check_petrovskii(chi_w, k);
        put(lower_holds, lo)?;
        put(upper_holds, hi)
    })
}
