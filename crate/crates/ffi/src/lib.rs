//! C ABI over `awarekit`.
//!
//! Models are opaque `AwkModel` handles owned by the caller and released with
//! `awk_model_free`. Every fallible call returns an `AwkStatus`; on anything
//! but `AWK_STATUS_OK` a message is available from `awk_last_error` on the
//! same thread until the next call. Strings returned as `char *` are owned by
//! the caller and released with `awk_string_free`; strings returned as
//! `const char *` are borrowed.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use awarekit::enumerate::EnumConfig;
use awarekit::io::{load_model, parse_model, render_model, AnyModel};
use awarekit::lpa::{check_proof, parse_proof};
use awarekit::semantics::TruthValue;
use awarekit::transforms::{apply, equivalence_check, Transform};
use awarekit::Error;

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AwkStatus {
    Ok = 0,
    /// A law or invariant failed, or a proof was rejected.
    Violation = 1,
    /// Malformed model, formula, state name or argument.
    InvalidInput = 2,
    NullArgument = 3,
    InvalidUtf8 = 4,
    /// A bug inside the library; the message says where.
    Internal = 5,
}

/// Three-valued truth at a state.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AwkTruth {
    False = 0,
    True = 1,
    Undefined = 2,
}

impl From<TruthValue> for AwkTruth {
    fn from(t: TruthValue) -> Self {
        match t {
            TruthValue::True => AwkTruth::True,
            TruthValue::False => AwkTruth::False,
            TruthValue::Undefined => AwkTruth::Undefined,
        }
    }
}

/// A model of any family together with its state labels.
pub struct AwkModel {
    inner: AnyModel,
    labels: Vec<CString>,
    family: CString,
}

impl AwkModel {
    fn boxed(inner: AnyModel) -> *mut AwkModel {
        let labels = inner
            .state_labels()
            .into_iter()
            .map(|s| CString::new(s).expect("state names have no NUL"))
            .collect();
        let family = CString::new(inner.family()).expect("static name");
        Box::into_raw(Box::new(AwkModel { inner, labels, family }))
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(AwkStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Model(_) | Error::Syntax(_) | Error::InvalidCaps(_) => AwkStatus::InvalidInput,
            _ => AwkStatus::Violation,
        };
        Fail(status, e.to_string())
    }
}

/// Runs `f`, recording its error message and turning panics into
/// `Internal`.
fn guard(f: impl FnOnce() -> Result<AwkStatus, Fail>) -> AwkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            AwkStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(AwkStatus::NullArgument, format!("`{what}` is null"))
}

/// # Safety
/// `p` is null or a NUL-terminated string valid for the call.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(AwkStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

/// # Safety
/// `m` is null or a live handle.
unsafe fn model<'a>(m: *const AwkModel, what: &str) -> Result<&'a AwkModel, Fail> {
    m.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` is null or valid for a write.
unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn transform_named(name: &str) -> Result<Transform, Fail> {
    name.parse().map_err(|e| Fail(AwkStatus::InvalidInput, e))
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn awk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null.
#[no_mangle]
pub extern "C" fn awk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or was returned as `char *` by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn awk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a model from JSON text into `*out`.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn awk_model_parse(json: *const c_char, out: *mut *mut AwkModel) -> AwkStatus {
    guard(|| {
        let m = parse_model(text(json, "json")?)?;
        put(out, AwkModel::boxed(m), "out")?;
        Ok(AwkStatus::Ok)
    })
}

/// Reads a model file into `*out`.
///
/// # Safety
/// `path` is a NUL-terminated string; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn awk_model_load(path: *const c_char, out: *mut *mut AwkModel) -> AwkStatus {
    guard(|| {
        let m = load_model(Path::new(text(path, "path")?))?;
        put(out, AwkModel::boxed(m), "out")?;
        Ok(AwkStatus::Ok)
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `m` is null or a live handle, which is dead afterwards.
#[no_mangle]
pub unsafe extern "C" fn awk_model_free(m: *mut AwkModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `fh`, `hms`, `complemented-hms` or `implicit-hms`; borrowed from `m`.
/// Null if `m` is null.
///
/// # Safety
/// `m` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn awk_model_family(m: *const AwkModel) -> *const c_char {
    m.as_ref().map_or(ptr::null(), |m| m.family.as_ptr())
}

/// Number of states (worlds for awareness structures).
///
/// # Safety
/// `m` is a live handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn awk_model_state_count(m: *const AwkModel, out: *mut usize) -> AwkStatus {
    guard(|| {
        put(out, model(m, "model")?.labels.len(), "out")?;
        Ok(AwkStatus::Ok)
    })
}

/// Label of state `index`, borrowed from `m`; null if out of range.
///
/// # Safety
/// `m` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn awk_model_state_label(m: *const AwkModel, index: usize) -> *const c_char {
    m.as_ref()
        .and_then(|m| m.labels.get(index))
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// Runs the structural validators. `*violations` receives the count;
/// returns `AWK_STATUS_VIOLATION` when it is nonzero.
///
/// # Safety
/// `m` is a live handle; `violations` is null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn awk_model_validate(m: *const AwkModel, violations: *mut usize) -> AwkStatus {
    guard(|| {
        let report = model(m, "model")?.inner.validate();
        if !violations.is_null() {
            violations.write(report.len());
        }
        if report.is_empty() {
            Ok(AwkStatus::Ok)
        } else {
            Err(Fail(AwkStatus::Violation, report.to_string()))
        }
    })
}

/// The model as JSON; release with `awk_string_free`. Null if `m` is null.
///
/// # Safety
/// `m` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn awk_model_render(m: *const AwkModel) -> *mut c_char {
    m.as_ref().map_or(ptr::null_mut(), |m| {
        CString::new(render_model(&m.inner)).map_or(ptr::null_mut(), CString::into_raw)
    })
}

/// Value of `formula` at `state` (`key:id` on lattices, a world name on
/// awareness structures).
///
/// # Safety
/// `m` is a live handle; `formula` and `state` are NUL-terminated; `out` is
/// valid for a write.
#[no_mangle]
pub unsafe extern "C" fn awk_model_check(
    m: *const AwkModel,
    formula: *const c_char,
    state: *const c_char,
    out: *mut AwkTruth,
) -> AwkStatus {
    guard(|| {
        let m = model(m, "model")?;
        let v = m.inner.evaluate_at(text(formula, "formula")?, text(state, "state")?)?;
        put(out, v.into(), "out")?;
        Ok(AwkStatus::Ok)
    })
}

/// Values of `formula` at every state, in label order. `out` must hold at
/// least `awk_model_state_count` entries.
///
/// # Safety
/// `m` is a live handle; `formula` is NUL-terminated; `out` is valid for
/// `len` writes.
#[no_mangle]
pub unsafe extern "C" fn awk_model_evaluate(
    m: *const AwkModel,
    formula: *const c_char,
    out: *mut AwkTruth,
    len: usize,
) -> AwkStatus {
    guard(|| {
        let m = model(m, "model")?;
        let values = m.inner.evaluate(text(formula, "formula")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if len < values.len() {
            return Err(Fail(
                AwkStatus::InvalidInput,
                format!("buffer holds {len} values, the model has {} states", values.len()),
            ));
        }
        for (i, v) in values.into_iter().enumerate() {
            out.add(i).write(v.into());
        }
        Ok(AwkStatus::Ok)
    })
}

/// Applies the transform named `to` (`hms`, `implicit-hms`, `fh` or
/// `fh-star`) and stores a new handle in `*out`.
///
/// # Safety
/// `m` is a live handle; `to` is NUL-terminated; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn awk_model_transform(
    m: *const AwkModel,
    to: *const c_char,
    minimize: bool,
    out: *mut *mut AwkModel,
) -> AwkStatus {
    guard(|| {
        let m = model(m, "model")?;
        let result = apply(&m.inner, transform_named(text(to, "to")?)?, minimize)?;
        put(out, AwkModel::boxed(result), "out")?;
        Ok(AwkStatus::Ok)
    })
}

/// Compares `a` with `b`, its image under the transform `via`, on every
/// formula up to modal depth `depth`. `*counterexamples` receives the number
/// of disagreements.
///
/// # Safety
/// `a` and `b` are live handles; `via` is NUL-terminated; `counterexamples`
/// is null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn awk_equivalence_check(
    a: *const AwkModel,
    b: *const AwkModel,
    via: *const c_char,
    depth: usize,
    counterexamples: *mut usize,
) -> AwkStatus {
    guard(|| {
        let (a, b) = (model(a, "a")?, model(b, "b")?);
        let via = transform_named(text(via, "via")?)?;
        let report = equivalence_check(
            (&a.inner).try_into().map_err(Error::from)?,
            (&b.inner).try_into().map_err(Error::from)?,
            via,
            &EnumConfig::with_depth(depth),
        )?;
        if !counterexamples.is_null() {
            counterexamples.write(report.len());
        }
        if report.is_empty() {
            Ok(AwkStatus::Ok)
        } else {
            Err(Fail(AwkStatus::Violation, report.to_string()))
        }
    })
}

/// Checks a proof given as JSON-lines text. On rejection `*failing_line`
/// receives the 1-based first unjustified line; on acceptance, 0.
///
/// # Safety
/// `proof` is NUL-terminated; `failing_line` is null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn awk_proof_check(proof: *const c_char, failing_line: *mut usize) -> AwkStatus {
    guard(|| {
        let lines = parse_proof(text(proof, "proof")?).map_err(|e| Fail(AwkStatus::InvalidInput, e.to_string()))?;
        let verdict = check_proof(&lines);
        let line = verdict.failure.as_ref().map_or(0, |f| f.line);
        if !failing_line.is_null() {
            failing_line.write(line);
        }
        match verdict.failure {
            None => Ok(AwkStatus::Ok),
            Some(f) => Err(Fail(AwkStatus::Violation, format!("line {}: {}", f.line, f.reason))),
        }
    })
}
