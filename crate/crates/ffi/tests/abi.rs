use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use awarekit_ffi::*;

fn fixture(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    CString::new(p.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    let p = awk_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn load(name: &str) -> *mut AwkModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { awk_model_load(fixture(name).as_ptr(), &mut m) }, AwkStatus::Ok);
    m
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn unaware_of_q_at_the_top_state() {
    let m = load("fig1L.model");
    let mut t = AwkTruth::True;
    let st = unsafe { awk_model_check(m, c("a_1 q").as_ptr(), c("pq:pq").as_ptr(), &mut t) };
    assert_eq!(st, AwkStatus::Ok);
    assert_eq!(t, AwkTruth::False);
    unsafe { awk_model_check(m, c("k_1 p").as_ptr(), c("p,q:pq").as_ptr(), &mut t) };
    assert_eq!(t, AwkTruth::True);
    unsafe { awk_model_free(m) };
}

#[test]
fn evaluate_fills_one_value_per_state() {
    let m = load("fig1R.model");
    let mut n = 0usize;
    assert_eq!(unsafe { awk_model_state_count(m, &mut n) }, AwkStatus::Ok);
    assert_eq!(n, 9);
    let mut buf = vec![AwkTruth::True; n];
    let st = unsafe { awk_model_evaluate(m, c("q").as_ptr(), buf.as_mut_ptr(), n) };
    assert_eq!(st, AwkStatus::Ok);
    let undefined = buf.iter().filter(|&&t| t == AwkTruth::Undefined).count();
    // q is undefined on the empty space and on S{p}
    assert_eq!(undefined, 3);
    let short = unsafe { awk_model_evaluate(m, c("q").as_ptr(), buf.as_mut_ptr(), n - 1) };
    assert_eq!(short, AwkStatus::InvalidInput);
    let label = unsafe { CStr::from_ptr(awk_model_state_label(m, 0)) };
    assert!(label.to_str().unwrap().contains(':'));
    assert!(unsafe { awk_model_state_label(m, n) }.is_null());
    unsafe { awk_model_free(m) };
}

#[test]
fn validate_and_family() {
    let m = load("fig1L.model");
    let mut v = 7usize;
    assert_eq!(unsafe { awk_model_validate(m, &mut v) }, AwkStatus::Ok);
    assert_eq!(v, 0);
    let fam = unsafe { CStr::from_ptr(awk_model_family(m)) };
    assert_eq!(fam.to_str().unwrap(), "complemented-hms");
    unsafe { awk_model_free(m) };
}

#[test]
fn transform_then_compare() {
    let m = load("fig1R.model");
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { awk_model_transform(m, c("fh").as_ptr(), false, &mut k) }, AwkStatus::Ok);
    let mut n = usize::MAX;
    let st = unsafe { awk_equivalence_check(m, k, c("fh").as_ptr(), 2, &mut n) };
    assert_eq!(st, AwkStatus::Ok);
    assert_eq!(n, 0);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { awk_model_transform(k, c("hms").as_ptr(), true, &mut back) }, AwkStatus::Ok);
    let st = unsafe { awk_equivalence_check(k, back, c("hms").as_ptr(), 2, &mut n) };
    assert_eq!(st, AwkStatus::Ok);
    for h in [m, k, back] {
        unsafe { awk_model_free(h) };
    }
}

#[test]
fn wrong_family_is_an_input_error_with_a_message() {
    let m = load("fig1R.model");
    let mut out = ptr::null_mut();
    let st = unsafe { awk_model_transform(m, c("hms").as_ptr(), false, &mut out) };
    assert_eq!(st, AwkStatus::InvalidInput);
    assert!(out.is_null());
    assert!(last_error().contains("awareness structure"));
    let st = unsafe { awk_model_transform(m, c("sideways").as_ptr(), false, &mut out) };
    assert_eq!(st, AwkStatus::InvalidInput);
    unsafe { awk_model_free(m) };
}

#[test]
fn round_trip_through_render_and_parse() {
    let m = load("fig1L.model");
    let json = unsafe { awk_model_render(m) };
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { awk_model_parse(json, &mut again) }, AwkStatus::Ok);
    let json2 = unsafe { awk_model_render(again) };
    assert_eq!(unsafe { CStr::from_ptr(json) }, unsafe { CStr::from_ptr(json2) });
    unsafe {
        awk_string_free(json);
        awk_string_free(json2);
        awk_model_free(m);
        awk_model_free(again);
    }
}

#[test]
fn null_and_bad_arguments() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { awk_model_parse(ptr::null(), &mut out) }, AwkStatus::NullArgument);
    assert!(last_error().contains("json"));
    assert_eq!(unsafe { awk_model_parse(c("{").as_ptr(), &mut out) }, AwkStatus::InvalidInput);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { awk_model_parse(bad.as_ptr().cast(), &mut out) }, AwkStatus::InvalidUtf8);
    let mut n = 0usize;
    assert_eq!(unsafe { awk_model_state_count(ptr::null(), &mut n) }, AwkStatus::NullArgument);
    assert!(unsafe { awk_model_family(ptr::null()) }.is_null());
    unsafe { awk_model_free(ptr::null_mut()) };
    unsafe { awk_string_free(ptr::null_mut()) };
}

#[test]
fn errors_clear_on_the_next_success() {
    let mut out = ptr::null_mut();
    unsafe { awk_model_parse(c("[]").as_ptr(), &mut out) };
    assert!(!awk_last_error().is_null());
    let m = load("fig1L.model");
    assert!(awk_last_error().is_null());
    unsafe { awk_model_free(m) };
}

#[test]
fn proofs_report_the_failing_line() {
    let good = "{\"formula\": \"l_1 p -> p\", \"by\": \"ax:l-t\"}\n{\"formula\": \"l_1 (l_1 p -> p)\", \"by\": \"nec 1\"}\n";
    let mut line = 99usize;
    assert_eq!(unsafe { awk_proof_check(c(good).as_ptr(), &mut line) }, AwkStatus::Ok);
    assert_eq!(line, 0);
    let bad = good.replace("nec 1", "nec 2");
    assert_eq!(unsafe { awk_proof_check(c(&bad).as_ptr(), &mut line) }, AwkStatus::Violation);
    assert_eq!(line, 2);
    assert_eq!(unsafe { awk_proof_check(c("not json").as_ptr(), &mut line) }, AwkStatus::InvalidInput);
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(awk_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
