//! Exercises the C ABI end to end from Rust: handle lifecycle, status
//! codes, error retrieval, and string ownership.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use lck::construct::{build_d4, build_gb};
use lck::doc::{AlgebraDocument, TripleDocument};
use lck::scalar::{Rat, Scalar};
use lck_ffi::{
    lck_algebra_dim, lck_algebra_free, lck_algebra_from_json, lck_algebra_report_json,
    lck_classify4_json, lck_last_error, lck_string_free, lck_verify_paper, LCK_STATUS_INVARIANT_ERROR,
    LCK_STATUS_NULL_ARGUMENT, LCK_STATUS_OK, LCK_STATUS_PARSE_ERROR,
};

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
    unsafe { lck_string_free(ptr) };
    s
}

fn last_error() -> String {
    take_string(lck_last_error())
}

fn d4_product_json() -> CString {
    let t = build_d4::<Rat>();
    let (alg, herm) = t.semidirect().unwrap();
    CString::new(AlgebraDocument::from_instance(&alg, &herm, None).to_json_string()).unwrap()
}

#[test]
fn valid_document_round_trips_through_the_abi() {
    let json = d4_product_json();
    let mut handle = ptr::null_mut();
    let status = unsafe { lck_algebra_from_json(json.as_ptr(), &mut handle) };
    assert_eq!(status, LCK_STATUS_OK);
    assert!(!handle.is_null());
    assert_eq!(last_error(), "");

    assert_eq!(unsafe { lck_algebra_dim(handle) }, 4);

    let mut report = ptr::null_mut();
    let status = unsafe { lck_algebra_report_json(handle, &mut report) };
    assert_eq!(status, LCK_STATUS_OK);
    let text = take_string(report);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["flags"]["lck"]["status"], "holds");
    assert_eq!(value["flags"]["kahler"]["status"], "fails");

    unsafe { lck_algebra_free(handle) };
}

#[test]
fn parse_and_invariant_failures_map_to_distinct_statuses() {
    let mut handle = ptr::null_mut();

    let garbage = CString::new("{ not json").unwrap();
    let status = unsafe { lck_algebra_from_json(garbage.as_ptr(), &mut handle) };
    assert_eq!(status, LCK_STATUS_PARSE_ERROR);
    assert!(!last_error().is_empty());

    // Corrupt one structure constant so the Jacobi identity fails.
    let t = build_d4::<Rat>();
    let (alg, herm) = t.semidirect().unwrap();
    let mut doc = AlgebraDocument::from_instance(&alg, &herm, None);
    doc.brackets[0].terms[0].coeff = "2".into();
    let json = CString::new(doc.to_json_string()).unwrap();
    let status = unsafe { lck_algebra_from_json(json.as_ptr(), &mut handle) };
    assert_eq!(status, LCK_STATUS_INVARIANT_ERROR);
    assert!(last_error().contains("Jacobi"));
}

#[test]
fn null_arguments_are_rejected_not_dereferenced() {
    let mut handle = ptr::null_mut();
    assert_eq!(
        unsafe { lck_algebra_from_json(ptr::null(), &mut handle) },
        LCK_STATUS_NULL_ARGUMENT
    );
    let json = d4_product_json();
    assert_eq!(
        unsafe { lck_algebra_from_json(json.as_ptr(), ptr::null_mut()) },
        LCK_STATUS_NULL_ARGUMENT
    );
    assert_eq!(unsafe { lck_algebra_dim(ptr::null()) }, -1);
    assert_eq!(
        unsafe { lck_algebra_report_json(ptr::null(), ptr::null_mut()) },
        LCK_STATUS_NULL_ARGUMENT
    );
    // Frees tolerate null.
    unsafe { lck_algebra_free(ptr::null_mut()) };
    unsafe { lck_string_free(ptr::null_mut()) };
}

#[test]
fn classification_verdicts_cross_the_boundary() {
    let d4 = CString::new(
        TripleDocument::from_triple(&build_d4::<Rat>(), None).to_json_string(),
    )
    .unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { lck_classify4_json(d4.as_ptr(), &mut out) },
        LCK_STATUS_OK
    );
    assert_eq!(take_string(out), "D4");

    let family = CString::new(
        TripleDocument::from_triple(&build_gb(&Rat::from_fraction(7, 2)), None).to_json_string(),
    )
    .unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { lck_classify4_json(family.as_ptr(), &mut out) },
        LCK_STATUS_OK
    );
    assert_eq!(take_string(out), "gb b=7/2");
}

#[test]
fn verification_suite_runs_behind_the_abi() {
    let section = CString::new("section6").unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { lck_verify_paper(section.as_ptr(), &mut out) };
    assert_eq!(status, LCK_STATUS_OK);
    let rendered = take_string(out);
    assert!(rendered.contains("[ ok ] section6"));
    assert!(rendered.contains("0 failed"));

    let bogus = CString::new("section99").unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { lck_verify_paper(bogus.as_ptr(), &mut out) };
    assert_eq!(status, LCK_STATUS_INVARIANT_ERROR);
    assert!(last_error().contains("section99"));
}

#[test]
fn generated_header_matches_the_exported_surface() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/lck.h"
    ))
    .unwrap();
    for symbol in [
        "lck_algebra_from_json",
        "lck_algebra_free",
        "lck_algebra_dim",
        "lck_algebra_report_json",
        "lck_classify4_json",
        "lck_verify_paper",
        "lck_last_error",
        "lck_string_free",
        "LCK_STATUS_INVARIANT_ERROR",
        "typedef struct LckAlgebra LckAlgebra;",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}
