use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use fhit_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(fhit_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn solve(eps: f64) -> *mut FhitCandidate {
    let sched = [64usize];
    let mut c = ptr::null_mut();
    let s = unsafe { fhit_continue(1.3, 0.0, eps, 10, sched.as_ptr(), sched.len(), &mut c) };
    assert_eq!(s, FhitStatus::Ok, "{}", last_error());
    c
}

#[test]
fn cn_matches_reference_value() {
    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(unsafe { fhit_cn(1e-2, 1e-1, 64, &mut lo, &mut hi) }, FhitStatus::Ok);
    assert!(lo <= 9.188922310381446e-8 && 9.188922310381446e-8 <= hi);
}

#[test]
fn bad_strip_sets_message() {
    let (mut lo, mut hi) = (0.0, 0.0);
    let s = unsafe { fhit_cn(0.1, 0.05, 64, &mut lo, &mut hi) };
    assert_eq!(s, FhitStatus::InvalidArgument);
    assert!(last_error().contains("rho"));
    assert_eq!(
        unsafe { fhit_cn(0.01, 0.1, 64, ptr::null_mut(), &mut hi) },
        FhitStatus::NullPointer
    );
}

#[test]
fn continue_validate_and_read_bounds() {
    let c = solve(0.5);
    unsafe {
        assert_eq!(fhit_candidate_n(c), 64);
        assert_eq!(fhit_candidate_eps_map(c), 0.5);
        let mut cert = ptr::null_mut();
        let s = fhit_validate(c, 1e-2, 1e-1, 1.5e-2, 0, 0.0, &mut cert);
        assert_eq!(s, FhitStatus::Ok, "{}", last_error());
        assert_eq!(
            CStr::from_ptr(fhit_certificate_verdict(cert)).to_str().unwrap(),
            "validated"
        );
        let mut sigma = 0.0;
        assert_eq!(fhit_certificate_get(cert, FhitBound::Sigma, &mut sigma), FhitStatus::Ok);
        assert!(sigma > 1.0 && sigma < 4.2);
        let (mut rm, mut rp) = (0.0, 0.0);
        fhit_certificate_get(cert, FhitBound::RMinus, &mut rm);
        fhit_certificate_get(cert, FhitBound::RPlus, &mut rp);
        assert!(0.0 < rm && rm < rp && rp <= 1.5e-2);
        fhit_certificate_free(cert);
        fhit_candidate_free(c);
    }
}

#[test]
fn failed_validation_keeps_partial_certificate() {
    let c = solve(0.5);
    unsafe {
        let mut cert = ptr::null_mut();
        let s = fhit_validate(c, 1e-2, 1.05e-2, 1.5e-2, 0, 0.0, &mut cert);
        assert_eq!(s, FhitStatus::ValidationFailed);
        assert!(!cert.is_null());
        let v = CStr::from_ptr(fhit_certificate_verdict(cert))
            .to_str()
            .unwrap()
            .to_owned();
        assert!(v == "failed:GapClosed" || v == "failed:NoValidRadius", "{v}");
        let mut x = 0.0;
        assert_eq!(
            fhit_certificate_get(cert, FhitBound::RPlus, &mut x),
            FhitStatus::NotAvailable
        );
        fhit_certificate_free(cert);
        fhit_candidate_free(c);
    }
}

#[test]
fn save_load_round_trip() {
    let c = solve(0.25);
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("c.fcf").to_str().unwrap()).unwrap();
    unsafe {
        assert_eq!(fhit_candidate_save(c, path.as_ptr()), FhitStatus::Ok);
        let mut d = ptr::null_mut();
        assert_eq!(fhit_candidate_load(path.as_ptr(), &mut d), FhitStatus::Ok);
        assert_eq!(fhit_candidate_n(d), 64);
        assert_eq!(fhit_candidate_eps_map(d), 0.25);
        fhit_candidate_free(d);
        fhit_candidate_free(c);
    }
}

#[test]
fn load_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = CString::new(dir.path().join("none.fcf").to_str().unwrap()).unwrap();
    let bad = dir.path().join("bad.fcf");
    std::fs::write(&bad, "not a candidate\n").unwrap();
    let bad = CString::new(bad.to_str().unwrap()).unwrap();
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(fhit_candidate_load(missing.as_ptr(), &mut d), FhitStatus::IoError);
        assert!(d.is_null());
        assert_eq!(fhit_candidate_load(bad.as_ptr(), &mut d), FhitStatus::ParseError);
        assert!(last_error().contains("line 1"));
        assert_eq!(fhit_candidate_load(ptr::null(), &mut d), FhitStatus::NullPointer);
        assert_eq!(fhit_candidate_n(ptr::null()), 0);
        fhit_candidate_free(ptr::null_mut());
        fhit_certificate_free(ptr::null_mut());
    }
}

#[test]
fn continuation_failure_is_numeric() {
    let sched = [64usize];
    let mut c = ptr::null_mut();
    let s = unsafe { fhit_continue(1.3, 0.0, 2.0, 10, sched.as_ptr(), 1, &mut c) };
    assert_eq!(s, FhitStatus::NumericError);
    assert!(c.is_null());
    assert!(last_error().contains("continuation failed"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/fhit.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in [
        "fhit_cn",
        "fhit_continue",
        "fhit_validate",
        "fhit_certificate_get",
        "fhit_last_error",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("t.c");
    std::fs::write(
        &src,
        format!("#include \"{header}\"\nint main(void) {{ return FHIT_STATUS_OK; }}\n"),
    )
    .unwrap();
    match Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"])
        .arg(&src)
        .status()
    {
        Ok(st) => assert!(st.success()),
        Err(_) => eprintln!("no C compiler; syntax check skipped"),
    }
}
