use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use ppoly_ffi::*;

fn ctx(bits: u32) -> *mut PpolyContext {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { ppoly_context_new(bits, &mut c) }, PpolyStatus::Ok);
    c
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ppoly_last_error()) }.to_string_lossy().into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { ppoly_string_free(s) };
    out
}

#[test]
fn delta_lvalue_and_period_polynomial() {
    let c = ctx(128);
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(ppoly_form_eigen(c, 12, 0, &mut f), PpolyStatus::Ok);
        assert_eq!(ppoly_form_weight(f), 12);
        let (mut re, mut im, mut err) = (0.0, 0.0, 0.0);
        assert_eq!(ppoly_lvalue(c, f, 6.0, 0, &mut re, &mut im, &mut err), PpolyStatus::Ok);
        assert!((re - 1.5448793603950272e-3).abs() < 1e-15, "{re}");
        assert_eq!(im, 0.0);

        let fam = CString::new("r").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(ppoly_poly_build(c, fam.as_ptr(), f, 0, 0, ptr::null(), &mut p), PpolyStatus::Ok);
        let (mut lo, mut hi) = (9, 9);
        assert_eq!(ppoly_poly_exponents(p, &mut lo, &mut hi), PpolyStatus::Ok);
        assert_eq!((lo, hi), (0, 10));
        // r_Delta has real odd and imaginary even coefficients
        let (mut a, mut b) = (0.0, 0.0);
        ppoly_poly_coeff(p, 5, &mut a, &mut b);
        assert!(a > 0.38 && b == 0.0);

        let pol = CString::new("none").unwrap();
        let mut v = PpolyVerdict::Fail;
        let mut js = ptr::null_mut();
        assert_eq!(ppoly_zeros(c, p, pol.as_ptr(), 1e-20, 1e-3, &mut v, &mut js), PpolyStatus::Ok);
        assert_eq!(v, PpolyVerdict::Pass);
        let report: serde_json::Value = serde_json::from_str(&take(js)).unwrap();
        assert_eq!(report["verdict"], "pass");

        ppoly_poly_free(p);
        ppoly_form_free(f);
        ppoly_context_free(c);
    }
}

#[test]
fn errors_are_reported() {
    let c = ctx(128);
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(ppoly_form_eigen(c, 12, 3, &mut f), PpolyStatus::InvalidArgument);
        assert!(last_error().contains("eigenforms"));
        assert_eq!(ppoly_form_eigen(ptr::null(), 12, 0, &mut f), PpolyStatus::NullPointer);
        assert_eq!(ppoly_form_eisenstein(c, 7, &mut f), PpolyStatus::InvalidArgument);

        let fam = CString::new("q").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(ppoly_poly_build(c, fam.as_ptr(), ptr::null(), 12, 1, ptr::null(), &mut p), PpolyStatus::NullPointer);
        let bogus = CString::new("bogus").unwrap();
        assert_eq!(ppoly_poly_build(c, bogus.as_ptr(), ptr::null(), 12, 1, ptr::null(), &mut p), PpolyStatus::InvalidArgument);

        let mut v = PpolyVerdict::Pass;
        let mut js = ptr::null_mut();
        assert_eq!(ppoly_verify(bogus.as_ptr(), 0, 0, &mut v, &mut js), PpolyStatus::InvalidArgument);
        assert!(last_error().contains("bogus"));
        ppoly_context_free(c);
    }
    assert_eq!(unsafe { ppoly_context_new(8, &mut ptr::null_mut()) }, PpolyStatus::InvalidArgument);
}

#[test]
fn eisenstein_family_without_form() {
    let c = ctx(128);
    unsafe {
        let fam = CString::new("lalin-smyth").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(ppoly_poly_build(c, fam.as_ptr(), ptr::null(), 16, 0, ptr::null(), &mut p), PpolyStatus::Ok);
        let mut js = ptr::null_mut();
        assert_eq!(ppoly_poly_json(p, &mut js), PpolyStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(js)).unwrap();
        assert_eq!(v["weight"], 16);
        ppoly_poly_free(p);
        ppoly_context_free(c);
    }
}

#[test]
fn verify_small_suite() {
    let name = CString::new("bernoulli-identities").unwrap();
    let mut v = PpolyVerdict::Fail;
    let mut js = ptr::null_mut();
    assert_eq!(unsafe { ppoly_verify(name.as_ptr(), 0, 12, &mut v, &mut js) }, PpolyStatus::Ok);
    assert_eq!(v, PpolyVerdict::Pass);
    let report: serde_json::Value = serde_json::from_str(&take(js)).unwrap();
    assert_eq!(report["suite"], "bernoulli-identities");
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ppoly.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["ppoly_context_new", "ppoly_poly_build", "ppoly_zeros", "ppoly_verify", "ppoly_last_error"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(&src, "#include \"ppoly.h\"\nint main(void) { PpolyContext *c = 0; return ppoly_context_new(64, &c); }\n").unwrap();
    match Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
    {
        Ok(s) => assert!(s.success()),
        Err(_) => eprintln!("no C compiler; skipped"),
    }
}
