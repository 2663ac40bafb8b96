use std::ffi::{CStr, CString};
use std::ptr;

use dynforms_ffi::*;

fn last_error() -> String {
    let p = df_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn model_lifecycle_and_dims() {
    let name = CString::new("sl2-geodesic").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { df_model_new(name.as_ptr(), 0, 2, &mut m) }, DfStatus::Ok);
    assert_eq!(unsafe { df_model_generator_count(m) }, 3);
    let mut dims = [0usize; 4];
    let mut written = 0;
    let s = unsafe { df_model_cohomology_dims(m, DfSubcomplex::Basic, dims.as_mut_ptr(), 4, &mut written) };
    assert_eq!(s, DfStatus::Ok);
    assert_eq!(&dims[..written], &[1, 0, 1, 0]);
    let s = unsafe { df_model_cohomology_dims(m, DfSubcomplex::Invariant, dims.as_mut_ptr(), 2, &mut written) };
    assert_eq!(s, DfStatus::BufferTooSmall);
    assert_eq!(written, 4);

    let mut json = ptr::null_mut();
    let mut passed = false;
    assert_eq!(unsafe { df_model_report_json(m, &mut json, &mut passed) }, DfStatus::Ok);
    assert!(passed);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"schema_version\": 1"));
    unsafe {
        df_string_free(json);
        df_model_free(m);
    }
}

#[test]
fn unknown_model_and_null_arguments() {
    let name = CString::new("nosuch").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { df_model_new(name.as_ptr(), 0, 2, &mut m) }, DfStatus::UnknownModel);
    assert!(m.is_null());
    assert!(last_error().contains("nosuch"));
    assert_eq!(unsafe { df_model_new(ptr::null(), 0, 2, &mut m) }, DfStatus::NullPointer);
    assert_eq!(unsafe { df_model_generator_count(ptr::null()) }, 0);
    unsafe { df_model_free(ptr::null_mut()) };
}

#[test]
fn model_from_json() {
    let json = CString::new(r#"{"generators": ["a", "b"], "d": {}, "iX": {"a": "1"}}"#).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { df_model_from_json(json.as_ptr(), &mut m) }, DfStatus::Ok, "{}", last_error());
    let mut dims = [0usize; 3];
    let mut written = 0;
    let s = unsafe { df_model_cohomology_dims(m, DfSubcomplex::Basic, dims.as_mut_ptr(), 3, &mut written) };
    assert_eq!(s, DfStatus::Ok);
    assert_eq!(dims, [1, 1, 0]);
    unsafe { df_model_free(m) };
    let bad = CString::new("{").unwrap();
    assert_eq!(unsafe { df_model_from_json(bad.as_ptr(), &mut m) }, DfStatus::Parse);
}

#[test]
fn torus_solver_codes() {
    let alpha = CString::new("golden").unwrap();
    let (m, n) = ([1i64, -1], [2i64, -2]);
    let (re, im) = ([0.5f64, 0.5], [0.25f64, -0.25]);
    let (mut fr, mut fi, mut res) = ([0.0; 2], [0.0; 2], 1.0);
    let s = unsafe {
        df_solve_torus(
            alpha.as_ptr(),
            m.as_ptr(),
            n.as_ptr(),
            re.as_ptr(),
            im.as_ptr(),
            2,
            false,
            fr.as_mut_ptr(),
            fi.as_mut_ptr(),
            &mut res,
        )
    };
    assert_eq!(s, DfStatus::Ok);
    assert!(res < 1e-12);
    assert!((fr[0] - fr[1]).abs() < 1e-15 && (fi[0] + fi[1]).abs() < 1e-15);

    let half = CString::new("1/2").unwrap();
    let s = unsafe {
        df_solve_torus(half.as_ptr(), [1i64].as_ptr(), [-2i64].as_ptr(), [1.0].as_ptr(), [0.0].as_ptr(), 1, false,
            fr.as_mut_ptr(), fi.as_mut_ptr(), &mut res)
    };
    assert_eq!(s, DfStatus::Resonance);
    let s = unsafe {
        df_solve_torus(alpha.as_ptr(), [0i64].as_ptr(), [0i64].as_ptr(), [1.0].as_ptr(), [0.0].as_ptr(), 1, false,
            fr.as_mut_ptr(), fi.as_mut_ptr(), &mut res)
    };
    assert_eq!(s, DfStatus::Obstruction);
}

#[test]
fn closed_geodesic() {
    let (mut l, mut i) = (0.0, 0.0);
    let e = 1f64.exp();
    assert_eq!(unsafe { df_closed_geodesic_period(e, 0.0, 0.0, 1.0 / e, &mut l, &mut i) }, DfStatus::Ok);
    assert!((l - 2.0).abs() < 1e-12 && (i - 2.0).abs() < 1e-9);
    let s = unsafe { df_closed_geodesic_period(0.6, -0.8, 0.8, 0.6, &mut l, &mut i) };
    assert_eq!(s, DfStatus::NotHyperbolic);
    assert_eq!(unsafe { df_closed_geodesic_period(2.0, 0.0, 0.0, 2.0, &mut l, &mut i) }, DfStatus::Domain);
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dynforms.h")).unwrap();
    for sym in ["df_model_new", "df_model_free", "df_last_error_message", "df_solve_torus", "typedef struct DfModel DfModel", "DF_STATUS_RESONANCE"] {
        assert!(header.contains(sym), "{sym}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/dynforms.h");
    let Ok(out) = std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header]).output()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
