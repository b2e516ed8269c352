//! The exported functions, called the way a C client would.

use std::ffi::{c_void, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use laguerre_spectral_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ls_last_error()) }.to_string_lossy().into_owned()
}

fn coeffs(bounds: &[usize], values: &[f64]) -> *mut LsCoefficients {
    let mut c = ptr::null_mut();
    let s = unsafe { ls_coeffs_new(bounds.len(), bounds.as_ptr(), values.as_ptr(), values.len(), &mut c) };
    assert_eq!(s, LsStatus::Ok, "{}", last_error());
    c
}

fn values(c: *const LsCoefficients) -> Vec<f64> {
    let n = unsafe { ls_coeffs_len(c) };
    let mut v = vec![0.0; n];
    assert_eq!(unsafe { ls_coeffs_values(c, v.as_mut_ptr(), n) }, LsStatus::Ok);
    v
}

#[test]
fn rule_and_analysis_from_samples() {
    unsafe {
        let mut rule = ptr::null_mut();
        assert_eq!(ls_rule_new(2, &mut rule), LsStatus::Ok);
        assert_eq!(ls_rule_len(rule), 2);
        let mut nodes = [0.0; 2];
        assert_eq!(ls_rule_nodes(rule, nodes.as_mut_ptr(), 2), LsStatus::Ok);
        assert!((nodes[0] - (2.0 - 2f64.sqrt())).abs() < 1e-13);
        assert_eq!(ls_rule_nodes(rule, nodes.as_mut_ptr(), 1), LsStatus::InvalidArgument);

        let mut rule8 = ptr::null_mut();
        assert_eq!(ls_rule_new(8, &mut rule8), LsStatus::Ok);
        let mut n8 = [0.0; 8];
        ls_rule_nodes(rule8, n8.as_mut_ptr(), 8);
        let samples: Vec<f64> = n8.iter().map(|&x| ls_laguerre_fn(3, x)).collect();
        let mut c = ptr::null_mut();
        let bounds = [6usize];
        assert_eq!(ls_analyze_samples(samples.as_ptr(), 8, 1, bounds.as_ptr(), rule8, &mut c), LsStatus::Ok);
        let v = values(c);
        for (n, x) in v.iter().enumerate() {
            assert!((x - if n == 3 { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
        let mut y = 0.0;
        assert_eq!(ls_synthesize(c, [1.7].as_ptr(), 1, &mut y), LsStatus::Ok);
        assert!((y - ls_laguerre_fn(3, 1.7)).abs() < 1e-12);
        assert_eq!(ls_synthesize(c, [1.7, 2.0].as_ptr(), 2, &mut y), LsStatus::InvalidArgument);

        ls_coeffs_free(c);
        ls_rule_free(rule);
        ls_rule_free(rule8);
    }
}

unsafe extern "C" fn half_exp(x: *const f64, dims: usize, scale: *mut c_void) -> f64 {
    let s = *(scale as *const f64);
    let x = std::slice::from_raw_parts(x, dims);
    s * (-0.5 * x.iter().sum::<f64>()).exp()
}

#[test]
fn callback_analysis() {
    unsafe {
        let mut rule = ptr::null_mut();
        ls_rule_new(10, &mut rule);
        let mut scale = 3.0f64;
        let bounds = [3usize, 3];
        let mut c = ptr::null_mut();
        let s = ls_analyze_fn(Some(half_exp), (&mut scale as *mut f64).cast(), 2, bounds.as_ptr(), rule, &mut c);
        assert_eq!(s, LsStatus::Ok, "{}", last_error());
        let v = values(c);
        assert!((v[0] - 3.0).abs() < 1e-12);
        assert!(v[1..].iter().all(|x| x.abs() < 1e-12));
        assert_eq!(ls_analyze_fn(None, ptr::null_mut(), 2, bounds.as_ptr(), rule, &mut c), LsStatus::NullPointer);
        ls_coeffs_free(c);
        ls_rule_free(rule);
    }
}

#[test]
fn convolution_operator_and_decay() {
    unsafe {
        let e0 = coeffs(&[5], &[1.0, 0.0, 0.0, 0.0, 0.0]);
        let mut c = ptr::null_mut();
        assert_eq!(ls_convolve(e0, e0, &mut c), LsStatus::Ok);
        assert_eq!(values(c), vec![1.0, -1.0, 0.0, 0.0, 0.0]);

        let mut e = ptr::null_mut();
        assert_eq!(ls_apply_e(e0, 1, &mut e), LsStatus::Ok);
        assert_eq!(values(e)[0], -0.5);
        assert_eq!(ls_apply_e(e0, 0, &mut e), LsStatus::InvalidArgument);

        let mut class = LsDecayClass::Divergent;
        assert_eq!(ls_classify(e0, 4, &mut class), LsStatus::Ok);
        assert_eq!(class, LsDecayClass::Rapid);
        let ones = coeffs(&[16], &[1.0; 16]);
        assert_eq!(ls_classify(ones, 4, &mut class), LsStatus::Ok);
        assert_eq!(class, LsDecayClass::Slow);
        let mut json = ptr::null_mut();
        assert_eq!(ls_decay_report_json(ones, 2, &mut json), LsStatus::Ok);
        assert!(CStr::from_ptr(json).to_str().unwrap().contains("\"classification\":\"slow\""));
        ls_string_free(json);

        for p in [e0, c, e, ones] {
            ls_coeffs_free(p);
        }
    }
}

#[test]
fn json_round_trips_and_parse_errors() {
    unsafe {
        let c = coeffs(&[2, 2], &[0.1, 0.2, 1.0 / 3.0, -4.5e-300]);
        let mut s = ptr::null_mut();
        assert_eq!(ls_coeffs_to_json(c, &mut s), LsStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(ls_coeffs_from_json(s, &mut back), LsStatus::Ok);
        assert_eq!(values(back), values(c));
        let mut b = [0usize; 2];
        assert_eq!(ls_coeffs_bounds(back, b.as_mut_ptr(), 2), LsStatus::Ok);
        assert_eq!(b, [2, 2]);
        assert_eq!(ls_coeffs_dims(back), 2);
        ls_string_free(s);

        let bad = CString::new("{\"dims\":1,").unwrap();
        assert_eq!(ls_coeffs_from_json(bad.as_ptr(), &mut back), LsStatus::Parse);
        assert!(!last_error().is_empty());
        assert_eq!(ls_coeffs_from_json(ptr::null(), &mut back), LsStatus::NullPointer);
        ls_coeffs_free(c);
    }
}

#[test]
fn kernels() {
    unsafe {
        let u = coeffs(&[3], &[1.0, 2.0, 3.0]);
        let v = coeffs(&[2], &[0.5, -1.0]);
        let mut k = ptr::null_mut();
        assert_eq!(ls_kernel_tensor(u, v, &mut k), LsStatus::Ok);
        let a = coeffs(&[2], &[2.0, 1.0]);
        let mut out = ptr::null_mut();
        assert_eq!(ls_kernel_apply(k, a, &mut out), LsStatus::Ok);
        assert_eq!(values(out), vec![0.0, 0.0, 0.0]);

        let mut json = ptr::null_mut();
        assert_eq!(ls_kernel_to_json(k, &mut json), LsStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_string();
        assert!(text.starts_with("{\"m\":1,\"n\":1,"));
        let mut k2 = ptr::null_mut();
        assert_eq!(ls_kernel_from_json(json, &mut k2), LsStatus::Ok);
        ls_string_free(json);

        let big = coeffs(&[3], &[1.0, 1.0, 1.0]);
        assert_eq!(ls_kernel_apply(k2, big, &mut out), LsStatus::InvalidArgument);
        for p in [u, v, a, out, big] {
            ls_coeffs_free(p);
        }
        ls_kernel_free(k);
        ls_kernel_free(k2);
    }
}

#[test]
fn extension_weights() {
    let mut w = [0.0; 4];
    assert_eq!(unsafe { ls_seeley_weights(4, w.as_mut_ptr(), 4) }, LsStatus::Ok);
    assert_eq!(w, [10.0, -20.0, 15.0, -4.0]);
    assert_eq!(unsafe { ls_seeley_weights(13, w.as_mut_ptr(), 4) }, LsStatus::InvalidArgument);
    assert!(last_error().contains("13"));
}

#[test]
fn derivative_entry_point() {
    assert_eq!(ls_laguerre_fn_deriv(1, 1, 0.0), -1.5);
    assert_eq!(unsafe { CStr::from_ptr(ls_version()) }.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/laguerre_spectral.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    for decl in [
        "typedef struct LsCoefficients LsCoefficients;",
        "typedef struct LsRule LsRule;",
        "typedef struct LsKernel LsKernel;",
        "LS_STATUS_OK = 0",
        "LS_STATUS_INVALID_ARGUMENT = 2",
        "LsStatus ls_convolve(",
        "LsStatus ls_analyze_fn(",
        "const char *ls_last_error(void);",
        "void ls_coeffs_free(struct LsCoefficients *c);",
    ] {
        assert!(h.contains(decl), "header lacks {decl}");
    }
}

#[test]
fn header_compiles_as_c() {
    let src = std::env::temp_dir().join(format!("ls_header_check_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"laguerre_spectral.h\"\nint main(void) { LsRule *r = 0; return ls_rule_new(4, &r) == LS_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let out = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .output();
    let _ = std::fs::remove_file(&src);
    match out {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(e) => panic!("no C compiler available to check the header: {e}"),
    }
}
