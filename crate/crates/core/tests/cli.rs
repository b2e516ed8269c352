//! The binary against direct library calls.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use laguerre_spectral::samples::{read_samples, write_samples};
use laguerre_spectral::transform::node_grid;
use laguerre_spectral::{
    analyze, analyze_samples, apply_e_coeff, convolve_coeff, decay_report, extend_nd, gauss_laguerre_rule,
    kernel_apply, kernel_from_function, seeley_weights, synthesize, CoefficientTensor, FunctionHandle, KernelMatrix,
    MultiIndex, Point,
};
use tempfile::TempDir;

fn laguerre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laguerre")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = laguerre(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn tensor(path: &str) -> CoefficientTensor {
    let text = fs::read_to_string(path).unwrap();
    let t = CoefficientTensor::from_json(&text).unwrap();
    // written files re-serialize to the same bytes
    assert_eq!(t.to_json(), text.trim_end());
    t
}

fn write(path: &str, text: &str) {
    fs::write(Path::new(path), text).unwrap();
}

#[test]
fn convolve_half_exponentials() {
    let dir = TempDir::new().unwrap();
    let e0 = CoefficientTensor::unit(MultiIndex::from([6]), &MultiIndex::from([0])).unwrap();
    write(&p(&dir, "a.json"), &e0.to_json());
    ok(&["convolve", "--a", &p(&dir, "a.json"), "--b", &p(&dir, "a.json"), "--out", &p(&dir, "c.json")]);
    let c = tensor(&p(&dir, "c.json"));
    assert_eq!(c.values(), &[1.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
    assert_eq!(c, convolve_coeff(&e0, &e0).unwrap().coefficients);
}

#[test]
fn analyze_csv_samples_at_printed_nodes() {
    let dir = TempDir::new().unwrap();
    let nodes = ok(&["nodes", "--rule", "12", "--dims", "2"]);
    assert_eq!(nodes.lines().count(), 1 + 144);
    assert_eq!(nodes.lines().next(), Some("x1,x2"));

    let rule = gauss_laguerre_rule(12).unwrap();
    let grid = node_grid(&rule, 2);
    let f = FunctionHandle::gaussian(2);
    let values: Vec<f64> = grid.iter().map(|x| f.eval(x)).collect();
    let mut csv = Vec::new();
    write_samples(&mut csv, 2, &grid, &values).unwrap();
    write(&p(&dir, "s.csv"), std::str::from_utf8(&csv).unwrap());

    ok(&["analyze", "--input", &p(&dir, "s.csv"), "--bounds", "8", "--rule", "12", "--out", &p(&dir, "c.json")]);
    let lib = analyze_samples(&values, &MultiIndex::from([8, 8]), &rule).unwrap();
    assert_eq!(tensor(&p(&dir, "c.json")), lib);
    assert_eq!(lib, analyze(&f, &MultiIndex::from([8, 8]), &rule).unwrap());

    // incomplete node coverage is a validation error
    let short: String = std::str::from_utf8(&csv).unwrap().lines().take(20).map(|l| format!("{l}\n")).collect();
    write(&p(&dir, "short.csv"), &short);
    let out = laguerre(&["analyze", "--input", &p(&dir, "short.csv"), "--bounds", "8", "--rule", "12"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_named_function_then_synthesize() {
    let dir = TempDir::new().unwrap();
    ok(&["analyze", "--fn", "expdecay:0.75", "--bounds", "20", "--rule", "40", "--out", &p(&dir, "c.json")]);
    let c = tensor(&p(&dir, "c.json"));
    let rule = gauss_laguerre_rule(40).unwrap();
    assert_eq!(c, analyze(&FunctionHandle::exp_decay(1, 0.75), &MultiIndex::from([20]), &rule).unwrap());

    let out = ok(&["synth", "--coeffs", &p(&dir, "c.json"), "--grid", "0:5:11"]);
    let s = read_samples(out.as_bytes()).unwrap();
    assert_eq!(s.points.len(), 11);
    for (x, v) in s.points.iter().zip(&s.values) {
        assert_eq!(*v, synthesize(&c, &Point::new(x.clone()).unwrap()).unwrap());
    }
}

#[test]
fn apply_e_and_classify() {
    let dir = TempDir::new().unwrap();
    let c = CoefficientTensor::from_fn(MultiIndex::from([4, 3]), |n| 1.0 / (1.0 + n.total() as f64));
    write(&p(&dir, "c.json"), &c.to_json());
    ok(&["apply-e", "--coeffs", &p(&dir, "c.json"), "--power", "2", "--out", &p(&dir, "e.json")]);
    assert_eq!(tensor(&p(&dir, "e.json")), apply_e_coeff(&c, 2).unwrap());

    let report = ok(&["classify", "--coeffs", &p(&dir, "c.json"), "--k-max", "3"]);
    let lib = serde_json::to_string_pretty(&decay_report(&c, 3).unwrap()).unwrap();
    assert_eq!(report.trim_end(), lib);

    let pts = ok(&["apply-e", "--fn", "laguerre:2", "--grid", "1:4:4"]);
    let s = read_samples(pts.as_bytes()).unwrap();
    for (x, v) in s.points.iter().zip(&s.values) {
        let expect = -2.5 * laguerre_spectral::basis::laguerre_fn(2, x[0]);
        assert!((v - expect).abs() < 1e-6);
    }
    // the stencil cannot be centred at the boundary
    assert_eq!(laguerre(&["apply-e", "--fn", "laguerre:2", "--grid", "0:4:4"]).status.code(), Some(2));
}

#[test]
fn kernel_apply_from_function_and_file() {
    let dir = TempDir::new().unwrap();
    let a = CoefficientTensor::from_fn(MultiIndex::from([5]), |n| (n[0] as f64 - 2.0) * 0.5);
    write(&p(&dir, "a.json"), &a.to_json());
    ok(&[
        "kernel-apply",
        "--kernel-fn",
        "expdecay:0.5",
        "--row-bounds",
        "4",
        "--col-bounds",
        "6",
        "--rule",
        "10",
        "--coeffs",
        &p(&dir, "a.json"),
        "--save-kernel",
        &p(&dir, "k.json"),
        "--out",
        &p(&dir, "o1.json"),
    ]);
    let k_text = fs::read_to_string(p(&dir, "k.json")).unwrap();
    let k = KernelMatrix::from_json(&k_text).unwrap();
    assert_eq!(k.to_json(), k_text.trim_end());
    let rule = gauss_laguerre_rule(10).unwrap();
    let lib_k = kernel_from_function(&FunctionHandle::exp_decay(2, 0.5), &MultiIndex::from([4]), &MultiIndex::from([6]), &rule)
        .unwrap();
    assert_eq!(k, lib_k);
    let o1 = tensor(&p(&dir, "o1.json"));
    assert_eq!(o1, kernel_apply(&lib_k, &a).unwrap());

    ok(&["kernel-apply", "--kernel", &p(&dir, "k.json"), "--coeffs", &p(&dir, "a.json"), "--out", &p(&dir, "o2.json")]);
    assert_eq!(tensor(&p(&dir, "o2.json")), o1);

    // coefficient box larger than the kernel's columns
    let big = CoefficientTensor::zeros(MultiIndex::from([9]));
    write(&p(&dir, "big.json"), &big.to_json());
    let out = laguerre(&["kernel-apply", "--kernel", &p(&dir, "k.json"), "--coeffs", &p(&dir, "big.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extend_samples_and_report() {
    let dir = TempDir::new().unwrap();
    let out = ok(&[
        "extend",
        "--fn",
        "laguerre:1",
        "--order",
        "3",
        "--grid",
        "-1.5:1.5:13",
        "--report",
        &p(&dir, "r.json"),
    ]);
    let s = read_samples(out.as_bytes()).unwrap();
    let g = extend_nd(&FunctionHandle::laguerre(MultiIndex::from([1])), &seeley_weights(3).unwrap());
    for (x, v) in s.points.iter().zip(&s.values) {
        assert_eq!(*v, g.eval(x));
    }
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(p(&dir, "r.json")).unwrap()).unwrap();
    let mismatch = report["mismatch"].as_array().unwrap();
    assert_eq!(mismatch.len(), 3);
    assert!(mismatch.iter().all(|m| m.as_f64().unwrap() < 1e-10));
    assert!(report["seminorm"].as_f64().unwrap().is_finite());
}

#[test]
fn eval_basis_value() {
    let v: f64 = ok(&["eval-basis", "--n", "3,1", "--x", "0.5,2"]).trim().parse().unwrap();
    let expect = laguerre_spectral::basis::laguerre_fn(3, 0.5) * laguerre_spectral::basis::laguerre_fn(1, 2.0);
    assert_eq!(v, expect);
}

#[test]
fn selftest_prints_table_and_succeeds() {
    let out = ok(&["--threads", "2", "selftest"]);
    let rows: Vec<&str> = out.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert!(rows.len() >= 5);
    assert!(rows.iter().all(|l| l.starts_with("PASS")), "{out}");
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(laguerre(&["analyze", "--unknown-flag"]).status.code(), Some(2));
    assert_eq!(laguerre(&["frobnicate"]).status.code(), Some(2));
    write(&p(&dir, "bad.json"), "{\"dims\": 1, \"degree_bounds\": [2], \"values\": [1.0,");
    let out = laguerre(&["classify", "--coeffs", &p(&dir, "bad.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));
    write(&p(&dir, "bad.csv"), "x1,f\n0.5,oops\n");
    assert_eq!(laguerre(&["analyze", "--input", &p(&dir, "bad.csv"), "--bounds", "2"]).status.code(), Some(1));
    assert_eq!(laguerre(&["analyze", "--fn", "laguerre:1", "--bounds", "9", "--rule", "3"]).status.code(), Some(2));
}
