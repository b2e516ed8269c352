//! C ABI for `laguerre-spectral`.
//!
//! Conventions:
//!
//! - Every fallible call returns an [`LsStatus`]; results go through out
//!   pointers, which are written only on success.
//! - On failure, [`ls_last_error`] returns a message for the calling thread,
//!   valid until that thread's next failing call.
//! - Objects are opaque handles created by `*_new`/`*_from_*` calls and
//!   released with the matching `*_free`. Strings returned by the library
//!   are released with [`ls_string_free`].
//! - Panics never cross the boundary; they surface as `LS_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use laguerre_spectral::basis::{laguerre_fn, laguerre_fn_deriv};
use laguerre_spectral::{
    analyze, analyze_samples, apply_e_coeff, convolve_coeff, decay_report, gauss_laguerre_rule, kernel_apply,
    seeley_weights, synthesize, tensor_coeff, CoefficientTensor, DecayClass, Domain, Error, FunctionHandle,
    KernelMatrix, MultiIndex, Point, QuadratureRule,
};

/// Result of a fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsStatus {
    Ok = 0,
    NullPointer = 1,
    /// Inconsistent arguments: dimensions, bounds, rule too small, order.
    InvalidArgument = 2,
    /// Malformed JSON or text input.
    Parse = 3,
    Io = 4,
    Runtime = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsDecayClass {
    Rapid = 0,
    Slow = 1,
    Divergent = 2,
}

/// Gauss–Laguerre rule.
pub struct LsRule(QuadratureRule);

/// Coefficient tensor.
pub struct LsCoefficients(CoefficientTensor);

/// Kernel coefficient matrix.
pub struct LsKernel(KernelMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LsStatus {
    match e {
        _ if e.is_validation() => LsStatus::InvalidArgument,
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => LsStatus::Parse,
        Error::Io(_) => LsStatus::Io,
        _ => LsStatus::Runtime,
    }
}

struct Fail(LsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(LsStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> LsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => LsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LsStatus::Panic
        }
    }
}

unsafe fn reference<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn input_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn store_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s).map_err(|_| Fail(LsStatus::Runtime, "string contains NUL".into()))?.into_raw();
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null("string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail(LsStatus::Parse, "string is not UTF-8".into()))
}

// Copies `src` into a caller buffer of `cap` elements; fails if it is short.
unsafe fn copy_out(src: &[f64], out: *mut f64, cap: usize) -> Result<(), Fail> {
    if cap < src.len() {
        return Err(Fail(LsStatus::InvalidArgument, format!("buffer holds {cap} values, {} needed", src.len())));
    }
    if !src.is_empty() {
        if out.is_null() {
            return Err(null("output buffer"));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    }
    Ok(())
}

/// Message for the last failed call on this thread ("" if none). Owned by
/// the library.
#[no_mangle]
pub extern "C" fn ls_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn ls_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ls_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `e^{-x/2} L_n(x)`.
#[no_mangle]
pub extern "C" fn ls_laguerre_fn(n: usize, x: f64) -> f64 {
    laguerre_fn(n, x)
}

/// `(d/dx)^p [e^{-x/2} L_n(x)]`.
#[no_mangle]
pub extern "C" fn ls_laguerre_fn_deriv(n: usize, p: usize, x: f64) -> f64 {
    laguerre_fn_deriv(n, p, x)
}

// ---- quadrature ----

/// `m`-point Gauss–Laguerre rule for plain `dx` integrals on `(0, ∞)`.
#[no_mangle]
pub unsafe extern "C" fn ls_rule_new(m: usize, out: *mut *mut LsRule) -> LsStatus {
    guard(|| store(out, LsRule(gauss_laguerre_rule(m)?)))
}

#[no_mangle]
pub unsafe extern "C" fn ls_rule_free(rule: *mut LsRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// Number of nodes, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ls_rule_len(rule: *const LsRule) -> usize {
    rule.as_ref().map_or(0, |r| r.0.len())
}

/// Copies the nodes into `out` (capacity `cap`).
#[no_mangle]
pub unsafe extern "C" fn ls_rule_nodes(rule: *const LsRule, out: *mut f64, cap: usize) -> LsStatus {
    guard(|| copy_out(reference(rule, "rule")?.0.nodes(), out, cap))
}

/// Copies the `dx` weights into `out` (capacity `cap`).
#[no_mangle]
pub unsafe extern "C" fn ls_rule_weights(rule: *const LsRule, out: *mut f64, cap: usize) -> LsStatus {
    guard(|| copy_out(reference(rule, "rule")?.0.weights(), out, cap))
}

// ---- coefficient tensors ----

/// Tensor with degree bounds `bounds[0..dims]` and row-major `values`.
#[no_mangle]
pub unsafe extern "C" fn ls_coeffs_new(
    dims: usize,
    bounds: *const usize,
    values: *const f64,
    n_values: usize,
    out: *mut *mut LsCoefficients,
) -> LsStatus {
    guard(|| {
        let b = MultiIndex::new(input_slice(bounds, dims, "bounds")?.to_vec())?;
        let v = input_slice(values, n_values, "values")?.to_vec();
        store(out, LsCoefficients(CoefficientTensor::new(b, v)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ls_coeffs_free(c: *mut LsCoefficients) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of axes, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ls_coeffs_dims(c: *const LsCoefficients) -> usize {
    c.as_ref().map_or(0, |c| c.0.dims())
}

/// Number of stored values, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ls_coeffs_len(c: *const LsCoefficients) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// Copies the degree bounds into `out` (capacity `cap`).
#[no_mangle]
pub unsafe extern "C" fn ls_coeffs_bounds(c: *const LsCoefficients, out: *mut usize, cap: usize) -> LsStatus {
    guard(|| {
        let b = reference(c, "coefficients")?.0.degree_bounds().as_slice();
        if cap < b.len() {
            return Err(Fail(LsStatus::InvalidArgument, format!("buffer holds {cap} bounds, {} needed", b.len())));
        }
        if out.is_null() {
            return Err(null("output buffer"));
        }
        ptr::copy_nonoverlapping(b.as_ptr(), out, b.len());
        Ok(())
    })
}

/// Copies the row-major values into `out` (capacity `cap`).
#[no_mangle]
pub unsafe extern "C" fn ls_coeffs_values(c: *const LsCoefficients, out: *mut f64, cap: usize) -> LsStatus {
    guard(|| copy_out(reference(c, "coefficients")?.0.values(), out, cap))
}

/// Parses `{"dims", "degree_bounds", "values"}`.
#[no_mangle]
pub unsafe extern "C" fn ls_coeffs_from_json(json: *const c_char, out: *mut *mut LsCoefficients) -> LsStatus {
    guard(|| store(out, LsCoefficients(CoefficientTensor::from_json(read_str(json)?)?)))
}

/// Serializes to JSON; free the result with [`ls_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ls_coeffs_to_json(c: *const LsCoefficients, out: *mut *mut c_char) -> LsStatus {
    guard(|| store_string(out, reference(c, "coefficients")?.0.to_json()))
}

// ---- transforms ----

/// Coefficients from samples `f(x_j)` on the row-major `m^dims` node grid
/// of `rule`.
#[no_mangle]
pub unsafe extern "C" fn ls_analyze_samples(
    samples: *const f64,
    n_samples: usize,
    dims: usize,
    bounds: *const usize,
    rule: *const LsRule,
    out: *mut *mut LsCoefficients,
) -> LsStatus {
    guard(|| {
        let b = MultiIndex::new(input_slice(bounds, dims, "bounds")?.to_vec())?;
        let s = input_slice(samples, n_samples, "samples")?;
        store(out, LsCoefficients(analyze_samples(s, &b, &reference(rule, "rule")?.0)?))
    })
}

/// `f(x, dims, user_data)`; may be called concurrently from several threads.
pub type LsEvalFn = Option<unsafe extern "C" fn(x: *const f64, dims: usize, user_data: *mut c_void) -> f64>;

struct Callback {
    f: unsafe extern "C" fn(*const f64, usize, *mut c_void) -> f64,
    data: *mut c_void,
}

// The caller promises the callback is safe for concurrent use.
unsafe impl Send for Callback {}
unsafe impl Sync for Callback {}

/// Coefficients of a caller-supplied function. The callback must be safe
/// to invoke concurrently with the same `user_data`.
#[no_mangle]
pub unsafe extern "C" fn ls_analyze_fn(
    f: LsEvalFn,
    user_data: *mut c_void,
    dims: usize,
    bounds: *const usize,
    rule: *const LsRule,
    out: *mut *mut LsCoefficients,
) -> LsStatus {
    guard(|| {
        let f = f.ok_or_else(|| null("callback"))?;
        let b = MultiIndex::new(input_slice(bounds, dims, "bounds")?.to_vec())?;
        let cb = Callback { f, data: user_data };
        let handle = FunctionHandle::new(dims, Domain::Orthant, move |x: &[f64]| {
            let cb = &cb;
            unsafe { (cb.f)(x.as_ptr(), x.len(), cb.data) }
        });
        store(out, LsCoefficients(analyze(&handle, &b, &reference(rule, "rule")?.0)?))
    })
}

/// `Σ c_n ℒ_n(x)` at a point of the closed orthant.
#[no_mangle]
pub unsafe extern "C" fn ls_synthesize(c: *const LsCoefficients, x: *const f64, dims: usize, out: *mut f64) -> LsStatus {
    guard(|| {
        let p = Point::new(input_slice(x, dims, "point")?.to_vec())?;
        let v = synthesize(&reference(c, "coefficients")?.0, &p)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = v;
        Ok(())
    })
}

/// Coefficients of `f ∗ g` on the common box of `a` and `b`.
#[no_mangle]
pub unsafe extern "C" fn ls_convolve(
    a: *const LsCoefficients,
    b: *const LsCoefficients,
    out: *mut *mut LsCoefficients,
) -> LsStatus {
    guard(|| {
        let conv = convolve_coeff(&reference(a, "a")?.0, &reference(b, "b")?.0)?;
        store(out, LsCoefficients(conv.coefficients))
    })
}

/// Coefficients of `E^power f`.
#[no_mangle]
pub unsafe extern "C" fn ls_apply_e(c: *const LsCoefficients, power: u32, out: *mut *mut LsCoefficients) -> LsStatus {
    guard(|| store(out, LsCoefficients(apply_e_coeff(&reference(c, "coefficients")?.0, power)?)))
}

/// Decay class of a coefficient tensor.
#[no_mangle]
pub unsafe extern "C" fn ls_classify(c: *const LsCoefficients, k_max: u32, out: *mut LsDecayClass) -> LsStatus {
    guard(|| {
        let r = decay_report(&reference(c, "coefficients")?.0, k_max)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = match r.classification {
            DecayClass::Rapid => LsDecayClass::Rapid,
            DecayClass::Slow => LsDecayClass::Slow,
            DecayClass::Divergent => LsDecayClass::Divergent,
        };
        Ok(())
    })
}

/// Full decay report as JSON; free with [`ls_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ls_decay_report_json(c: *const LsCoefficients, k_max: u32, out: *mut *mut c_char) -> LsStatus {
    guard(|| {
        let r = decay_report(&reference(c, "coefficients")?.0, k_max)?;
        store_string(out, serde_json::to_string(&r).map_err(Error::from)?)
    })
}

/// Extension weights `c_1..c_order` (reflection scales are `1..order`).
#[no_mangle]
pub unsafe extern "C" fn ls_seeley_weights(order: usize, out: *mut f64, cap: usize) -> LsStatus {
    guard(|| copy_out(&seeley_weights(order)?.coefficients, out, cap))
}

// ---- kernels ----

#[no_mangle]
pub unsafe extern "C" fn ls_kernel_free(k: *mut LsKernel) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Parses `{"m", "n", "row_bounds", "col_bounds", "entries"}`.
#[no_mangle]
pub unsafe extern "C" fn ls_kernel_from_json(json: *const c_char, out: *mut *mut LsKernel) -> LsStatus {
    guard(|| store(out, LsKernel(KernelMatrix::from_json(read_str(json)?)?)))
}

/// Serializes to JSON; free the result with [`ls_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ls_kernel_to_json(k: *const LsKernel, out: *mut *mut c_char) -> LsStatus {
    guard(|| store_string(out, reference(k, "kernel")?.0.to_json()))
}

/// Rank-one kernel `u ⊗ v`.
#[no_mangle]
pub unsafe extern "C" fn ls_kernel_tensor(
    u: *const LsCoefficients,
    v: *const LsCoefficients,
    out: *mut *mut LsKernel,
) -> LsStatus {
    guard(|| store(out, LsKernel(tensor_coeff(&reference(u, "u")?.0, &reference(v, "v")?.0))))
}

/// `B a`; `a` may be smaller than the kernel's column box.
#[no_mangle]
pub unsafe extern "C" fn ls_kernel_apply(
    k: *const LsKernel,
    a: *const LsCoefficients,
    out: *mut *mut LsCoefficients,
) -> LsStatus {
    guard(|| store(out, LsCoefficients(kernel_apply(&reference(k, "kernel")?.0, &reference(a, "a")?.0)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_are_recorded_per_thread() {
        let mut r: *mut LsRule = ptr::null_mut();
        assert_eq!(unsafe { ls_rule_new(0, &mut r) }, LsStatus::InvalidArgument);
        assert!(r.is_null());
        let msg = unsafe { CStr::from_ptr(ls_last_error()) }.to_str().unwrap().to_string();
        assert!(!msg.is_empty());
        std::thread::spawn(|| {
            assert_eq!(unsafe { CStr::from_ptr(ls_last_error()) }.to_bytes(), b"");
        })
        .join()
        .unwrap();
    }

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::ExtensionOrder(20)), LsStatus::InvalidArgument);
        assert_eq!(status_of(&Error::Parse("x".into())), LsStatus::Parse);
        assert_eq!(status_of(&Error::Runtime("x".into())), LsStatus::Runtime);
    }
}
