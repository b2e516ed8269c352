//! Laguerre polynomials and Laguerre functions.
//!
//! `L_n` are the Laguerre polynomials, orthogonal on (0, ∞) against `e^{-x}`.
//! The Laguerre functions `ℒ_n(x) = L_n(x) e^{-x/2}` form an orthonormal basis
//! of L²(0, ∞); the d-dimensional functions are coordinate products.
//!
//! All evaluations use the three-term recurrence
//!
//! ```text
//! (k+1) L^α_{k+1}(x) = (2k+1+α-x) L^α_k(x) - (k+α) L^α_{k-1}(x)
//! ```
//!
//! For the weighted functions the recurrence runs on `e^{-x/2} L^α_k(x)`
//! directly, so the large unweighted values never materialize.

use crate::error::{check_dims, Result};
use crate::multi_index::{MultiIndex, Point};

// e^{-x/2} underflows past this; switch to the log-scaled ladder.
const WEIGHT_UNDERFLOW_X: f64 = 1400.0;
const RESCALE: f64 = 1e200;

/// `L_n(x)`.
pub fn laguerre_poly(n: usize, x: f64) -> f64 {
    generalized_poly(0, n, x)
}

/// `L¹_n(x)`, the order-1 generalized Laguerre polynomial.
pub fn laguerre1_poly(n: usize, x: f64) -> f64 {
    generalized_poly(1, n, x)
}

fn generalized_poly(alpha: usize, n: usize, x: f64) -> f64 {
    let a = alpha as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ℒ_n(x) = L_n(x) e^{-x/2}`.
pub fn laguerre_fn(n: usize, x: f64) -> f64 {
    let mut out = vec![0.0; n + 1];
    weighted_ladder(0, x, &mut out);
    out[n]
}

/// `ℒ_0(x), …, ℒ_{nmax}(x)` in one recurrence pass.
pub fn laguerre_fn_all(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    weighted_ladder(0, x, &mut out);
    out
}

/// Fills `out[k] = e^{-x/2} L^α_k(x)` for `k < out.len()`.
pub(crate) fn weighted_ladder(alpha: usize, x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    if x > WEIGHT_UNDERFLOW_X {
        scaled_ladder(alpha, x, out);
        return;
    }
    let a = alpha as f64;
    let w = (-0.5 * x).exp();
    out[0] = w;
    if out.len() == 1 {
        return;
    }
    out[1] = (1.0 + a - x) * w;
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0 + a - x) * out[k] - (kf + a) * out[k - 1]) / (kf + 1.0);
    }
}

// Unweighted recurrence with a running log-scale; each output is weighted
// as soon as it is produced.
fn scaled_ladder(alpha: usize, x: f64, out: &mut [f64]) {
    let a = alpha as f64;
    let mut log_scale = -0.5 * x;
    let mut prev = 1.0;
    out[0] = log_scale.exp();
    if out.len() == 1 {
        return;
    }
    let mut cur = 1.0 + a - x;
    out[1] = weighted(cur, log_scale);
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
        out[k + 1] = weighted(cur, log_scale);
    }
}

// v·e^{s} without passing through a subnormal e^{s}
fn weighted(v: f64, log_scale: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    v.signum() * (v.abs().ln() + log_scale).exp()
}

/// `(d/dx)^p ℒ_n(x)`.
///
/// Uses `d/dx [e^{-x/2} L^α_n] = -½ e^{-x/2} L^α_n - e^{-x/2} L^{α+1}_{n-1}`;
/// the two terms commute, so
/// `D^p ℒ_n = Σ_j C(p,j) (-½)^{p-j} (-1)^j e^{-x/2} L^{(j)}_{n-j}`.
pub fn laguerre_fn_deriv(n: usize, p: usize, x: f64) -> f64 {
    if p == 0 {
        return laguerre_fn(n, x);
    }
    let mut ladder = vec![0.0; n + 1];
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 0..=p.min(n) {
        weighted_ladder(j, x, &mut ladder[..=n - j]);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += binom * (-0.5f64).powi((p - j) as i32) * sign * ladder[n - j];
        binom = binom * (p - j) as f64 / (j + 1) as f64;
    }
    sum
}

/// `(d/dx)^p ℒ_n(x)` for every `n ≤ nmax`.
pub fn laguerre_fn_deriv_all(nmax: usize, p: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    let mut ladder = vec![0.0; nmax + 1];
    let mut binom = 1.0;
    for j in 0..=p.min(nmax) {
        weighted_ladder(j, x, &mut ladder[..=nmax - j]);
        let c = binom * (-0.5f64).powi((p - j) as i32) * if j % 2 == 0 { 1.0 } else { -1.0 };
        for n in j..=nmax {
            out[n] += c * ladder[n - j];
        }
        binom = binom * (p - j) as f64 / (j + 1) as f64;
    }
    out
}

/// `ℒ_n(x) = ∏ᵢ ℒ_{n_i}(x_i)`.
pub fn laguerre_fn_multi(n: &MultiIndex, x: &Point) -> Result<f64> {
    check_dims(n.dims(), x.dims())?;
    Ok(n.as_slice()
        .iter()
        .zip(x.iter())
        .map(|(&ni, &xi)| laguerre_fn(ni, xi))
        .product())
}

/// Mixed partial `D^p ℒ_n(x)` of the product basis function.
pub fn laguerre_fn_multi_deriv(n: &MultiIndex, p: &[usize], x: &[f64]) -> f64 {
    n.as_slice()
        .iter()
        .zip(p)
        .zip(x)
        .map(|((&ni, &pi), &xi)| laguerre_fn_deriv(ni, pi, xi))
        .product()
}
