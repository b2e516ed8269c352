//! Extension of functions from the orthant to all of ℝ^d.
//!
//! Along one axis, a function `f` on `[0, ∞)` is continued to `x < 0` by a
//! finite sum of dilated reflections
//!
//! ```text
//! g(x) = χ(x / w) · Σ_{k=1}^{N} c_k f(−b_k x),     b_k = k
//! ```
//!
//! where the `c_k` solve `Σ_k c_k (−b_k)^j = 1` for `j < N`, so the
//! one-sided derivatives of `g` and `f` agree at 0 up to order `N−1`, and
//! the cutoff `χ` (≡ 1 near 0, ≡ 0 below `−w`) keeps `g` rapidly decreasing.
//! The d-dimensional operator applies this along axis 1, then axis 2, and so
//! on; restricted to the orthant it is the identity.
//!
//! A coordinate equal to `-0.0` selects the reflected branch. Evaluating
//! derivatives there gives one-sided limits from below.

mod cutoff;
mod vandermonde;

use std::sync::Arc;

use serde::Serialize;

pub use cutoff::{cutoff, cutoff_derivatives};
pub use vandermonde::solve_dual;

use crate::error::{check_dims, Error, Result};
use crate::fd::{default_step, Side, Stencil};
use crate::function::{DerivEvaluator, Domain, Evaluator, FunctionHandle};
use crate::multi_index::Point;
use crate::transform::schwartz_seminorm;

pub const MAX_ORDER: usize = 12;
pub const DEFAULT_CUTOFF_WIDTH: f64 = 1.0;

/// Reflection scales `b_k`, weights `c_k` and cutoff width of an order-N
/// extension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionWeights {
    pub order: usize,
    pub scales: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub cutoff_width: f64,
}

impl ExtensionWeights {
    pub fn with_cutoff_width(mut self, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::invalid("cutoff width must be positive"));
        }
        self.cutoff_width = width;
        Ok(self)
    }

    /// `max_{j<N} |Σ_k c_k (−b_k)^j − 1|`.
    pub fn residual(&self) -> f64 {
        (0..self.order)
            .map(|j| {
                let s: f64 = self
                    .coefficients
                    .iter()
                    .zip(&self.scales)
                    .map(|(c, b)| c * (-b).powi(j as i32))
                    .sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Weights for derivative matching up to order `N−1`, `1 ≤ N ≤ 12`.
pub fn seeley_weights(order: usize) -> Result<ExtensionWeights> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::ExtensionOrder(order));
    }
    let scales: Vec<f64> = (1..=order).map(|k| k as f64).collect();
    let nodes: Vec<f64> = scales.iter().map(|b| -b).collect();
    let coefficients = solve_dual(&nodes, &vec![1.0; order]);
    Ok(ExtensionWeights { order, scales, coefficients, cutoff_width: DEFAULT_CUTOFF_WIDTH })
}

#[inline]
fn reflected(x: f64) -> bool {
    x < 0.0 || (x == 0.0 && x.is_sign_negative())
}

/// Extends a one-dimensional function to the whole line.
pub fn extend_1d(f: &FunctionHandle, w: &ExtensionWeights) -> Result<FunctionHandle> {
    check_dims(1, f.dims())?;
    Ok(extend_axis(f, 0, w))
}

/// Extends `f` to ℝ^d axis by axis, axis 1 first.
pub fn extend_nd(f: &FunctionHandle, w: &ExtensionWeights) -> FunctionHandle {
    (0..f.dims()).fold(f.clone(), |g, axis| extend_axis(&g, axis, w))
}

/// Extension across the hyperplane `x_axis = 0` only.
pub fn extend_axis(f: &FunctionHandle, axis: usize, w: &ExtensionWeights) -> FunctionHandle {
    assert!(axis < f.dims(), "axis out of range");
    let coeffs: Arc<Vec<(f64, f64)>> =
        Arc::new(w.coefficients.iter().copied().zip(w.scales.iter().copied()).collect());
    let width = w.cutoff_width;

    let inner = Arc::clone(f.evaluator());
    let cs = Arc::clone(&coeffs);
    let eval: Arc<Evaluator> = Arc::new(move |x: &[f64]| {
        let xa = x[axis];
        if !reflected(xa) {
            return inner(x);
        }
        let chi = cutoff(xa / width);
        if chi == 0.0 {
            return 0.0;
        }
        let mut y = x.to_vec();
        let mut s = 0.0;
        for &(c, b) in cs.iter() {
            y[axis] = -b * xa;
            s += c * inner(&y);
        }
        chi * s
    });

    let deriv: Option<Arc<DerivEvaluator>> = f.deriv_evaluator().map(|inner_d| {
        let inner_d = Arc::clone(inner_d);
        let cs = Arc::clone(&coeffs);
        let d: Arc<DerivEvaluator> = Arc::new(move |x: &[f64], p: &[usize]| {
            let xa = x[axis];
            if !reflected(xa) {
                return inner_d(x, p);
            }
            let pa = p[axis];
            let chi = cutoff_derivatives(xa / width, pa);
            let mut y = x.to_vec();
            let mut q = p.to_vec();
            let mut total = 0.0;
            let mut binom = 1.0;
            // Leibniz: Σ_i C(pa,i) χ^{(i)} w^{-i} · D^{pa−i}[Σ_k c_k f(−b_k x)]
            for i in 0..=pa {
                let chi_i = chi[i] / width.powi(i as i32);
                if chi_i != 0.0 {
                    q[axis] = pa - i;
                    let mut s = 0.0;
                    for &(c, b) in cs.iter() {
                        y[axis] = -b * xa;
                        s += c * (-b).powi((pa - i) as i32) * inner_d(&y, &q);
                    }
                    total += binom * chi_i * s;
                }
                binom = binom * (pa - i) as f64 / (i + 1) as f64;
            }
            total
        });
        d
    });
    FunctionHandle::from_parts(f.dims(), Domain::FullSpace, eval, deriv)
}

/// Boundary derivative mismatches and full-space size of an extension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionQuality {
    /// `mismatch[j] = max |∂^j g(0⁻) − ∂^j f(0⁺)|` over boundary points and
    /// the normal directions of the faces they lie on.
    pub mismatch: Vec<f64>,
    /// Grid approximation of `‖g‖_{j,l}` on the full-space grid.
    pub seminorm: f64,
    /// Whether derivatives were exact (otherwise one-sided finite
    /// differences).
    pub analytic: bool,
}

/// Measures how well `g` extends `f`.
///
/// For each boundary point and each axis on which its coordinate is zero,
/// compares normal derivatives of order `0..=order` from both sides. Exact
/// derivatives are used when both handles carry them, fourth-order one-sided
/// differences otherwise.
pub fn extension_quality(
    f: &FunctionHandle,
    g: &FunctionHandle,
    order: usize,
    boundary: &[Point],
    full_grid: &[Point],
    seminorm_orders: (usize, usize),
) -> Result<ExtensionQuality> {
    check_dims(f.dims(), g.dims())?;
    let analytic = f.has_derivatives() && g.has_derivatives();
    let d = f.dims();
    let mut mismatch = vec![0.0f64; order + 1];
    for x in boundary {
        check_dims(d, x.dims())?;
        for axis in (0..d).filter(|&a| x[a] == 0.0) {
            let mut right_pt = x.to_vec();
            right_pt[axis] = 0.0;
            let mut left_pt = right_pt.clone();
            left_pt[axis] = -0.0;
            for j in 0..=order {
                let mut p = vec![0; d];
                p[axis] = j;
                let (right, left) = if analytic {
                    (f.derivative(&right_pt, &p).unwrap(), g.derivative(&left_pt, &p).unwrap())
                } else {
                    (
                        one_sided(f, &right_pt, axis, j, Side::Forward),
                        one_sided(g, &left_pt, axis, j, Side::Backward),
                    )
                };
                mismatch[j] = mismatch[j].max((right - left).abs());
            }
        }
    }
    let seminorm = if full_grid.is_empty() {
        0.0
    } else {
        schwartz_seminorm(g, seminorm_orders.0, seminorm_orders.1, full_grid)?
    };
    Ok(ExtensionQuality { mismatch, seminorm, analytic })
}

fn one_sided(f: &FunctionHandle, x: &[f64], axis: usize, order: usize, side: Side) -> f64 {
    if order == 0 {
        return f.eval(x);
    }
    let s = Stencil::new(order, default_step(order, 0.0), side);
    let mut y = x.to_vec();
    s.apply(
        |t| {
            y[axis] = t;
            f.eval(&y)
        },
        x[axis],
    )
}
