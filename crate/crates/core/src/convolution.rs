//! Convolution on the orthant, computed on Laguerre coefficients.
//!
//! With `a_n = ⟨f, ℒ_n⟩`, `b_n = ⟨g, ℒ_n⟩`, the addition formula
//! `L¹_n(x+y) = Σ_{k≤n} L_{n−k}(x) L_k(y)` and `L_n = L¹_n − L¹_{n−1}` give,
//! axis by axis,
//!
//! ```text
//! ⟨f∗g, ℒ_n⟩ = Σ_{ε∈{0,1}^d} (−1)^{|ε|} Σ_{k ≤ n−ε} a_{n−ε−k} b_k
//! ```
//!
//! with terms at negative indices omitted. Equivalently: the d-dimensional
//! Cauchy product `h_m = Σ_{k≤m} a_{m−k} b_k` followed by a backward
//! difference along every axis.

use rayon::prelude::*;

use crate::error::{check_dims, Result};
use crate::function::FunctionHandle;
use crate::multi_index::{MultiIndex, Point};
use crate::quadrature::LegendreRule;
use crate::tensor::CoefficientTensor;

/// Result of [`convolve_coeff`].
#[derive(Clone, Debug, PartialEq)]
pub struct Convolution {
    pub coefficients: CoefficientTensor,
    /// Entries `n < exact_bounds` depend only on input coefficients that
    /// were supplied. Output entry `n` needs `a_k, b_k` for `k ≤ n` only, so
    /// this is the full output box; it is reported so callers need not
    /// re-derive that.
    pub exact_bounds: MultiIndex,
}

/// Coefficients of `f ∗ g` from those of `f` and `g`. The output box is the
/// componentwise minimum of the input boxes.
pub fn convolve_coeff(a: &CoefficientTensor, b: &CoefficientTensor) -> Result<Convolution> {
    check_dims(a.dims(), b.dims())?;
    let bounds = a.degree_bounds().min(b.degree_bounds());
    let d = bounds.dims();
    let dims = bounds.as_slice().to_vec();

    let cauchy: Vec<f64> = MultiIndex::iter_box(&bounds)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|m| {
            let mut s = 0.0;
            for k in MultiIndex::iter_box(&MultiIndex::from(m.as_slice().iter().map(|v| v + 1).collect::<Vec<_>>())) {
                let rest: Vec<usize> = m.as_slice().iter().zip(k.as_slice()).map(|(mi, ki)| mi - ki).collect();
                s += a.get(&MultiIndex::from(rest)) * b.get(&k);
            }
            s
        })
        .collect();

    // backward difference h_n − h_{n−e_axis} along each axis, highest index first
    let mut data = cauchy;
    for axis in 0..d {
        let stride: usize = dims[axis + 1..].iter().product();
        for off in (0..data.len()).rev() {
            let idx = (off / stride) % dims[axis];
            if idx > 0 {
                data[off] -= data[off - stride];
            }
        }
    }
    Ok(Convolution { coefficients: CoefficientTensor::new(bounds.clone(), data)?, exact_bounds: bounds })
}

/// Literal inclusion–exclusion sum over shift vectors `ε ∈ {0,1}^d`, for
/// cross-checking [`convolve_coeff`].
pub fn convolve_coeff_inclusion_exclusion(a: &CoefficientTensor, b: &CoefficientTensor) -> Result<CoefficientTensor> {
    check_dims(a.dims(), b.dims())?;
    let bounds = a.degree_bounds().min(b.degree_bounds());
    let d = bounds.dims();
    let shifts: Vec<MultiIndex> = MultiIndex::iter_box(&MultiIndex::splat(d, 2)).collect();
    Ok(CoefficientTensor::from_fn(bounds, |n| {
        let mut total = 0.0;
        for eps in &shifts {
            if n.as_slice().iter().zip(eps.as_slice()).any(|(ni, ei)| ni < ei) {
                continue;
            }
            let top: Vec<usize> = n.as_slice().iter().zip(eps.as_slice()).map(|(ni, ei)| ni - ei).collect();
            let sign = if eps.total() % 2 == 0 { 1.0 } else { -1.0 };
            let upper = MultiIndex::from(top.iter().map(|t| t + 1).collect::<Vec<_>>());
            let mut s = 0.0;
            for k in MultiIndex::iter_box(&upper) {
                let rest: Vec<usize> = top.iter().zip(k.as_slice()).map(|(t, ki)| t - ki).collect();
                s += a.get(&MultiIndex::from(rest)) * b.get(&k);
            }
            total += sign * s;
        }
        total
    }))
}

/// `(f∗g)(t) = ∫_{0≤x≤t} f(x) g(t−x) dx` by a Gauss–Legendre tensor rule on
/// the box `∏[0, t_i]`.
pub fn convolve_direct(f: &FunctionHandle, g: &FunctionHandle, t: &Point, rule: &LegendreRule) -> Result<f64> {
    check_dims(f.dims(), g.dims())?;
    check_dims(f.dims(), t.dims())?;
    let d = t.dims();
    if t.iter().any(|&ti| ti <= 0.0) {
        return Ok(0.0);
    }
    let mapped: Vec<(Vec<f64>, Vec<f64>)> = t.iter().map(|&ti| rule.mapped(0.0, ti)).collect();
    let m = rule.len();
    let mut x = vec![0.0; d];
    let mut y = vec![0.0; d];
    let mut acc = 0.0;
    for j in MultiIndex::iter_box(&MultiIndex::splat(d, m)) {
        let mut w = 1.0;
        for axis in 0..d {
            let (nodes, weights) = &mapped[axis];
            x[axis] = nodes[j[axis]];
            y[axis] = t[axis] - x[axis];
            w *= weights[j[axis]];
        }
        acc += w * f.eval(&x) * g.eval(&y);
    }
    Ok(acc)
}

/// `f ∗ g` as a handle evaluated by [`convolve_direct`].
pub fn convolution_handle(f: &FunctionHandle, g: &FunctionHandle, rule: LegendreRule) -> FunctionHandle {
    let (f, g) = (f.clone(), g.clone());
    FunctionHandle::new(f.dims(), crate::function::Domain::Orthant, move |t: &[f64]| {
        if t.iter().any(|&ti| ti <= 0.0) {
            return 0.0;
        }
        convolve_direct(&f, &g, &Point::from(t.to_vec()), &rule).unwrap_or(f64::NAN)
    })
}
