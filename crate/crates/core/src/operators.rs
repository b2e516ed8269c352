//! The Laguerre operator `E = ∏ᵢ (D_i x_i D_i − x_i/4)`.
//!
//! `E ℒ_n = ∏ᵢ −(n_i+½) ℒ_n`, so on coefficients `E` is diagonal. The
//! pointwise form works on arbitrary handles by finite differences; each 1-d
//! factor is `x f'' + f' − (x/4) f`, and because the factors act on distinct
//! variables the product is a single tensor stencil.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{check_dims, Error, Result};
use crate::fd::{fornberg_weights, ACCURACY};
use crate::function::{Domain, FunctionHandle};
use crate::multi_index::{MultiIndex, Point};
use crate::quadrature::QuadratureRule;
use crate::tensor::CoefficientTensor;

/// `∏ᵢ −(n_i + ½)`.
pub fn eigenvalue(n: &MultiIndex) -> f64 {
    n.as_slice().iter().map(|&k| -(k as f64 + 0.5)).product()
}

/// `E^power` on coefficients: `c_n ↦ c_n ∏ᵢ (−(n_i+½))^power`.
pub fn apply_e_coeff(c: &CoefficientTensor, power: u32) -> Result<CoefficientTensor> {
    if power == 0 {
        return Err(Error::invalid("operator power must be at least 1"));
    }
    Ok(c.map(|n, v| v * eigenvalue(n).powi(power as i32)))
}

/// Base finite-difference step for `E` in `d` dimensions, before scaling by
/// `max(1, x_i)`. The tensor stencil multiplies rounding error by roughly
/// `h^{-2d}` while truncation error is `O(h⁴)`; `ε^{1/(4+2d)}` balances them.
pub fn default_e_step(dims: usize) -> f64 {
    f64::EPSILON.powf(1.0 / (ACCURACY + 2 * dims) as f64)
}

/// `(E f)(x)` by fourth-order central differences.
pub fn apply_e_pointwise(f: &FunctionHandle, x: &Point) -> Result<f64> {
    apply_e_pointwise_with_step(f, x, default_e_step(f.dims()))
}

/// As [`apply_e_pointwise`] with step `base_step·max(1, x_i)` per axis,
/// shrunk near the boundary so the stencil stays in the open orthant.
pub fn apply_e_pointwise_with_step(f: &FunctionHandle, x: &Point, base_step: f64) -> Result<f64> {
    check_dims(f.dims(), x.dims())?;
    if !x.in_open_orthant() {
        return Err(Error::invalid("E needs a point strictly inside the orthant (the stencil would leave the domain)"));
    }
    Ok(e_stencil_value(&|y: &[f64]| f.eval(y), x, base_step))
}

const OFFSETS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

// Combined 1-d weights of x f'' + f' - x f / 4 on the 5-point stencil.
fn factor_weights(x: f64, h: f64) -> [f64; 5] {
    let w1 = fornberg_weights(1, &OFFSETS);
    let w2 = fornberg_weights(2, &OFFSETS);
    let mut w = [0.0; 5];
    for i in 0..5 {
        w[i] = x * w2[i] / (h * h) + w1[i] / h;
    }
    w[2] -= 0.25 * x;
    w
}

fn axis_step(x: f64, base: f64) -> f64 {
    (base * x.max(1.0)).min(x / 2.5)
}

fn e_stencil_value(f: &dyn Fn(&[f64]) -> f64, x: &[f64], base_step: f64) -> f64 {
    let d = x.len();
    let steps: Vec<f64> = x.iter().map(|&xi| axis_step(xi, base_step)).collect();
    let weights: Vec<[f64; 5]> = x.iter().zip(&steps).map(|(&xi, &h)| factor_weights(xi, h)).collect();
    let mut point = x.to_vec();
    let mut acc = 0.0;
    for idx in MultiIndex::iter_box(&MultiIndex::splat(d, 5)) {
        let mut w = 1.0;
        for axis in 0..d {
            let o = idx[axis];
            w *= weights[axis][o];
            point[axis] = x[axis] + OFFSETS[o] * steps[axis];
        }
        acc += w * f(&point);
    }
    acc
}

/// One factor `D_a(x_a D_a) − x_a/4` applied along `axis`, as a new handle.
/// Composing these in either order approximates `E` (for checking that the
/// factors commute).
pub fn apply_e_factor(f: &FunctionHandle, axis: usize, base_step: f64) -> FunctionHandle {
    let inner = Arc::clone(f.evaluator());
    FunctionHandle::new(f.dims(), f.domain(), move |x: &[f64]| {
        let h = axis_step(x[axis], base_step);
        let w = factor_weights(x[axis], h);
        let mut y = x.to_vec();
        let mut acc = 0.0;
        for (o, wo) in OFFSETS.iter().zip(w) {
            y[axis] = x[axis] + o * h;
            acc += wo * inner(&y);
        }
        acc
    })
}

/// `E f` as a handle. Returns NaN at points outside the open orthant.
pub fn laguerre_operator(f: &FunctionHandle) -> FunctionHandle {
    let inner = Arc::clone(f.evaluator());
    let base = default_e_step(f.dims());
    FunctionHandle::new(f.dims(), Domain::Orthant, move |x: &[f64]| {
        if x.iter().any(|&xi| xi <= 0.0) {
            return f64::NAN;
        }
        e_stencil_value(&*inner, x, base)
    })
}

/// `|⟨Ef, g⟩ − ⟨f, Eg⟩|` with both inner products taken by the
/// tensor-product rule and `E` by finite differences.
///
/// Both sums are accumulated in the same order with the same association,
/// so `f = g` gives exactly zero.
pub fn self_adjointness_residual(f: &FunctionHandle, g: &FunctionHandle, rule: &QuadratureRule) -> Result<f64> {
    check_dims(f.dims(), g.dims())?;
    let d = f.dims();
    let m = rule.len();
    let base = default_e_step(d);
    let total = m.pow(d as u32);
    let (nodes, weights) = (rule.nodes(), rule.weights());
    let ff = |y: &[f64]| f.eval(y);
    let gg = |y: &[f64]| g.eval(y);
    let (lhs, rhs) = (0..total)
        .into_par_iter()
        .map(|mut flat| {
            let mut x = vec![0.0; d];
            let mut w = 1.0;
            for axis in (0..d).rev() {
                let j = flat % m;
                x[axis] = nodes[j];
                w *= weights[j];
                flat /= m;
            }
            let ef = e_stencil_value(&ff, &x, base);
            let eg = e_stencil_value(&gg, &x, base);
            let (fv, gv) = (f.eval(&x), g.eval(&x));
            (w * (ef * gv), w * (eg * fv))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (l, r)| (a + l, b + r));
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::laguerre_fn;
    use crate::quadrature::gauss_laguerre_rule;

    #[test]
    fn coefficient_eigenvalues() {
        let b = MultiIndex::from([3, 3]);
        let e0 = CoefficientTensor::unit(b.clone(), &MultiIndex::from([0, 0])).unwrap();
        assert_eq!(apply_e_coeff(&e0, 1).unwrap().values()[0], 0.25);
        let e21 = CoefficientTensor::unit(b, &MultiIndex::from([2, 1])).unwrap();
        let out = apply_e_coeff(&e21, 1).unwrap();
        assert_eq!(out.get(&MultiIndex::from([2, 1])), 3.75);
        let twice = apply_e_coeff(&out, 1).unwrap();
        assert_eq!(twice, apply_e_coeff(&e21, 2).unwrap());
        assert!(apply_e_coeff(&e21, 0).is_err());
        let e1d = CoefficientTensor::unit(MultiIndex::from([2]), &MultiIndex::from([0])).unwrap();
        assert_eq!(apply_e_coeff(&e1d, 1).unwrap().values()[0], -0.5);
    }

    #[test]
    fn eigenvalue_sign_and_monotonicity() {
        for d in 1..=3 {
            for n in MultiIndex::iter_box(&MultiIndex::splat(d, 4)) {
                let ev = eigenvalue(&n);
                let expected_sign = if d % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(ev.signum(), expected_sign);
                for axis in 0..d {
                    let mut up = n.clone().into_vec();
                    up[axis] += 1;
                    assert!(eigenvalue(&MultiIndex::from(up)).abs() > ev.abs());
                }
            }
        }
    }

    #[test]
    fn pointwise_eigen_relation_1d() {
        for n in 0..=8 {
            let f = FunctionHandle::laguerre(MultiIndex::from([n]));
            for i in 0..20 {
                let x = 0.5 + 9.5 * i as f64 / 19.0;
                let v = apply_e_pointwise(&f, &Point::from([x])).unwrap();
                let expect = -(n as f64 + 0.5) * laguerre_fn(n, x);
                assert!((v - expect).abs() < 1e-4 * expect.abs().max(1.0), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn pointwise_eigen_relation_2d_example() {
        let f = FunctionHandle::laguerre(MultiIndex::from([1, 1]));
        let v = apply_e_pointwise(&f, &Point::from([1.0, 1.0])).unwrap();
        assert!((v - 2.25 * f.eval(&[1.0, 1.0])).abs() < 1e-4);
        // ℒ_1(1) = 0, so the expected value is exactly zero here
        assert!(v.abs() < 1e-4);
        let v = apply_e_pointwise(&f, &Point::from([0.6, 2.5])).unwrap();
        assert!((v - 2.25 * f.eval(&[0.6, 2.5])).abs() < 1e-4);
    }

    #[test]
    fn zero_function_and_boundary_error() {
        let z = FunctionHandle::zero(2, Domain::Orthant);
        assert_eq!(apply_e_pointwise(&z, &Point::from([1.0, 2.0])).unwrap(), 0.0);
        assert!(apply_e_pointwise(&z, &Point::from([0.0, 2.0])).is_err());
        assert!(apply_e_pointwise(&z, &Point::from([1.0])).is_err());
    }

    #[test]
    fn factors_commute_in_2d() {
        let f = FunctionHandle::laguerre(MultiIndex::from([2, 1]));
        let h = 1e-2;
        let a12 = apply_e_factor(&apply_e_factor(&f, 1, h), 0, h);
        let a21 = apply_e_factor(&apply_e_factor(&f, 0, h), 1, h);
        for x in [[0.7, 1.3], [2.0, 4.5], [6.0, 0.9]] {
            let direct = apply_e_pointwise_with_step(&f, &Point::from(x), h).unwrap();
            assert!((a12.eval(&x) - a21.eval(&x)).abs() < 1e-8);
            assert!((a12.eval(&x) - direct).abs() < 1e-8);
        }
    }

    #[test]
    fn self_adjointness_examples() {
        let rule = gauss_laguerre_rule(32).unwrap();
        let l = |n| FunctionHandle::laguerre(MultiIndex::from([n]));
        assert_eq!(self_adjointness_residual(&l(3), &l(3), &rule).unwrap(), 0.0);
        assert!(self_adjointness_residual(&l(2), &l(5), &rule).unwrap() < 1e-4);
        let g = FunctionHandle::linear_combination(&[(1.0, l(1)), (1.0, l(3))]).unwrap();
        assert!(self_adjointness_residual(&l(1), &g, &rule).unwrap() < 1e-4);
    }
}
