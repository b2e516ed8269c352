//! Built-in numerical checks: orthonormality of the basis under the
//! quadrature rule, the eigenvalue relation of `E`, and the convolution
//! formula against direct integration.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::convolution::{convolution_handle, convolve_coeff};
use crate::error::Result;
use crate::function::FunctionHandle;
use crate::multi_index::{MultiIndex, Point};
use crate::operators::{apply_e_pointwise, eigenvalue};
use crate::quadrature::{gauss_laguerre_rule, LegendreRule};
use crate::tensor::CoefficientTensor;
use crate::transform::analyze;

/// Outcome of one check: worst observed error against its tolerance.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub elapsed: Duration,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_error < self.tolerance
    }

    fn timed(name: &str, tolerance: f64, body: impl FnOnce() -> Result<f64>) -> Result<Check> {
        let start = Instant::now();
        let max_error = body()?;
        Ok(Check { name: name.into(), max_error, tolerance, elapsed: start.elapsed() })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<34} max error {:>10.3e}  tol {:>8.1e}  {:>7.2}s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.max_error,
            self.tolerance,
            self.elapsed.as_secs_f64()
        )
    }
}

/// `max |⟨ℒ_n, ℒ_m⟩ − δ_nm|` for `n, m < bounds`, each `ℒ_n` analyzed with
/// an `m`-point rule.
pub fn orthonormality_error(bounds: &MultiIndex, rule_size: usize) -> Result<f64> {
    let rule = gauss_laguerre_rule(rule_size)?;
    let rows: Vec<MultiIndex> = MultiIndex::iter_box(bounds).collect();
    let errs = rows
        .par_iter()
        .map(|n| -> Result<f64> {
            let c = analyze(&FunctionHandle::laguerre(n.clone()), bounds, &rule)?;
            Ok(c.iter().map(|(m, v)| (v - if &m == n { 1.0 } else { 0.0 }).abs()).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// `max |E ℒ_n(x) − λ_n ℒ_n(x)| / max(1, |ℒ_n(x)|)` over `n < bounds` and a
/// uniform `points^d` grid on `[0.5, 10]^d`.
pub fn eigen_relation_error(bounds: &MultiIndex, points: usize) -> Result<f64> {
    let d = bounds.dims();
    let axis: Vec<f64> = (0..points).map(|i| 0.5 + 9.5 * i as f64 / (points - 1) as f64).collect();
    let grid: Vec<Point> = MultiIndex::iter_box(&MultiIndex::splat(d, points))
        .map(|j| Point::from(j.as_slice().iter().map(|&i| axis[i]).collect::<Vec<_>>()))
        .collect();
    let ns: Vec<MultiIndex> = MultiIndex::iter_box(bounds).collect();
    let errs = ns
        .par_iter()
        .map(|n| -> Result<f64> {
            let f = FunctionHandle::laguerre(n.clone());
            let lambda = eigenvalue(n);
            let mut worst = 0.0f64;
            for x in &grid {
                let fx = f.eval(x);
                let ef = apply_e_pointwise(&f, x)?;
                worst = worst.max((ef - lambda * fx).abs() / fx.abs().max(1.0));
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// For all pairs of basis functions `ℒ_n, ℒ_m` with `n, m < basis`,
/// compares [`convolve_coeff`] with analysis of the directly integrated
/// convolution. Both sides use coefficients `< 2·basis`, which covers the
/// whole (finite) expansion of `ℒ_n ∗ ℒ_m`.
pub fn convolution_oracle_error(basis: &MultiIndex) -> Result<f64> {
    let out_bounds = MultiIndex::from(basis.as_slice().iter().map(|&b| 2 * b).collect::<Vec<_>>());
    let rule = gauss_laguerre_rule(out_bounds.max_entry() + 4)?;
    // the integrand along each axis is a polynomial of degree < 2·basis
    let legendre = LegendreRule::new(basis.max_entry() + 1)?;
    let ns: Vec<MultiIndex> = MultiIndex::iter_box(basis).collect();
    let pairs: Vec<(&MultiIndex, &MultiIndex)> = ns.iter().flat_map(|a| ns.iter().map(move |b| (a, b))).collect();
    let errs = pairs
        .par_iter()
        .map(|(n, m)| -> Result<f64> {
            let a = CoefficientTensor::unit(out_bounds.clone(), n)?;
            let b = CoefficientTensor::unit(out_bounds.clone(), m)?;
            let fast = convolve_coeff(&a, &b)?.coefficients;
            let h = convolution_handle(&FunctionHandle::laguerre((*n).clone()), &FunctionHandle::laguerre((*m).clone()), legendre.clone());
            let direct = analyze(&h, &out_bounds, &rule)?;
            fast.max_abs_diff(&direct)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// Distance of `e_0 ∗ e_0` from `(1, −1, 0, …)` in one dimension.
pub fn half_exponential_square_error() -> Result<f64> {
    let e0 = CoefficientTensor::unit(MultiIndex::from([8]), &MultiIndex::from([0]))?;
    let c = convolve_coeff(&e0, &e0)?.coefficients;
    let expect = CoefficientTensor::from_fn(MultiIndex::from([8]), |n| match n[0] {
        0 => 1.0,
        1 => -1.0,
        _ => 0.0,
    });
    c.max_abs_diff(&expect)
}

/// Runs all suites.
pub fn run_all() -> Result<Vec<Check>> {
    Ok(vec![
        Check::timed("orthonormality d=1 n<=32 rule 128", 1e-10, || orthonormality_error(&MultiIndex::from([33]), 128))?,
        Check::timed("orthonormality d=2 n<=(8,8)", 1e-9, || orthonormality_error(&MultiIndex::from([9, 9]), 32))?,
        Check::timed("eigenvalue d=1 n<=8", 1e-4, || eigen_relation_error(&MultiIndex::from([9]), 20))?,
        Check::timed("eigenvalue d=2 n<=(4,4)", 1e-4, || eigen_relation_error(&MultiIndex::from([5, 5]), 8))?,
        Check::timed("convolution e0*e0 = (1,-1,0,..)", 1e-8, half_exponential_square_error)?,
        Check::timed("convolution oracle d=1 n<=6", 1e-6, || convolution_oracle_error(&MultiIndex::from([7])))?,
        Check::timed("convolution oracle d=2 n<=(3,3)", 1e-6, || convolution_oracle_error(&MultiIndex::from([4, 4])))?,
    ])
}
