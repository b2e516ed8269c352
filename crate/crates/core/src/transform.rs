//! Analysis and synthesis in the d-dimensional Laguerre basis, and the
//! seminorms used to measure coefficient sequences and functions.

use rayon::prelude::*;

use crate::basis::weighted_ladder;
use crate::error::{check_dims, Error, Result};
use crate::function::{Domain, FunctionHandle};
use crate::multi_index::{MultiIndex, Point};
use crate::quadrature::QuadratureRule;
use crate::tensor::{contract_all, mode_product, CoefficientTensor};

/// Row-major list of the tensor-product nodes of `rule` in `dims` dimensions.
pub fn node_grid(rule: &QuadratureRule, dims: usize) -> Vec<Vec<f64>> {
    let shape = MultiIndex::splat(dims, rule.len());
    MultiIndex::iter_box(&shape)
        .map(|j| j.as_slice().iter().map(|&i| rule.nodes()[i]).collect())
        .collect()
}

/// Laguerre coefficients `a_n(f) = ∫ f ℒ_n dx` for every `n < degree_bounds`,
/// by the tensor-product rule.
///
/// `f` is evaluated at all `m^d` nodes, in parallel; its evaluator must be
/// safe to call concurrently (guaranteed by [`FunctionHandle`]'s bounds).
pub fn analyze(f: &FunctionHandle, degree_bounds: &MultiIndex, rule: &QuadratureRule) -> Result<CoefficientTensor> {
    check_dims(degree_bounds.dims(), f.dims())?;
    check_aliasing(degree_bounds, rule)?;
    let d = f.dims();
    let m = rule.len();
    let shape = MultiIndex::splat(d, m);
    let total = shape.volume();
    let nodes = rule.nodes();
    let samples: Vec<f64> = (0..total)
        .into_par_iter()
        .map_init(
            || vec![0.0; d],
            |x, mut flat| {
                for axis in (0..d).rev() {
                    x[axis] = nodes[flat % m];
                    flat /= m;
                }
                f.eval(x)
            },
        )
        .collect();
    analyze_samples(&samples, degree_bounds, rule)
}

/// As [`analyze`], from precomputed samples `f(x_j)` at the row-major node
/// grid of [`node_grid`].
pub fn analyze_samples(samples: &[f64], degree_bounds: &MultiIndex, rule: &QuadratureRule) -> Result<CoefficientTensor> {
    check_aliasing(degree_bounds, rule)?;
    let d = degree_bounds.dims();
    let m = rule.len();
    let expected = m.pow(d as u32);
    if samples.len() != expected {
        return Err(Error::invalid(format!(
            "{} samples supplied, the {d}-dimensional node grid has {expected}",
            samples.len()
        )));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("function samples must be finite"));
    }
    let bmax = degree_bounds.max_entry();
    // projection[n][j] = w_j ℒ_n(x_j)
    let mut table = vec![0.0; bmax * m];
    let mut ladder = vec![0.0; bmax];
    for (j, (&x, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        weighted_ladder(0, x, &mut ladder);
        for n in 0..bmax {
            table[n * m + j] = w * ladder[n];
        }
    }
    let mut shape = vec![m; d];
    let mut data = samples.to_vec();
    for axis in 0..d {
        let rows = degree_bounds[axis];
        data = mode_product(&data, &mut shape, axis, &table[..rows * m], rows);
    }
    CoefficientTensor::new(degree_bounds.clone(), data)
}

fn check_aliasing(bounds: &MultiIndex, rule: &QuadratureRule) -> Result<()> {
    let degree = bounds.max_entry();
    if rule.len() < degree {
        return Err(Error::Aliasing { nodes: rule.len(), degree });
    }
    Ok(())
}

/// The truncated series `Σ_{n<bounds} c_n ℒ_n(x)`.
pub fn synthesize(c: &CoefficientTensor, x: &Point) -> Result<f64> {
    check_dims(c.dims(), x.dims())?;
    if !x.in_closed_orthant() {
        return Err(Error::invalid("synthesis point must lie in the closed orthant"));
    }
    let bounds = c.degree_bounds().as_slice();
    let tables: Vec<Vec<f64>> = bounds
        .iter()
        .zip(x.iter())
        .map(|(&b, &xi)| {
            let mut t = vec![0.0; b];
            weighted_ladder(0, xi, &mut t);
            t
        })
        .collect();
    Ok(contract_all(c.values(), bounds, &tables))
}

/// `Σ_n |c_n|² ∏ᵢ (n_i + ½)^{2k}`.
pub fn seminorm_sequence(c: &CoefficientTensor, k: u32) -> f64 {
    c.iter()
        .map(|(n, v)| {
            let w: f64 = n.as_slice().iter().map(|&ni| (ni as f64 + 0.5).powi(2 * k as i32)).product();
            v * v * w
        })
        .sum()
}

/// Grid approximation of `‖f‖_{j,l} = sup_{|k|≤j, |p|≤l} sup_x |x^k D^p f(x)|`.
///
/// Derivatives are fourth-order finite differences (one-sided at the orthant
/// boundary for orthant handles). The result is a lower bound on the true
/// supremum; grid density is the caller's accuracy knob.
pub fn schwartz_seminorm(f: &FunctionHandle, j: usize, l: usize, grid: &[Point]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::invalid("seminorm grid is empty"));
    }
    let d = f.dims();
    for x in grid {
        check_dims(d, x.dims())?;
        if f.domain() == Domain::Orthant && !x.in_closed_orthant() {
            return Err(Error::invalid("seminorm grid point outside the orthant"));
        }
    }
    let orders: Vec<MultiIndex> = MultiIndex::iter_total(d, l).collect();
    let weights: Vec<MultiIndex> = MultiIndex::iter_total(d, j).collect();
    let orthant = f.domain() == Domain::Orthant;
    let eval = |y: &[f64]| f.eval(y);
    let best = grid
        .par_iter()
        .map(|x| {
            let mut best = 0.0f64;
            for p in &orders {
                let dp = if p.total() == 0 { f.eval(x) } else { crate::fd::partial(&eval, x, p.as_slice(), orthant) };
                if !dp.is_finite() {
                    return f64::INFINITY;
                }
                for k in &weights {
                    let mono: f64 = x.iter().zip(k.as_slice()).map(|(xi, &ki)| xi.abs().powi(ki as i32)).product();
                    best = best.max(mono * dp.abs());
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// Uniform grid `start..=stop` with `count` points per axis.
pub fn uniform_grid(dims: usize, start: f64, stop: f64, count: usize) -> Vec<Point> {
    let axis: Vec<f64> = if count == 1 {
        vec![start]
    } else {
        (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect()
    };
    MultiIndex::iter_box(&MultiIndex::splat(dims, count))
        .map(|n| Point::from(n.as_slice().iter().map(|&i| axis[i]).collect::<Vec<_>>()))
        .collect()
}
