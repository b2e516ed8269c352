//! Function handles: real-valued maps on the orthant or on all of ℝ^d.
//!
//! A handle wraps a thread-safe evaluator. Handles built from closed forms
//! (basis functions, exponentials, Gaussians, finite Laguerre series,
//! extensions of those) also carry an exact partial-derivative evaluator;
//! callers fall back to finite differences when it is absent.
//!
//! Evaluators may be called concurrently (see [`crate::transform::analyze`]),
//! hence the `Send + Sync` bound.

use std::fmt;
use std::sync::Arc;

use crate::basis::{laguerre_fn_multi_deriv, weighted_ladder};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::tensor::CoefficientTensor;

pub type Evaluator = dyn Fn(&[f64]) -> f64 + Send + Sync;
/// `(x, p) ↦ D^p f(x)`.
pub type DerivEvaluator = dyn Fn(&[f64], &[usize]) -> f64 + Send + Sync;

/// Declared domain of a handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// The positive orthant; values on the boundary are limits from inside.
    Orthant,
    FullSpace,
}

#[derive(Clone)]
pub struct FunctionHandle {
    dims: usize,
    domain: Domain,
    eval: Arc<Evaluator>,
    deriv: Option<Arc<DerivEvaluator>>,
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("dims", &self.dims)
            .field("domain", &self.domain)
            .field("analytic_derivatives", &self.deriv.is_some())
            .finish()
    }
}

impl FunctionHandle {
    pub fn new(dims: usize, domain: Domain, eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        assert!(dims >= 1, "function dimension must be at least 1");
        FunctionHandle { dims, domain, eval: Arc::new(eval), deriv: None }
    }

    /// Attaches an exact derivative evaluator. `deriv(x, 0…0)` must equal
    /// `eval(x)`.
    pub fn with_derivatives(mut self, deriv: impl Fn(&[f64], &[usize]) -> f64 + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(deriv));
        self
    }

    pub(crate) fn from_parts(dims: usize, domain: Domain, eval: Arc<Evaluator>, deriv: Option<Arc<DerivEvaluator>>) -> Self {
        FunctionHandle { dims, domain, eval, deriv }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dims);
        (self.eval)(x)
    }

    pub fn evaluator(&self) -> &Arc<Evaluator> {
        &self.eval
    }

    pub fn has_derivatives(&self) -> bool {
        self.deriv.is_some()
    }

    /// Exact `D^p f(x)` if the handle carries derivatives.
    pub fn derivative(&self, x: &[f64], p: &[usize]) -> Option<f64> {
        self.deriv.as_ref().map(|d| d(x, p))
    }

    pub(crate) fn deriv_evaluator(&self) -> Option<&Arc<DerivEvaluator>> {
        self.deriv.as_ref()
    }

    /// `D^p f(x)`: exact when available, otherwise fourth-order finite
    /// differences kept inside the orthant for orthant handles.
    pub fn partial(&self, x: &[f64], p: &[usize]) -> f64 {
        if let Some(v) = self.derivative(x, p) {
            return v;
        }
        if p.iter().all(|&q| q == 0) {
            return self.eval(x);
        }
        let f = |y: &[f64]| self.eval(y);
        crate::fd::partial(&f, x, p, self.domain == Domain::Orthant)
    }

    pub fn zero(dims: usize, domain: Domain) -> Self {
        FunctionHandle::new(dims, domain, |_| 0.0).with_derivatives(|_, _| 0.0)
    }

    /// The product basis function `ℒ_n`.
    pub fn laguerre(n: MultiIndex) -> Self {
        let dims = n.dims();
        let n2 = n.clone();
        FunctionHandle::new(dims, Domain::Orthant, move |x| {
            n.as_slice().iter().zip(x).map(|(&k, &xi)| crate::basis::laguerre_fn(k, xi)).product()
        })
        .with_derivatives(move |x, p| laguerre_fn_multi_deriv(&n2, p, x))
    }

    /// `e^{-α Σ x_i}`.
    pub fn exp_decay(dims: usize, alpha: f64) -> Self {
        FunctionHandle::new(dims, Domain::Orthant, move |x| (-alpha * x.iter().sum::<f64>()).exp()).with_derivatives(
            move |x, p| {
                let order: usize = p.iter().sum();
                (-alpha).powi(order as i32) * (-alpha * x.iter().sum::<f64>()).exp()
            },
        )
    }

    /// `e^{-|x|²}`.
    pub fn gaussian(dims: usize) -> Self {
        FunctionHandle::new(dims, Domain::Orthant, |x| (-x.iter().map(|v| v * v).sum::<f64>()).exp()).with_derivatives(
            |x, p| {
                // ∂^k e^{-t²} = (-1)^k H_k(t) e^{-t²}, physicists' Hermite H_k
                x.iter()
                    .zip(p)
                    .map(|(&t, &k)| {
                        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                        sign * hermite(k, t) * (-t * t).exp()
                    })
                    .product()
            },
        )
    }

    /// The truncated Laguerre series `x ↦ Σ c_n ℒ_n(x)`.
    pub fn from_coefficients(c: CoefficientTensor) -> Self {
        let c = Arc::new(c);
        let c2 = Arc::clone(&c);
        FunctionHandle::new(c.dims(), Domain::Orthant, move |x| series_value(&c, x, None)).with_derivatives(
            move |x, p| series_value(&c2, x, Some(p)),
        )
    }

    /// Separable product `(x, y) ↦ u(x)·v(y)` with `x` the leading axes.
    pub fn tensor_product(u: &FunctionHandle, v: &FunctionHandle) -> Self {
        let m = u.dims;
        let domain = if u.domain == Domain::FullSpace && v.domain == Domain::FullSpace {
            Domain::FullSpace
        } else {
            Domain::Orthant
        };
        let (ue, ve) = (Arc::clone(&u.eval), Arc::clone(&v.eval));
        let eval: Arc<Evaluator> = Arc::new(move |z: &[f64]| ue(&z[..m]) * ve(&z[m..]));
        let deriv: Option<Arc<DerivEvaluator>> = match (&u.deriv, &v.deriv) {
            (Some(ud), Some(vd)) => {
                let (ud, vd) = (Arc::clone(ud), Arc::clone(vd));
                Some(Arc::new(move |z: &[f64], p: &[usize]| ud(&z[..m], &p[..m]) * vd(&z[m..], &p[m..])))
            }
            _ => None,
        };
        FunctionHandle::from_parts(m + v.dims, domain, eval, deriv)
    }

    /// `Σ α_i f_i`. All terms must share a dimension.
    pub fn linear_combination(terms: &[(f64, FunctionHandle)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::invalid("empty linear combination"))?;
        let dims = first.1.dims;
        for (_, f) in terms {
            crate::error::check_dims(dims, f.dims)?;
        }
        let domain = if terms.iter().all(|(_, f)| f.domain == Domain::FullSpace) {
            Domain::FullSpace
        } else {
            Domain::Orthant
        };
        let parts: Vec<(f64, Arc<Evaluator>)> = terms.iter().map(|(a, f)| (*a, Arc::clone(&f.eval))).collect();
        let eval: Arc<Evaluator> = Arc::new(move |x: &[f64]| parts.iter().map(|(a, f)| a * f(x)).sum());
        let deriv: Option<Arc<DerivEvaluator>> = if terms.iter().all(|(_, f)| f.deriv.is_some()) {
            let parts: Vec<(f64, Arc<DerivEvaluator>)> =
                terms.iter().map(|(a, f)| (*a, Arc::clone(f.deriv.as_ref().unwrap()))).collect();
            Some(Arc::new(move |x: &[f64], p: &[usize]| parts.iter().map(|(a, f)| a * f(x, p)).sum()))
        } else {
            None
        };
        Ok(FunctionHandle::from_parts(dims, domain, eval, deriv))
    }

    /// Parses the built-in names `laguerre:n[,n…]`, `expdecay:α` and
    /// `gaussian`. `dims` applies to the latter two.
    pub fn named(spec: &str, dims: usize) -> Result<Self> {
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (spec.trim(), None),
        };
        match (name, arg) {
            ("laguerre", Some(a)) => {
                let idx = parse_usize_list(a)?;
                Ok(FunctionHandle::laguerre(MultiIndex::new(idx)?))
            }
            ("expdecay", Some(a)) => {
                let alpha: f64 = a.parse().map_err(|_| Error::invalid(format!("bad decay rate '{a}'")))?;
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(Error::invalid("decay rate must be positive"));
                }
                Ok(FunctionHandle::exp_decay(dims, alpha))
            }
            ("gaussian", None) => Ok(FunctionHandle::gaussian(dims)),
            _ => Err(Error::invalid(format!(
                "unknown function '{spec}' (expected laguerre:n[,n..], expdecay:alpha or gaussian)"
            ))),
        }
    }
}

pub(crate) fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::invalid(format!("bad integer '{t}' in '{s}'"))))
        .collect()
}

fn hermite(k: usize, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * t);
    if k == 0 {
        return prev;
    }
    for j in 1..k {
        let next = 2.0 * t * cur - 2.0 * j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

// Σ c_n D^p ℒ_n(x), evaluated from per-axis derivative tables.
fn series_value(c: &CoefficientTensor, x: &[f64], p: Option<&[usize]>) -> f64 {
    let bounds = c.degree_bounds().as_slice();
    let tables: Vec<Vec<f64>> = bounds
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            if b == 0 {
                return Vec::new();
            }
            match p {
                Some(p) if p[i] > 0 => crate::basis::laguerre_fn_deriv_all(b - 1, p[i], x[i]),
                _ => {
                    let mut t = vec![0.0; b];
                    weighted_ladder(0, x[i], &mut t);
                    t
                }
            }
        })
        .collect();
    crate::tensor::contract_all(c.values(), bounds, &tables)
}
