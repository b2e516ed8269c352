//! Gauss rules on the half line and on boxes.
//!
//! Nodes come from the eigenvalues of the symmetric tridiagonal Jacobi
//! matrix (Golub–Welsch), refined by Newton steps on the orthogonal
//! polynomial. Weights are then taken from closed forms rather than from
//! eigenvector components: the half-line rule is used with weights scaled by
//! `e^{+x}`, and eigenvector-based weights lose all relative accuracy for the
//! large nodes where `e^{-x}` is tiny.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::basis::weighted_ladder;
use crate::error::{Error, Result};

/// m-point Gauss–Laguerre rule prepared for plain `dx` integration on (0, ∞).
///
/// `Σ wᵢ h(xᵢ) ≈ ∫₀^∞ h(x) dx`, exact when `h = e^{-x}·p(x)` with
/// `deg p ≤ 2m−1`. The classical weights (for the weight function `e^{-x}`)
/// are kept in `raw_weights`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    raw_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for plain `dx` integration (classical weights times `e^{x}`).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Classical Gauss–Laguerre weights for `∫ e^{-x} p(x) dx`.
    pub fn raw_weights(&self) -> &[f64] {
        &self.raw_weights
    }

    pub fn exactness_degree(&self) -> usize {
        2 * self.len() - 1
    }

    /// `∫₀^∞ h(x) dx` by the rule.
    pub fn integrate(&self, mut h: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * h(x)).sum()
    }
}

/// Gauss–Laguerre rule with `m` nodes.
pub fn gauss_laguerre_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::invalid("quadrature rule needs at least one node"));
    }
    let diag: Vec<f64> = (0..m).map(|k| (2 * k + 1) as f64).collect();
    let off: Vec<f64> = (1..m).map(|k| k as f64).collect();
    let mut nodes = jacobi_eigenvalues(&diag, &off);

    let mut ladder = vec![0.0; m + 2];
    let mf = m as f64;
    for x in nodes.iter_mut() {
        // Newton on L_m; L_m' = m (L_m - L_{m-1}) / x, the e^{-x/2} weights cancel
        for _ in 0..8 {
            weighted_ladder(0, *x, &mut ladder[..=m]);
            let denom = mf * (ladder[m] - ladder[m - 1]);
            if denom == 0.0 {
                break;
            }
            let step = *x * ladder[m] / denom;
            *x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
    }
    nodes.sort_by(|a, b| a.total_cmp(b));

    let mut weights = Vec::with_capacity(m);
    let mut raw_weights = Vec::with_capacity(m);
    for &x in &nodes {
        weighted_ladder(0, x, &mut ladder[..=m + 1]);
        // wᵢ e^{xᵢ} = xᵢ / ((m+1)² ℒ_{m+1}(xᵢ)²)
        let lm1 = ladder[m + 1];
        let w = x / ((mf + 1.0) * (mf + 1.0) * lm1 * lm1);
        weights.push(w);
        raw_weights.push(w * (-x).exp());
    }
    Ok(QuadratureRule { nodes, weights, raw_weights })
}

/// m-point Gauss–Legendre rule on [-1, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct LegendreRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl LegendreRule {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("quadrature rule needs at least one node"));
        }
        let diag = vec![0.0; m];
        let off: Vec<f64> = (1..m).map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt()).collect();
        let mut nodes = jacobi_eigenvalues(&diag, &off);
        let mut weights = Vec::with_capacity(m);
        for x in nodes.iter_mut() {
            let mut deriv = 0.0;
            for _ in 0..8 {
                let (p, dp) = legendre_with_derivative(m, *x);
                deriv = dp;
                let step = p / dp;
                *x -= step;
                if step.abs() <= 4.0 * f64::EPSILON {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(m, *x);
            if dp.is_finite() {
                deriv = dp;
            }
            weights.push(2.0 / ((1.0 - *x * *x) * deriv * deriv));
        }
        let mut pairs: Vec<(f64, f64)> = nodes.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(LegendreRule { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights affinely mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        (
            self.nodes.iter().map(|t| mid + half * t).collect(),
            self.weights.iter().map(|w| w * half).collect(),
        )
    }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let mf = m as f64;
    (cur, mf * (x * cur - prev) / (x * x - 1.0))
}

fn jacobi_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let m = diag.len();
    let mut j = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        j[(i, i)] = diag[i];
    }
    for (i, &b) in off.iter().enumerate() {
        j[(i, i + 1)] = b;
        j[(i + 1, i)] = b;
    }
    SymmetricEigen::new(j).eigenvalues.iter().copied().collect()
}
