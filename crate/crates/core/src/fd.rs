//! Finite-difference stencils.
//!
//! Weights come from Fornberg's recursion for arbitrary offsets, so the
//! same code serves centered stencils in the interior and one-sided ones at
//! the orthant boundary. All stencils here are fourth-order accurate.

/// Accuracy order of every stencil built in this module.
pub const ACCURACY: usize = 4;

/// Fornberg weights: `Σ_j w_j f(x0 + offsets_j·h) ≈ h^order · f^{(order)}(x0)`.
pub fn fornberg_weights(order: usize, offsets: &[f64]) -> Vec<f64> {
    let n = offsets.len();
    assert!(n > order, "need more than {order} stencil points");
    // c[j][k]: weight of point j for derivative k
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = offsets[0];
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = offsets[i];
        for j in 0..i {
            let c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Where the stencil may reach relative to the evaluation point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Central,
    /// Offsets ≥ 0.
    Forward,
    /// Offsets ≤ 0.
    Backward,
}

/// A one-dimensional stencil already divided by `h^order`.
#[derive(Clone, Debug)]
pub struct Stencil {
    pub offsets: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Stencil {
    pub fn new(order: usize, h: f64, side: Side) -> Stencil {
        if order == 0 {
            return Stencil { offsets: vec![0.0], weights: vec![1.0] };
        }
        let unit: Vec<f64> = match side {
            Side::Central => {
                let half = order.div_ceil(2) + ACCURACY / 2 - 1;
                (0..=2 * half).map(|i| i as f64 - half as f64).collect()
            }
            Side::Forward => (0..order + ACCURACY).map(|i| i as f64).collect(),
            Side::Backward => (0..order + ACCURACY).map(|i| -(i as f64)).collect(),
        };
        let scale = h.powi(order as i32);
        let weights = fornberg_weights(order, &unit).into_iter().map(|w| w / scale).collect();
        Stencil { offsets: unit.into_iter().map(|u| u * h).collect(), weights }
    }

    /// Largest |offset| in units of `h`.
    pub fn reach(order: usize, side: Side) -> f64 {
        match (order, side) {
            (0, _) => 0.0,
            (_, Side::Central) => (order.div_ceil(2) + ACCURACY / 2 - 1) as f64,
            _ => (order + ACCURACY - 1) as f64,
        }
    }

    pub fn apply(&self, mut f: impl FnMut(f64) -> f64, x: f64) -> f64 {
        self.offsets.iter().zip(&self.weights).map(|(o, w)| w * f(x + o)).sum()
    }
}

/// Step balancing truncation against rounding for a derivative of the given
/// order: `h ≈ ε^{1/(order+4)}` scaled by `max(1, |x|)`.
pub fn default_step(order: usize, x: f64) -> f64 {
    f64::EPSILON.powf(1.0 / (order + ACCURACY) as f64) * x.abs().max(1.0)
}

/// Picks a stencil for `order` at coordinate `x`. With `orthant` set, a
/// centered stencil that would cross zero is replaced by a forward one.
pub fn stencil_at(order: usize, x: f64, orthant: bool) -> Stencil {
    let h = default_step(order, x);
    let side = if orthant && x - Stencil::reach(order, Side::Central) * h < 0.0 {
        Side::Forward
    } else {
        Side::Central
    };
    Stencil::new(order, h, side)
}

/// Tensor-product stencil for a mixed partial `D^p f(x)`.
pub fn mixed_partial(f: &dyn Fn(&[f64]) -> f64, x: &[f64], stencils: &[Stencil]) -> f64 {
    let mut point = x.to_vec();
    recurse(f, x, stencils, 0, &mut point)
}

fn recurse(f: &dyn Fn(&[f64]) -> f64, x: &[f64], stencils: &[Stencil], axis: usize, point: &mut Vec<f64>) -> f64 {
    if axis == stencils.len() {
        return f(point);
    }
    let s = &stencils[axis];
    let mut acc = 0.0;
    for (o, w) in s.offsets.iter().zip(&s.weights) {
        point[axis] = x[axis] + o;
        acc += w * recurse(f, x, stencils, axis + 1, point);
    }
    point[axis] = x[axis];
    acc
}

/// `D^p f(x)` with default steps. Stencils stay inside the closed orthant
/// when `orthant` is set.
pub fn partial(f: &dyn Fn(&[f64]) -> f64, x: &[f64], p: &[usize], orthant: bool) -> f64 {
    let stencils: Vec<Stencil> = p.iter().zip(x).map(|(&pi, &xi)| stencil_at(pi, xi, orthant)).collect();
    mixed_partial(f, x, &stencils)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_central_weights() {
        let w = fornberg_weights(1, &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        let expect = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        let w2 = fornberg_weights(2, &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        let expect2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w2.iter().zip(expect2) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn derivatives_of_exponential() {
        let f = |x: f64| (0.3 * x).exp();
        for order in 1..=4 {
            let exact = 0.3f64.powi(order as i32) * (0.3f64 * 1.2).exp();
            for side in [Side::Central, Side::Forward, Side::Backward] {
                let s = Stencil::new(order, default_step(order, 1.2), side);
                let v = s.apply(f, 1.2);
                // one-sided stencils amplify rounding more at high order
                let tol = if order <= 2 || side == Side::Central { 1e-6 } else { 5e-5 };
                assert!((v - exact).abs() < tol, "order {order} {side:?}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn orthant_stencil_never_crosses_zero() {
        let s = stencil_at(2, 1e-3, true);
        assert!(s.offsets.iter().all(|o| 1e-3 + o >= 0.0));
        let g = |x: &[f64]| x[0] * x[0] * x[1];
        let v = partial(&g, &[1e-3, 2.0], &[2, 1], true);
        assert!((v - 2.0).abs() < 1e-6);
    }
}
