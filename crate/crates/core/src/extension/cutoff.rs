//! Smooth cutoff `χ` with exact derivatives.
//!
//! `χ(s) = 1` for `s ≥ −½`, `0` for `s ≤ −1`, and in between
//! `ψ(u) / (ψ(u) + ψ(1−u))` with `u = 2(s+1)` and `ψ(t) = e^{−1/t}`.
//! Derivatives come from truncated Taylor arithmetic, which is exact up to
//! rounding.

/// Truncated Taylor series `Σ_k c_k δ^k`, `k ≤ order`.
#[derive(Clone, Debug)]
struct Jet(Vec<f64>);

impl Jet {
    fn variable(x0: f64, slope: f64, order: usize) -> Jet {
        let mut c = vec![0.0; order + 1];
        c[0] = x0;
        if order >= 1 {
            c[1] = slope;
        }
        Jet(c)
    }

    fn constant(v: f64, order: usize) -> Jet {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Jet(c)
    }

    fn sub(&self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    fn add(&self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, o: &Jet) -> Jet {
        let n = self.0.len();
        let mut c = vec![0.0; n];
        for k in 0..n {
            let s: f64 = (1..=k).map(|j| o.0[j] * c[k - j]).sum();
            c[k] = (self.0[k] - s) / o.0[0];
        }
        Jet(c)
    }

    fn exp(&self) -> Jet {
        let n = self.0.len();
        let mut c = vec![0.0; n];
        c[0] = self.0[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| j as f64 * self.0[j] * c[k - j]).sum();
            c[k] = s / k as f64;
        }
        Jet(c)
    }

    fn neg(&self) -> Jet {
        Jet(self.0.iter().map(|a| -a).collect())
    }
}

/// `χ^{(i)}(s)` for `i = 0..=order`.
pub fn cutoff_derivatives(s: f64, order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order + 1];
    if s >= -0.5 {
        out[0] = 1.0;
        return out;
    }
    if s <= -1.0 {
        return out;
    }
    let u = Jet::variable(2.0 * (s + 1.0), 2.0, order);
    let one = Jet::constant(1.0, order);
    let psi = |t: &Jet| one.div(t).neg().exp();
    let a = psi(&u);
    let b = psi(&one.sub(&u));
    let chi = a.div(&a.add(&b));
    let mut fact = 1.0;
    for (i, c) in chi.0.iter().enumerate() {
        if i > 0 {
            fact *= i as f64;
        }
        out[i] = c * fact;
    }
    out
}

pub fn cutoff(s: f64) -> f64 {
    cutoff_derivatives(s, 0)[0]
}
