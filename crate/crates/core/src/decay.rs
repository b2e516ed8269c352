//! Empirical classification of coefficient sequences.
//!
//! A sequence is in `s` (rapidly decreasing) when `Σ|a_n|² n^{2k} < ∞` for
//! every k, and in `s′` (slowly increasing) when `Σ|a_n|² n^{-2k} < ∞` for
//! some k. Those are statements about the infinite tail, so from a truncated
//! tensor only a heuristic verdict is possible: the tail of the shell
//! envelope `E_s = max_{|n|=s} |a_n|` is fitted to a power law `(s+1)^β`.
//!
//! * all shells past some point below the noise floor ⇒ numerically finite
//!   support, `β = −∞`, rapid
//! * `β < rapid_exponent` (default `−k_max`) ⇒ rapid
//! * `β > divergent_exponent` or a non-finite weighted sum ⇒ divergent
//! * otherwise slow (polynomial growth or slow decay)

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::CoefficientTensor;
use crate::transform::seminorm_sequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayClass {
    /// Consistent with membership in `s`.
    Rapid,
    /// Consistent with `s′ \ s`.
    Slow,
    /// Grows faster than any configured polynomial.
    Divergent,
}

#[derive(Clone, Copy, Debug)]
pub struct DecayConfig {
    pub k_max: u32,
    /// Exponents below this classify as rapid. Defaults to `−k_max`.
    pub rapid_exponent: f64,
    pub divergent_exponent: f64,
    /// Relative level below which entries count as zero.
    pub noise_floor: f64,
}

impl DecayConfig {
    pub fn with_k_max(k_max: u32) -> Self {
        DecayConfig { k_max, rapid_exponent: -(k_max as f64), divergent_exponent: 12.0, noise_floor: 1e-12 }
    }
}

impl Default for DecayConfig {
    fn default() -> Self {
        DecayConfig::with_k_max(4)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub k_max: u32,
    /// `S_k = Σ|a_n|² ∏(n_i+½)^{2k}` for `k = 0..=k_max`.
    pub weighted_sums: Vec<f64>,
    /// Fitted tail exponent β; `-inf` for numerically finite support.
    #[serde(serialize_with = "serialize_exponent")]
    pub decay_exponent: f64,
    pub classification: DecayClass,
}

fn serialize_exponent<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("inf")
    }
}

pub fn decay_report(c: &CoefficientTensor, k_max: u32) -> Result<DecayReport> {
    decay_report_with(c, &DecayConfig::with_k_max(k_max))
}

pub fn decay_report_with(c: &CoefficientTensor, cfg: &DecayConfig) -> Result<DecayReport> {
    if cfg.k_max < 1 {
        return Err(Error::invalid("k_max must be at least 1"));
    }
    let weighted_sums: Vec<f64> = (0..=cfg.k_max).map(|k| seminorm_sequence(c, k)).collect();
    let decay_exponent = tail_exponent(c, cfg.noise_floor);
    let classification = if weighted_sums.iter().any(|s| !s.is_finite()) || decay_exponent > cfg.divergent_exponent {
        DecayClass::Divergent
    } else if decay_exponent < cfg.rapid_exponent {
        DecayClass::Rapid
    } else {
        DecayClass::Slow
    };
    Ok(DecayReport { k_max: cfg.k_max, weighted_sums, decay_exponent, classification })
}

fn tail_exponent(c: &CoefficientTensor, noise_floor: f64) -> f64 {
    let peak = c.max_abs();
    if peak == 0.0 {
        return f64::NEG_INFINITY;
    }
    let max_shell: usize = c.degree_bounds().as_slice().iter().map(|b| b - 1).sum();
    let mut envelope = vec![0.0f64; max_shell + 1];
    for (n, v) in c.iter() {
        let s = n.total();
        envelope[s] = envelope[s].max(v.abs());
    }
    let floor = noise_floor * peak;
    let last = envelope.iter().rposition(|&e| e > floor).unwrap();
    if last < max_shell {
        return f64::NEG_INFINITY;
    }
    let significant = |from: usize| -> Vec<(f64, f64)> {
        (from..=max_shell)
            .filter(|&s| envelope[s] > floor)
            .map(|s| (((s + 1) as f64).ln(), envelope[s].ln()))
            .collect()
    };
    let mut pts = significant(max_shell / 2);
    if pts.len() < 2 {
        pts = significant(0);
    }
    if pts.len() < 2 {
        return f64::NEG_INFINITY;
    }
    least_squares_slope(&pts)
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
