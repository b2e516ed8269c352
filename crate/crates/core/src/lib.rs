//! Spectral analysis on the positive orthant `ℝ^d₊` in the Laguerre basis
//! `ℒ_n(x) = ∏ᵢ L_{n_i}(x_i) e^{−x_i/2}`.
//!
//! The pieces:
//!
//! - [`basis`] evaluates Laguerre polynomials, functions and derivatives;
//! - [`quadrature`] builds Gauss–Laguerre rules for plain `dx` integrals;
//! - [`transform`] maps functions to coefficient tensors and back;
//! - [`decay`] classifies coefficient sequences by their growth;
//! - [`operators`] applies `E = ∏ (D x D − x/4)`, diagonal in the basis;
//! - [`convolution`] convolves on the orthant using coefficients only;
//! - [`kernel`] represents integral kernels as coefficient matrices;
//! - [`extension`] continues functions smoothly to all of `ℝ^d`.

// index loops mirror the recurrences and stencil formulas
#![allow(clippy::needless_range_loop)]

pub mod basis;
pub mod cli;
pub mod convolution;
pub mod decay;
pub mod error;
pub mod extension;
pub mod fd;
pub mod function;
pub mod kernel;
pub mod multi_index;
pub mod operators;
pub mod quadrature;
pub mod samples;
pub mod selftest;
pub mod tensor;
pub mod transform;

pub use convolution::{convolve_coeff, convolve_direct, Convolution};
pub use decay::{decay_report, DecayClass, DecayReport};
pub use error::{Error, Result};
pub use extension::{extend_1d, extend_nd, extension_quality, seeley_weights, ExtensionQuality, ExtensionWeights};
pub use function::{Domain, FunctionHandle};
pub use kernel::{kernel_apply, kernel_from_function, tensor_coeff, KernelMatrix};
pub use multi_index::{MultiIndex, Point};
pub use operators::{apply_e_coeff, apply_e_pointwise, self_adjointness_residual};
pub use quadrature::{gauss_laguerre_rule, LegendreRule, QuadratureRule};
pub use tensor::CoefficientTensor;
pub use transform::{analyze, analyze_samples, schwartz_seminorm, synthesize};
