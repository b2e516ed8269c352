//! Kernels on the product orthant as Laguerre coefficient matrices.
//!
//! A kernel `K(x, y)` with `x ∈ ℝ^m₊`, `y ∈ ℝ^n₊` has coefficients
//! `b_{p,q} = ⟨K, ℒ_p ⊗ ℒ_q⟩`; the operator `f ↦ ∫ K(·, y) f(y) dy` then acts
//! on coefficients as the matrix–vector product `a ↦ B a`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::function::FunctionHandle;
use crate::multi_index::MultiIndex;
use crate::quadrature::QuadratureRule;
use crate::tensor::CoefficientTensor;
use crate::transform::analyze;

/// Dense matrix with rows indexed by `p < row_bounds` (x side) and columns
/// by `q < col_bounds` (y side), both in row-major multi-index order.
///
/// Serialized as `{"m", "n", "row_bounds", "col_bounds", "entries"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelRepr", into = "KernelRepr")]
pub struct KernelMatrix {
    row_bounds: MultiIndex,
    col_bounds: MultiIndex,
    entries: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct KernelRepr {
    m: usize,
    n: usize,
    row_bounds: Vec<usize>,
    col_bounds: Vec<usize>,
    entries: Vec<f64>,
}

impl TryFrom<KernelRepr> for KernelMatrix {
    type Error = Error;
    fn try_from(r: KernelRepr) -> Result<Self> {
        check_dims(r.m, r.row_bounds.len())?;
        check_dims(r.n, r.col_bounds.len())?;
        KernelMatrix::new(MultiIndex::new(r.row_bounds)?, MultiIndex::new(r.col_bounds)?, r.entries)
    }
}

impl From<KernelMatrix> for KernelRepr {
    fn from(k: KernelMatrix) -> Self {
        KernelRepr {
            m: k.row_bounds.dims(),
            n: k.col_bounds.dims(),
            row_bounds: k.row_bounds.into_vec(),
            col_bounds: k.col_bounds.into_vec(),
            entries: k.entries,
        }
    }
}

impl KernelMatrix {
    pub fn new(row_bounds: MultiIndex, col_bounds: MultiIndex, entries: Vec<f64>) -> Result<Self> {
        let expected = row_bounds.volume() * col_bounds.volume();
        if entries.len() != expected {
            return Err(Error::invalid(format!(
                "{} kernel entries supplied for bounds {row_bounds} x {col_bounds} (expected {expected})",
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("kernel entries must be finite"));
        }
        Ok(KernelMatrix { row_bounds, col_bounds, entries })
    }

    /// Square identity on the box `bounds`.
    pub fn identity(bounds: MultiIndex) -> Self {
        let n = bounds.volume();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        KernelMatrix { row_bounds: bounds.clone(), col_bounds: bounds, entries }
    }

    pub fn row_bounds(&self) -> &MultiIndex {
        &self.row_bounds
    }

    pub fn col_bounds(&self) -> &MultiIndex {
        &self.col_bounds
    }

    pub fn rows(&self) -> usize {
        self.row_bounds.volume()
    }

    pub fn cols(&self) -> usize {
        self.col_bounds.volume()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.cols() + col]
    }

    /// `self + alpha·other`; shapes must agree.
    pub fn axpy(&self, alpha: f64, other: &KernelMatrix) -> Result<Self> {
        if self.row_bounds != other.row_bounds || self.col_bounds != other.col_bounds {
            return Err(Error::BoundMismatch {
                limit: self.row_bounds.concat(&self.col_bounds).into_vec(),
                found: other.row_bounds.concat(&other.col_bounds).into_vec(),
            });
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + alpha * b).collect();
        Ok(KernelMatrix { entries, ..self.clone() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("kernel serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Coefficients of `K` on `ℝ^{m+n}₊`, with the first `m` variables as rows.
pub fn kernel_from_function(
    k: &FunctionHandle,
    row_bounds: &MultiIndex,
    col_bounds: &MultiIndex,
    rule: &QuadratureRule,
) -> Result<KernelMatrix> {
    check_dims(row_bounds.dims() + col_bounds.dims(), k.dims())?;
    let c = analyze(k, &row_bounds.concat(col_bounds), rule)?;
    KernelMatrix::new(row_bounds.clone(), col_bounds.clone(), c.into_values())
}

/// `(B a)_p = Σ_q B_{p,q} a_q`. A coefficient tensor smaller than the
/// column box is padded with zeros; a larger one is an error.
pub fn kernel_apply(b: &KernelMatrix, a: &CoefficientTensor) -> Result<CoefficientTensor> {
    check_dims(b.col_bounds.dims(), a.dims())?;
    if !a.degree_bounds().le(&b.col_bounds) {
        return Err(Error::BoundMismatch {
            limit: b.col_bounds.as_slice().to_vec(),
            found: a.degree_bounds().as_slice().to_vec(),
        });
    }
    let a = a.resized(b.col_bounds.clone())?;
    let x = a.values();
    let cols = b.cols();
    let out: Vec<f64> = b
        .entries
        .par_chunks(cols.max(1))
        .take(b.rows())
        .map(|row| row.iter().zip(x).map(|(w, v)| w * v).sum())
        .collect();
    let out = if cols == 0 { vec![0.0; b.rows()] } else { out };
    CoefficientTensor::new(b.row_bounds.clone(), out)
}

/// Rank-one kernel `B_{p,q} = u_p v_q`.
pub fn tensor_coeff(u: &CoefficientTensor, v: &CoefficientTensor) -> KernelMatrix {
    let entries = u.values().iter().flat_map(|&up| v.values().iter().map(move |&vq| up * vq)).collect();
    KernelMatrix {
        row_bounds: u.degree_bounds().clone(),
        col_bounds: v.degree_bounds().clone(),
        entries,
    }
}
