//! Dense coefficient tensors over a rectangular box of multi-indices.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::multi_index::MultiIndex;

/// Laguerre coefficients `c_n` for all `n < degree_bounds`, stored row-major
/// (last axis fastest).
///
/// Serialized as `{"dims": d, "degree_bounds": [..], "values": [..]}`;
/// floats are written in shortest round-trip form, so JSON round trips are
/// bit-exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorRepr", into = "TensorRepr")]
pub struct CoefficientTensor {
    bounds: MultiIndex,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TensorRepr {
    dims: usize,
    degree_bounds: Vec<usize>,
    values: Vec<f64>,
}

impl TryFrom<TensorRepr> for CoefficientTensor {
    type Error = Error;
    fn try_from(r: TensorRepr) -> Result<Self> {
        check_dims(r.dims, r.degree_bounds.len())?;
        CoefficientTensor::new(MultiIndex::new(r.degree_bounds)?, r.values)
    }
}

impl From<CoefficientTensor> for TensorRepr {
    fn from(c: CoefficientTensor) -> Self {
        TensorRepr { dims: c.dims(), degree_bounds: c.bounds.into_vec(), values: c.values }
    }
}

impl CoefficientTensor {
    pub fn new(bounds: MultiIndex, values: Vec<f64>) -> Result<Self> {
        if values.len() != bounds.volume() {
            return Err(Error::invalid(format!(
                "{} values supplied for degree bounds {bounds} (expected {})",
                values.len(),
                bounds.volume()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("coefficient values must be finite"));
        }
        Ok(CoefficientTensor { bounds, values })
    }

    pub fn zeros(bounds: MultiIndex) -> Self {
        let len = bounds.volume();
        CoefficientTensor { bounds, values: vec![0.0; len] }
    }

    /// The unit tensor `e_n`.
    pub fn unit(bounds: MultiIndex, n: &MultiIndex) -> Result<Self> {
        let mut t = CoefficientTensor::zeros(bounds);
        let off = t.offset(n).ok_or_else(|| Error::BoundMismatch {
            limit: t.bounds.as_slice().to_vec(),
            found: n.as_slice().to_vec(),
        })?;
        t.values[off] = 1.0;
        Ok(t)
    }

    pub fn from_fn(bounds: MultiIndex, mut f: impl FnMut(&MultiIndex) -> f64) -> Self {
        let values = MultiIndex::iter_box(&bounds).map(|n| f(&n)).collect();
        CoefficientTensor { bounds, values }
    }

    pub fn dims(&self) -> usize {
        self.bounds.dims()
    }

    pub fn degree_bounds(&self) -> &MultiIndex {
        &self.bounds
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Flat offset of `n`, or `None` outside the box.
    pub fn offset(&self, n: &MultiIndex) -> Option<usize> {
        offset_in(self.bounds.as_slice(), n.as_slice())
    }

    /// Inverse of [`offset`](Self::offset).
    pub fn index_of(&self, mut offset: usize) -> MultiIndex {
        let b = self.bounds.as_slice();
        let mut idx = vec![0; b.len()];
        for axis in (0..b.len()).rev() {
            idx[axis] = offset % b[axis];
            offset /= b[axis];
        }
        MultiIndex::from(idx)
    }

    /// `c_n`, with zero outside the stored box.
    pub fn get(&self, n: &MultiIndex) -> f64 {
        self.offset(n).map_or(0.0, |o| self.values[o])
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        MultiIndex::iter_box(&self.bounds).zip(self.values.iter().copied())
    }

    pub fn map(&self, mut f: impl FnMut(&MultiIndex, f64) -> f64) -> Self {
        let values = self.iter().map(|(n, v)| f(&n, v)).collect();
        CoefficientTensor { bounds: self.bounds.clone(), values }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        self.map(|_, v| alpha * v)
    }

    /// `self + alpha·other`, same bounds required.
    pub fn axpy(&self, alpha: f64, other: &CoefficientTensor) -> Result<Self> {
        self.same_shape(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + alpha * b).collect();
        Ok(CoefficientTensor { bounds: self.bounds.clone(), values })
    }

    /// Truncates or zero-pads to `bounds`.
    pub fn resized(&self, bounds: MultiIndex) -> Result<Self> {
        check_dims(self.dims(), bounds.dims())?;
        Ok(CoefficientTensor::from_fn(bounds, |n| self.get(n)))
    }

    /// Coefficient pairing `Σ b_n a_n` over the common box. This is how a
    /// slowly increasing coefficient sequence acts on a test function.
    pub fn pair(&self, other: &CoefficientTensor) -> Result<f64> {
        check_dims(self.dims(), other.dims())?;
        let common = self.bounds.min(&other.bounds);
        Ok(MultiIndex::iter_box(&common).map(|n| self.get(&n) * other.get(&n)).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest entrywise difference; entries missing on one side count as 0.
    pub fn max_abs_diff(&self, other: &CoefficientTensor) -> Result<f64> {
        check_dims(self.dims(), other.dims())?;
        let b = MultiIndex::from(
            self.bounds.as_slice().iter().zip(other.bounds.as_slice()).map(|(a, b)| *a.max(b)).collect::<Vec<_>>(),
        );
        Ok(MultiIndex::iter_box(&b).fold(0.0, |m, n| m.max((self.get(&n) - other.get(&n)).abs())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tensor serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn same_shape(&self, other: &CoefficientTensor) -> Result<()> {
        check_dims(self.dims(), other.dims())?;
        if self.bounds != other.bounds {
            return Err(Error::BoundMismatch {
                limit: self.bounds.as_slice().to_vec(),
                found: other.bounds.as_slice().to_vec(),
            });
        }
        Ok(())
    }
}

pub(crate) fn offset_in(bounds: &[usize], n: &[usize]) -> Option<usize> {
    if bounds.len() != n.len() {
        return None;
    }
    let mut off = 0;
    for (&b, &k) in bounds.iter().zip(n) {
        if k >= b {
            return None;
        }
        off = off * b + k;
    }
    Some(off)
}

/// `Σ_n values[n] ∏ᵢ tables[i][n_i]` for a row-major tensor of shape `bounds`.
pub(crate) fn contract_all(values: &[f64], bounds: &[usize], tables: &[Vec<f64>]) -> f64 {
    let mut data = values.to_vec();
    let mut len = data.len();
    for axis in (0..bounds.len()).rev() {
        let b = bounds[axis];
        if b == 0 {
            return 0.0;
        }
        let t = &tables[axis];
        let outer = len / b;
        for o in 0..outer {
            let row = &data[o * b..(o + 1) * b];
            let s: f64 = row.iter().zip(t).map(|(v, w)| v * w).sum();
            data[o] = s;
        }
        len = outer;
    }
    data[0]
}

/// Applies `matrix` (`rows × shape[axis]`, row-major) along `axis` of a
/// row-major tensor. Returns the new data; `shape[axis]` becomes `rows`.
pub(crate) fn mode_product(data: &[f64], shape: &mut [usize], axis: usize, matrix: &[f64], rows: usize) -> Vec<f64> {
    let cols = shape[axis];
    debug_assert_eq!(matrix.len(), rows * cols);
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![0.0; outer * rows * inner];
    for o in 0..outer {
        for r in 0..rows {
            let mrow = &matrix[r * cols..(r + 1) * cols];
            let dst = &mut out[(o * rows + r) * inner..(o * rows + r + 1) * inner];
            for (c, &m) in mrow.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                let src = &data[(o * cols + c) * inner..(o * cols + c + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += m * s;
                }
            }
        }
    }
    shape[axis] = rows;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn offsets_are_a_bijection() {
        let t = CoefficientTensor::zeros(MultiIndex::from([3, 4, 2]));
        for off in 0..t.len() {
            assert_eq!(t.offset(&t.index_of(off)), Some(off));
        }
        assert_eq!(t.offset(&MultiIndex::from([3, 0, 0])), None);
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(CoefficientTensor::new(MultiIndex::from([2]), vec![1.0]).is_err());
        assert!(CoefficientTensor::new(MultiIndex::from([1]), vec![f64::INFINITY]).is_err());
        let bad = r#"{"dims":2,"degree_bounds":[2],"values":[1,2]}"#;
        assert!(CoefficientTensor::from_json(bad).is_err());
        assert!(CoefficientTensor::unit(MultiIndex::from([2]), &MultiIndex::from([2])).is_err());
    }

    #[test]
    fn pairing_uses_common_box() {
        let a = CoefficientTensor::from_fn(MultiIndex::from([3]), |n| n[0] as f64 + 1.0);
        let b = CoefficientTensor::from_fn(MultiIndex::from([5]), |_| 2.0);
        assert_eq!(a.pair(&b).unwrap(), 12.0);
    }

    #[test]
    fn contraction_matches_naive_sum() {
        let t = CoefficientTensor::from_fn(MultiIndex::from([2, 3]), |n| (n[0] * 3 + n[1]) as f64);
        let tables = vec![vec![1.0, 2.0], vec![0.5, -1.0, 3.0]];
        let naive: f64 = t.iter().map(|(n, v)| v * tables[0][n[0]] * tables[1][n[1]]).sum();
        assert_eq!(contract_all(t.values(), &[2, 3], &tables), naive);
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(
            bounds in prop::collection::vec(1usize..4, 1..4),
            seed in prop::collection::vec(-1e300f64..1e300, 64),
        ) {
            let b = MultiIndex::from(bounds);
            let mut i = 0;
            let t = CoefficientTensor::from_fn(b, |_| { i += 1; seed[i % seed.len()] / (i as f64).powi(7) });
            let back = CoefficientTensor::from_json(&t.to_json()).unwrap();
            prop_assert!(t.values().iter().zip(back.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
            prop_assert_eq!(t.degree_bounds(), back.degree_bounds());
        }
    }
}
