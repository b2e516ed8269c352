//! Multi-indices over ℕ₀^d and points in ℝ^d.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A d-tuple of nonnegative integers.
///
/// Used for basis indices, derivative orders, monomial weights and
/// per-axis degree bounds. The partial order is componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("multi-index must have at least one entry"));
        }
        Ok(MultiIndex(entries))
    }

    pub fn zeros(dims: usize) -> Self {
        assert!(dims >= 1, "multi-index dimension must be at least 1");
        MultiIndex(vec![0; dims])
    }

    pub fn splat(dims: usize, value: usize) -> Self {
        assert!(dims >= 1, "multi-index dimension must be at least 1");
        MultiIndex(vec![value; dims])
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    /// |n| = Σ n_i
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Product of the entries; the number of indices strictly below `self`.
    pub fn volume(&self) -> usize {
        self.0.iter().product()
    }

    pub fn max_entry(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.dims() == other.dims() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise `self < bounds` (every entry strictly below).
    pub fn lt_all(&self, bounds: &MultiIndex) -> bool {
        self.dims() == bounds.dims() && self.0.iter().zip(&bounds.0).all(|(a, b)| a < b)
    }

    /// Componentwise minimum.
    pub fn min(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Concatenation `(self, other)`, e.g. row and column indices of a kernel.
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    /// All multi-indices `n` with `n < bounds`, in row-major order
    /// (last axis fastest).
    pub fn iter_box(bounds: &MultiIndex) -> BoxIter {
        BoxIter {
            bounds: bounds.0.clone(),
            current: if bounds.volume() == 0 {
                None
            } else {
                Some(vec![0; bounds.dims()])
            },
        }
    }

    /// All multi-indices with `|n| ≤ total` in `dims` dimensions.
    pub fn iter_total(dims: usize, total: usize) -> impl Iterator<Item = MultiIndex> {
        MultiIndex::iter_box(&MultiIndex::splat(dims, total + 1)).filter(move |n| n.total() <= total)
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        assert!(!v.is_empty(), "multi-index must have at least one entry");
        MultiIndex(v)
    }
}

impl<const D: usize> From<[usize; D]> for MultiIndex {
    fn from(v: [usize; D]) -> Self {
        MultiIndex::from(v.to_vec())
    }
}

impl Index<usize> for MultiIndex {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self == other {
            Some(Ordering::Equal)
        } else if self.le(other) {
            Some(Ordering::Less)
        } else if other.le(self) {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

pub struct BoxIter {
    bounds: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl Iterator for BoxIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut axis = cur.len();
        loop {
            if axis == 0 {
                self.current = None;
                break;
            }
            axis -= 1;
            cur[axis] += 1;
            if cur[axis] < self.bounds[axis] {
                break;
            }
            cur[axis] = 0;
        }
        Some(MultiIndex(out))
    }
}

/// A point of ℝ^d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("point must have at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("point coordinates must be finite"));
        }
        Ok(Point(coords))
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    /// All coordinates strictly positive.
    pub fn in_open_orthant(&self) -> bool {
        self.0.iter().all(|&c| c > 0.0)
    }

    /// All coordinates nonnegative.
    pub fn in_closed_orthant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point::new(v).expect("invalid point")
    }
}

impl<const D: usize> From<[f64; D]> for Point {
    fn from(v: [f64; D]) -> Self {
        Point::from(v.to_vec())
    }
}

impl Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_iteration_is_row_major() {
        let b = MultiIndex::from([2, 3]);
        let all: Vec<_> = MultiIndex::iter_box(&b).map(|n| n.into_vec()).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        assert_eq!(all[5], vec![1, 2]);
    }

    #[test]
    fn empty_box_yields_nothing() {
        assert_eq!(MultiIndex::iter_box(&MultiIndex::from([3, 0])).count(), 0);
    }

    #[test]
    fn partial_order() {
        let a = MultiIndex::from([1, 2]);
        let b = MultiIndex::from([2, 2]);
        let c = MultiIndex::from([0, 3]);
        assert!(a < b);
        assert_eq!(a.partial_cmp(&c), None);
        assert_eq!(a.total(), 3);
        assert!(!a.le(&MultiIndex::from([1])));
    }

    #[test]
    fn total_degree_iteration() {
        assert_eq!(MultiIndex::iter_total(2, 2).count(), 6);
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(MultiIndex::new(vec![]).is_err());
        assert!(Point::new(vec![]).is_err());
        assert!(Point::new(vec![f64::NAN]).is_err());
        let p = Point::from([0.0, 1.0]);
        assert!(p.in_closed_orthant());
        assert!(!p.in_open_orthant());
    }
}
