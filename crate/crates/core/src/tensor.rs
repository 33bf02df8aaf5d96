//! Dense coordinate tensors with an explicit variance signature.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::TensorError;

/// Position of an index slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Upper,
    Lower,
}

/// Components of a tensor at a point, stored row-major in slot order.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorValue {
    dims: Vec<usize>,
    variance: Vec<Variance>,
    data: Vec<f64>,
}

impl TensorValue {
    pub fn zeros(dims: &[usize], variance: &[Variance]) -> Self {
        assert_eq!(dims.len(), variance.len(), "one variance per slot");
        let len = dims.iter().product();
        TensorValue {
            dims: dims.to_vec(),
            variance: variance.to_vec(),
            data: vec![0.0; len],
        }
    }

    /// A rank-0 tensor.
    pub fn scalar(value: f64) -> Self {
        TensorValue {
            dims: Vec::new(),
            variance: Vec::new(),
            data: vec![value],
        }
    }

    pub fn from_data(
        dims: &[usize],
        variance: &[Variance],
        data: Vec<f64>,
    ) -> Result<Self, TensorError> {
        if dims.len() != variance.len() {
            return Err(TensorError::ShapeMismatch {
                expected: dims.len(),
                found: variance.len(),
            });
        }
        let len: usize = dims.iter().product();
        if data.len() != len {
            return Err(TensorError::ShapeMismatch {
                expected: len,
                found: data.len(),
            });
        }
        Ok(TensorValue {
            dims: dims.to_vec(),
            variance: variance.to_vec(),
            data,
        })
    }

    /// Builds a tensor by evaluating `f` at every multi-index.
    pub fn from_fn(dims: &[usize], variance: &[Variance], mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Self::zeros(dims, variance);
        let mut idx = vec![0usize; dims.len()];
        for flat in 0..t.data.len() {
            t.data[flat] = f(&idx);
            // odometer increment, last slot fastest
            for slot in (0..idx.len()).rev() {
                idx[slot] += 1;
                if idx[slot] < dims[slot] {
                    break;
                }
                idx[slot] = 0;
            }
        }
        t
    }

    /// Kronecker delta `δ^i_j`.
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(&[dim, dim], &[Variance::Upper, Variance::Lower], |ix| {
            if ix[0] == ix[1] {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.dims.len());
        index
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| {
                debug_assert!(i < d);
                acc * d + i
            })
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], value: f64) {
        let o = self.offset(index);
        self.data[o] = value;
    }

    /// Largest absolute component (∞-norm over components).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// ∞-norm of `self - other`; the shapes must agree.
    pub fn max_abs_diff(&self, other: &TensorValue) -> f64 {
        assert_eq!(self.dims, other.dims, "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Tensor product `self ⊗ other`; slots of `other` follow those of `self`.
    pub fn outer(&self, other: &TensorValue) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut variance = self.variance.clone();
        variance.extend_from_slice(&other.variance);
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in &self.data {
            data.extend(other.data.iter().map(|b| a * b));
        }
        TensorValue {
            dims,
            variance,
            data,
        }
    }

    /// Einstein contraction of an upper slot against a lower slot.
    pub fn contract(&self, upper_slot: usize, lower_slot: usize) -> Result<Self, TensorError> {
        let rank = self.rank();
        if upper_slot >= rank || lower_slot >= rank || upper_slot == lower_slot {
            return Err(TensorError::SlotMismatch {
                upper_slot,
                lower_slot,
            });
        }
        if self.variance[upper_slot] != Variance::Upper
            || self.variance[lower_slot] != Variance::Lower
            || self.dims[upper_slot] != self.dims[lower_slot]
        {
            return Err(TensorError::SlotMismatch {
                upper_slot,
                lower_slot,
            });
        }
        let kept: Vec<usize> = (0..rank)
            .filter(|&s| s != upper_slot && s != lower_slot)
            .collect();
        let dims: Vec<usize> = kept.iter().map(|&s| self.dims[s]).collect();
        let variance: Vec<Variance> = kept.iter().map(|&s| self.variance[s]).collect();
        let extent = self.dims[upper_slot];
        let mut full = vec![0usize; rank];
        let out = Self::from_fn(&dims, &variance, |ix| {
            for (k, &s) in kept.iter().enumerate() {
                full[s] = ix[k];
            }
            (0..extent)
                .map(|m| {
                    full[upper_slot] = m;
                    full[lower_slot] = m;
                    self.get(&full)
                })
                .sum()
        });
        Ok(out)
    }

    /// Reorders slots: slot `k` of the result is slot `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.rank());
        let dims: Vec<usize> = order.iter().map(|&s| self.dims[s]).collect();
        let variance: Vec<Variance> = order.iter().map(|&s| self.variance[s]).collect();
        let mut src = vec![0usize; self.rank()];
        Self::from_fn(&dims, &variance, |ix| {
            for (k, &s) in order.iter().enumerate() {
                src[s] = ix[k];
            }
            self.get(&src)
        })
    }
}

impl fmt::Debug for TensorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorValue")
            .field("dims", &self.dims)
            .field("variance", &self.variance)
            .field("data", &self.data)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Variance::{Lower, Upper};

    #[test]
    fn trace_of_identity() {
        let t = TensorValue::identity(2).contract(0, 1).unwrap();
        assert_eq!(t.rank(), 0);
        assert_eq!(t.data(), &[2.0]);
    }

    #[test]
    fn complex_structure_squares_to_minus_identity() {
        let j = TensorValue::from_data(&[2, 2], &[Upper, Lower], vec![0.0, -1.0, 1.0, 0.0]).unwrap();
        // (J∘J)^i_k = J^i_j J^j_k : contract slot 1 (lower j) with slot 2 (upper j)
        let jj = j.outer(&j).contract(2, 1).unwrap();
        assert_eq!(jj.variance(), &[Upper, Lower]);
        assert_eq!(jj.data(), &[-1.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn contraction_against_basis_vector_is_a_slice() {
        let dims = [3, 3, 3];
        let t = TensorValue::from_fn(&dims, &[Lower, Lower, Lower], |ix| {
            (ix[0] * 9 + ix[1] * 3 + ix[2]) as f64 * 0.37 - 2.0
        });
        for b in 0..3 {
            let e = TensorValue::from_fn(&[3], &[Upper], |ix| if ix[0] == b { 1.0 } else { 0.0 });
            let c = t.outer(&e).contract(3, 1).unwrap();
            for i in 0..3 {
                for k in 0..3 {
                    assert_eq!(c.get(&[i, k]), t.get(&[i, b, k]));
                }
            }
        }
    }

    #[test]
    fn contraction_commutes_with_scaling() {
        let t = TensorValue::from_fn(&[2, 2, 2], &[Upper, Lower, Lower], |ix| {
            (ix[0] + 2 * ix[1] + 3 * ix[2]) as f64
        });
        let a = t.scaled(2.5).contract(0, 2).unwrap();
        let b = t.contract(0, 2).unwrap().scaled(2.5);
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_slots() {
        let t = TensorValue::zeros(&[2, 3], &[Upper, Lower]);
        assert!(matches!(t.contract(0, 1), Err(TensorError::SlotMismatch { .. })));
        let t = TensorValue::zeros(&[2, 2], &[Lower, Lower]);
        assert!(t.contract(0, 1).is_err());
        assert!(TensorValue::zeros(&[2, 2], &[Upper, Lower]).contract(0, 5).is_err());
    }

    #[test]
    fn from_data_checks_length() {
        assert!(TensorValue::from_data(&[2, 2], &[Upper, Lower], vec![1.0; 3]).is_err());
    }
}
