//! Row and column index selection.
//!
//! [`aca_sequential`] is the classic adaptive cross approximation: it scans
//! the whole residual for the largest entry and subtracts the rank-1 cross
//! through it. [`blockwise_select`] picks whole rows (or columns) by
//! Euclidean norm instead, which lets every block of the matrix be scanned
//! and deflated independently between two global synchronization points.

mod aca;
mod blockwise;

pub use aca::{aca_sequential, AcaSelection};
pub use blockwise::{
    blockwise_select, BlockwiseSelection, BlockwiseSelector, DEFAULT_SELECTION_TOL,
};

use crate::error::{CurError, Result};
use crate::partition::Axis;
use crate::scalar::Scalar;

/// Ordered list of distinct selected indices along one axis, in the order
/// they were chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    pub(crate) axis: Axis,
    pub(crate) indices: Vec<usize>,
}

impl IndexSet {
    pub fn new(axis: Axis) -> Self {
        Self {
            axis,
            indices: Vec::new(),
        }
    }

    /// Validates distinctness and range against `dim_size`.
    pub fn from_indices(axis: Axis, indices: Vec<usize>, dim_size: usize) -> Result<Self> {
        let mut seen = vec![false; dim_size];
        for &i in &indices {
            if i >= dim_size {
                return Err(CurError::InvalidIndex(format!(
                    "{axis} index {i} out of range for size {dim_size}"
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(CurError::InvalidIndex(format!(
                    "{axis} index {i} selected twice"
                )));
            }
        }
        Ok(Self { axis, indices })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    /// Keeps the first `len` selections.
    pub fn truncate(&mut self, len: usize) {
        self.indices.truncate(len);
    }

    pub(crate) fn push(&mut self, index: usize) {
        debug_assert!(!self.indices.contains(&index));
        self.indices.push(index);
    }
}

/// Per-iteration diagnostics of a selection run.
///
/// `pivot_magnitudes[k]` is `|R_k(i, j)|` for ACA and the largest residual
/// norm for blockwise selection. A pivot that falls under the termination
/// threshold stops the run before it is recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionTrace<T> {
    pub pivot_magnitudes: Vec<T>,
    pub terminated_early: bool,
    pub iterations_run: usize,
}

impl<T: Scalar> SelectionTrace<T> {
    fn new() -> Self {
        Self {
            pivot_magnitudes: Vec::new(),
            terminated_early: false,
            iterations_run: 0,
        }
    }

    fn record(&mut self, magnitude: T) {
        self.pivot_magnitudes.push(magnitude);
        self.iterations_run += 1;
    }
}
