use crate::error::{CurError, Result};
use crate::matrix::Matrix;
use crate::partition::Axis;
use crate::scalar::Scalar;

use super::{IndexSet, SelectionTrace};

#[derive(Debug, Clone)]
pub struct AcaSelection<T> {
    pub rows: IndexSet,
    pub cols: IndexSet,
    pub trace: SelectionTrace<T>,
}

/// Sequential adaptive cross approximation with full pivoting.
///
/// Each step takes the global argmax of `|R_k|` (smallest row-major
/// position on ties) and subtracts `R_k(:, j) R_k(i, :) / R_k(i, j)`. The
/// run stops early once the pivot magnitude is at most `tol · ‖A‖_C`.
/// Single-threaded: this is the baseline the blockwise kernel is measured
/// against.
pub fn aca_sequential<T: Scalar>(a: &Matrix<T>, r: usize, tol: T) -> Result<AcaSelection<T>> {
    let max_rank = a.rows().min(a.cols());
    if r == 0 || r > max_rank {
        return Err(CurError::InvalidRank(format!(
            "target rank {r} must lie in 1..={max_rank}"
        )));
    }
    if !(tol >= T::zero()) {
        return Err(CurError::InvalidArgument(format!(
            "tolerance {tol} must be >= 0"
        )));
    }

    let mut residual = Residual::new(a);
    let threshold = tol * a.chebyshev_norm();
    let mut rows = IndexSet::new(Axis::Rows);
    let mut cols = IndexSet::new(Axis::Cols);
    let mut trace = SelectionTrace::new();

    for _ in 0..r {
        let (i, j, magnitude) = residual.argmax();
        if magnitude <= threshold {
            trace.terminated_early = true;
            break;
        }
        trace.record(magnitude);
        rows.push(i);
        cols.push(j);
        residual.eliminate(i, j);
    }
    Ok(AcaSelection { rows, cols, trace })
}

/// Working copy of the ACA residual.
struct Residual<T> {
    r: Matrix<T>,
    col: Vec<T>,
    row: Vec<T>,
}

impl<T: Scalar> Residual<T> {
    fn new(a: &Matrix<T>) -> Self {
        Self {
            r: a.clone(),
            col: vec![T::zero(); a.rows()],
            row: vec![T::zero(); a.cols()],
        }
    }

    /// `(i, j, |R(i, j)|)` of the first maximal entry in row-major order.
    fn argmax(&self) -> (usize, usize, T) {
        let mut best = 0;
        let mut best_abs = T::zero();
        for (k, &x) in self.r.as_slice().iter().enumerate() {
            if x.abs() > best_abs {
                best_abs = x.abs();
                best = k;
            }
        }
        (best / self.r.cols(), best % self.r.cols(), best_abs)
    }

    /// Rank-1 elimination through pivot `(i, j)`. Row `i` and column `j`
    /// are zero in exact arithmetic afterwards and are stored as exact zeros.
    fn eliminate(&mut self, i: usize, j: usize) {
        let pivot = self.r.get(i, j);
        for (p, c) in self.col.iter_mut().enumerate() {
            *c = self.r.get(p, j);
        }
        for (q, v) in self.row.iter_mut().enumerate() {
            *v = self.r.get(i, q) / pivot;
        }
        for p in 0..self.r.rows() {
            let c = self.col[p];
            if c == T::zero() {
                continue;
            }
            for (x, &v) in self.r.row_mut(p).iter_mut().zip(&self.row) {
                *x = *x - c * v;
            }
        }
        self.r.row_mut(i).fill(T::zero());
        for p in 0..self.r.rows() {
            self.r.set(p, j, T::zero());
        }
    }
}
