use rayon::prelude::*;

use crate::error::{CurError, Result};
use crate::matrix::Matrix;
use crate::partition::{partition, Axis, BlockPartition};
use crate::scalar::{dot, norm2, Scalar};

use super::{IndexSet, SelectionTrace};

/// Default relative termination threshold for selection.
pub const DEFAULT_SELECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct BlockwiseSelection<T> {
    pub indices: IndexSet,
    pub trace: SelectionTrace<T>,
    /// Residual vector broadcast at each iteration, in selection order.
    /// Only filled when requested with [`BlockwiseSelector::keep_vectors`].
    pub shared_vectors: Vec<Vec<T>>,
}

/// Configures a blockwise norm-greedy selection run.
///
/// Every iteration scans the residual norms of all rows (or columns) block
/// by block, reduces them to the largest one, broadcasts that residual
/// vector `v`, and replaces every residual `a` with `a − (⟨a, v⟩ / ⟨v, v⟩) v`.
/// Blocks are processed on the current rayon pool. Each residual is only
/// ever touched by the block that owns it and every reduction combines
/// block results in block order, so the output does not depend on the
/// block count or the number of worker threads.
#[derive(Debug, Clone)]
pub struct BlockwiseSelector<T> {
    target: usize,
    blocks: usize,
    axis: Axis,
    tol: T,
    keep_vectors: bool,
}

impl<T: Scalar> BlockwiseSelector<T> {
    pub fn new(target: usize, blocks: usize, axis: Axis) -> Self {
        Self {
            target,
            blocks,
            axis,
            tol: T::of(DEFAULT_SELECTION_TOL),
            keep_vectors: false,
        }
    }

    /// Stop once the largest residual norm is at most `tol` times the
    /// initial largest norm. `tol = 0` runs the full `target` iterations
    /// unless the residual vanishes exactly.
    pub fn tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn keep_vectors(mut self, keep: bool) -> Self {
        self.keep_vectors = keep;
        self
    }

    pub fn run(&self, a: &Matrix<T>) -> Result<BlockwiseSelection<T>> {
        let (dim, lane_len) = match self.axis {
            Axis::Rows => (a.rows(), a.cols()),
            Axis::Cols => (a.cols(), a.rows()),
        };
        if self.target == 0 || self.target > dim {
            return Err(CurError::InvalidArgument(format!(
                "selection count {} must lie in 1..={dim}",
                self.target
            )));
        }
        if self.blocks == 0 || self.blocks > dim {
            return Err(CurError::InvalidArgument(format!(
                "block count {} must lie in 1..={dim}",
                self.blocks
            )));
        }
        if !(self.tol >= T::zero()) {
            return Err(CurError::InvalidArgument(format!(
                "tolerance {} must be >= 0",
                self.tol
            )));
        }
        let part = partition(dim, self.blocks, self.axis)?;

        // Candidate vectors are stored contiguously ("lanes"): rows of A for
        // row selection, rows of Aᵀ for column selection.
        let mut work = match self.axis {
            Axis::Rows => a.as_slice().to_vec(),
            Axis::Cols => a.transpose().into_vec(),
        };
        let mut norms = vec![T::zero(); dim];
        let mut blocks = split_blocks(&mut work, &mut norms, &part, lane_len);
        blocks.par_iter_mut().for_each(WorkBlock::refresh_norms);

        let mut indices = IndexSet::new(self.axis);
        let mut trace = SelectionTrace::new();
        let mut shared_vectors = Vec::new();
        let mut shared = vec![T::zero(); lane_len];
        let mut threshold = None;

        for _ in 0..self.target {
            let (global, max_norm) = reduce_max(&blocks);
            let threshold = *threshold.get_or_insert(self.tol * max_norm);
            if !(max_norm > threshold) {
                trace.terminated_early = true;
                break;
            }
            trace.record(max_norm);

            let (k, local) = part.locate(global).expect("reduced index is in range");
            shared.copy_from_slice(blocks[k].lane(local));
            let vv = dot(&shared, &shared);
            blocks.par_iter_mut().enumerate().for_each(|(b, block)| {
                let selected = (b == k).then_some(local);
                block.deflate(&shared, vv, selected);
            });

            if self.keep_vectors {
                shared_vectors.push(shared.clone());
            }
            indices.push(global);
        }

        Ok(BlockwiseSelection {
            indices,
            trace,
            shared_vectors,
        })
    }
}

/// Blockwise selection of up to `r` rows (`Axis::Rows`) or columns
/// (`Axis::Cols`) over `b` blocks.
pub fn blockwise_select<T: Scalar>(
    a: &Matrix<T>,
    r: usize,
    b: usize,
    axis: Axis,
    tol: T,
) -> Result<BlockwiseSelection<T>> {
    BlockwiseSelector::new(r, b, axis).tol(tol).run(a)
}

struct WorkBlock<'a, T> {
    start: usize,
    lane_len: usize,
    lanes: &'a mut [T],
    norms: &'a mut [T],
}

fn split_blocks<'a, T>(
    mut work: &'a mut [T],
    mut norms: &'a mut [T],
    part: &BlockPartition,
    lane_len: usize,
) -> Vec<WorkBlock<'a, T>> {
    let mut out = Vec::with_capacity(part.block_count());
    for block in part.blocks() {
        let (lanes, rest) = std::mem::take(&mut work).split_at_mut(block.len * lane_len);
        let (block_norms, rest_norms) = std::mem::take(&mut norms).split_at_mut(block.len);
        work = rest;
        norms = rest_norms;
        out.push(WorkBlock {
            start: block.start,
            lane_len,
            lanes,
            norms: block_norms,
        });
    }
    out
}

impl<T: Scalar> WorkBlock<'_, T> {
    fn lane(&self, local: usize) -> &[T] {
        &self.lanes[local * self.lane_len..(local + 1) * self.lane_len]
    }

    fn refresh_norms(&mut self) {
        for (lane, norm) in self
            .lanes
            .chunks_exact(self.lane_len)
            .zip(self.norms.iter_mut())
        {
            *norm = norm2(lane);
        }
    }

    /// First maximal norm in this block as `(global index, norm)`.
    fn local_max(&self) -> (usize, T) {
        let mut best = (self.start, T::neg_infinity());
        for (offset, &n) in self.norms.iter().enumerate() {
            if n > best.1 {
                best = (self.start + offset, n);
            }
        }
        best
    }

    fn deflate(&mut self, v: &[T], vv: T, selected: Option<usize>) {
        let lanes = self.lanes.chunks_exact_mut(self.lane_len);
        for (local, (lane, norm)) in lanes.zip(self.norms.iter_mut()).enumerate() {
            if selected == Some(local) {
                lane.fill(T::zero());
                *norm = T::zero();
                continue;
            }
            let coeff = dot(lane, v) / vv;
            if coeff == T::zero() {
                continue;
            }
            let mut sq = T::zero();
            for (x, &vi) in lane.iter_mut().zip(v) {
                *x = *x - coeff * vi;
                sq = sq + *x * *x;
            }
            *norm = sq.sqrt();
        }
    }
}

/// Global argmax over blocks; block results are combined in block order
/// with a strict comparison, so ties go to the smallest global index.
fn reduce_max<T: Scalar>(blocks: &[WorkBlock<'_, T>]) -> (usize, T) {
    let locals: Vec<(usize, T)> = blocks.par_iter().map(WorkBlock::local_max).collect();
    let mut best = locals[0];
    for &(idx, n) in &locals[1..] {
        if n > best.1 {
            best = (idx, n);
        }
    }
    best
}
