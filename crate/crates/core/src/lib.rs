//! Scalable CUR low-rank approximation.
//!
//! A matrix `A` is approximated as `C · U · R`, where `C` holds selected
//! columns of `A`, `R` selected rows, and `U` is the pseudoinverse of the
//! intersection `A(I, J)`. Rows and columns are picked by a blockwise
//! norm-greedy selection with orthogonal deflation that runs concurrently
//! over contiguous blocks of the matrix ([`selection::blockwise_select`]).
//! The classic adaptive cross approximation ([`selection::aca_sequential`])
//! is kept as the sequential baseline, and the [`oracle`] module carries the
//! brute-force references (exhaustive max-volume search, Jacobi SVD) used to
//! check error bounds on small instances.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the CLI and the
//! experiment harnesses use.

pub mod cur;
pub mod error;
pub mod generators;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod partition;
pub mod scalar;
pub mod selection;

pub use cur::{
    assemble, decompose, decompose_detailed, pseudoinverse, relative_error,
    relative_error_with_tol, CurFactors, Decomposition,
};
pub use error::{CurError, Result};
pub use generators::{hilbert, random_uniform, synthetic_lowrank};
pub use io::{load_matrix, store_matrix, MatrixFormat};
pub use matrix::Matrix;
pub use partition::{partition, Axis, Block, BlockPartition};
pub use scalar::Scalar;
pub use selection::{
    aca_sequential, blockwise_select, AcaSelection, BlockwiseSelection, BlockwiseSelector,
    IndexSet, SelectionTrace,
};

/// Row-major dense `f64` matrix.
pub type DenseMatrix = Matrix<f64>;
/// Row-major dense `f32` matrix.
pub type DenseMatrixF32 = Matrix<f32>;
/// CUR factors over `f64`.
pub type Factors = CurFactors<f64>;
/// Selection diagnostics over `f64`.
pub type Trace = SelectionTrace<f64>;
