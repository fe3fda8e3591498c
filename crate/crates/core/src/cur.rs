//! CUR factors: assembly from selected indices, evaluation, and error.

use crate::error::{CurError, Result};
use crate::matrix::Matrix;
use crate::oracle::jacobi_svd;
use crate::partition::Axis;
use crate::scalar::Scalar;
use crate::selection::{BlockwiseSelector, IndexSet, SelectionTrace};

/// Singular values at or below `DEFAULT_PINV_TOL · σ_max` are dropped
/// when pseudo-inverting the core.
pub const DEFAULT_PINV_TOL: f64 = 1e-12;

/// `C = A(:, J)`, `core = A(I, J)` and `R = A(I, :)` together with the
/// index sets. The core is kept raw; it is pseudo-inverted on evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CurFactors<T> {
    c: Matrix<T>,
    core: Matrix<T>,
    r: Matrix<T>,
    rows: IndexSet,
    cols: IndexSet,
}

impl<T: Scalar> CurFactors<T> {
    pub fn c(&self) -> &Matrix<T> {
        &self.c
    }

    pub fn core(&self) -> &Matrix<T> {
        &self.core
    }

    pub fn r(&self) -> &Matrix<T> {
        &self.r
    }

    pub fn row_indices(&self) -> &IndexSet {
        &self.rows
    }

    pub fn col_indices(&self) -> &IndexSet {
        &self.cols
    }

    /// Shape of the approximated matrix.
    pub fn shape(&self) -> (usize, usize) {
        (self.c.rows(), self.r.cols())
    }

    /// Splits `C · pinv(core) · R` into `(C V Σ⁺) · (Uᵀ R)` using the SVD
    /// `core = U Σ Vᵀ`, keeping only singular values above `tol · σ_max`.
    ///
    /// Forming `pinv(core)` explicitly loses about `κ(core)` digits, which
    /// wrecks exact low-rank recovery when the core is ill-conditioned. In
    /// the factored form the small singular values divide columns of `C V`,
    /// which are themselves small for a good row/column choice, and the
    /// rounding error no longer scales with the condition number.
    fn split_factors(&self, tol: T) -> Result<(Matrix<T>, Matrix<T>)> {
        let svd = jacobi_svd(&self.core)?;
        let cutoff = tol * svd.s.first().copied().unwrap_or_else(T::zero);
        let kept: Vec<usize> = (0..svd.s.len())
            .filter(|&p| svd.s[p] > cutoff && svd.s[p] > T::zero())
            .collect();
        let (m, n) = self.shape();
        if kept.is_empty() {
            return Ok((Matrix::zeros(m, 1)?, Matrix::zeros(1, n)?));
        }
        let v = svd.v.select_cols(&kept)?;
        let cv = self.c.matmul(&v)?;
        let left = Matrix::from_fn(m, kept.len(), |i, q| cv[(i, q)] / svd.s[kept[q]])?;
        let ut = svd.u.select_cols(&kept)?.transpose();
        let right = ut.matmul(&self.r)?;
        Ok((left, right))
    }

    /// Dense reconstruction `C · pinv(core) · R`.
    pub fn evaluate(&self, tol: T) -> Result<Matrix<T>> {
        let (left, right) = self.split_factors(tol)?;
        left.matmul(&right)
    }
}

fn check_indices(set: &IndexSet, dim: usize, what: &str) -> Result<()> {
    if set.is_empty() {
        return Err(CurError::InvalidIndex(format!("no {what} selected")));
    }
    IndexSet::from_indices(set.axis(), set.as_slice().to_vec(), dim).map(|_| ())
}

/// Gathers the CUR factors of `a` for the given rows and columns.
pub fn assemble<T: Scalar>(
    a: &Matrix<T>,
    rows: &IndexSet,
    cols: &IndexSet,
) -> Result<CurFactors<T>> {
    check_indices(rows, a.rows(), "rows")?;
    check_indices(cols, a.cols(), "columns")?;
    Ok(CurFactors {
        c: a.select_cols(cols.as_slice())?,
        core: a.gather(rows.as_slice(), cols.as_slice())?,
        r: a.select_rows(rows.as_slice())?,
        rows: IndexSet::from_indices(Axis::Rows, rows.as_slice().to_vec(), a.rows())?,
        cols: IndexSet::from_indices(Axis::Cols, cols.as_slice().to_vec(), a.cols())?,
    })
}

/// Moore–Penrose pseudoinverse through a Jacobi SVD; singular values at or
/// below `tol · σ_max` are treated as zero.
pub fn pseudoinverse<T: Scalar>(m: &Matrix<T>, tol: T) -> Result<Matrix<T>> {
    let svd = jacobi_svd(m)?;
    let sigma_max = svd.s.first().copied().unwrap_or_else(T::zero);
    let cutoff = tol * sigma_max;
    let inv: Vec<T> = svd
        .s
        .iter()
        .map(|&s| {
            if s > cutoff && s > T::zero() {
                T::one() / s
            } else {
                T::zero()
            }
        })
        .collect();
    let k = svd.s.len();
    // V · diag(inv) · Uᵀ
    Matrix::from_fn(m.cols(), m.rows(), |i, j| {
        let mut acc = T::zero();
        for p in 0..k {
            if inv[p] != T::zero() {
                acc = acc + svd.v[(i, p)] * inv[p] * svd.u[(j, p)];
            }
        }
        acc
    })
}

/// `‖A − C U R‖_F / ‖A‖_F` with the default pseudoinverse tolerance.
pub fn relative_error<T: Scalar>(a: &Matrix<T>, f: &CurFactors<T>) -> Result<T> {
    relative_error_with_tol(a, f, T::of(DEFAULT_PINV_TOL))
}

/// Like [`relative_error`] but streams the reconstruction row by row
/// instead of materializing `C U R`.
pub fn relative_error_with_tol<T: Scalar>(a: &Matrix<T>, f: &CurFactors<T>, tol: T) -> Result<T> {
    if a.shape() != f.shape() {
        return Err(CurError::InvalidShape(format!(
            "factors approximate a {:?} matrix, reference is {:?}",
            f.shape(),
            a.shape()
        )));
    }
    let denom = a.frobenius_norm();
    if denom == T::zero() {
        return Err(CurError::ZeroMatrix);
    }
    let (left, right) = f.split_factors(tol)?;
    let n = a.cols();
    let mut row = vec![T::zero(); n];
    let mut sum = T::zero();
    for i in 0..a.rows() {
        row.fill(T::zero());
        for (p, &w) in left.row(i).iter().enumerate() {
            if w == T::zero() {
                continue;
            }
            for (o, &x) in row.iter_mut().zip(right.row(p)) {
                *o = *o + w * x;
            }
        }
        for (&x, &y) in a.row(i).iter().zip(&row) {
            let d = x - y;
            sum = sum + d * d;
        }
    }
    Ok(sum.sqrt() / denom)
}

/// Factors together with the selection diagnostics of both axes.
#[derive(Debug, Clone)]
pub struct Decomposition<T> {
    pub factors: CurFactors<T>,
    pub row_trace: SelectionTrace<T>,
    pub col_trace: SelectionTrace<T>,
}

/// Blockwise CUR: selects up to `r` rows and `c` columns with `b` blocks
/// each (the two selections run concurrently) and assembles the factors.
///
/// When early termination leaves the two index sets with different
/// lengths, both are cut to the shorter one, keeping the earliest picks.
pub fn decompose<T: Scalar>(
    a: &Matrix<T>,
    r: usize,
    c: usize,
    b: usize,
    tol: T,
) -> Result<CurFactors<T>> {
    decompose_detailed(a, r, c, b, tol).map(|d| d.factors)
}

pub fn decompose_detailed<T: Scalar>(
    a: &Matrix<T>,
    r: usize,
    c: usize,
    b: usize,
    tol: T,
) -> Result<Decomposition<T>> {
    let (m, n) = a.shape();
    if r == 0 || r > m {
        return Err(CurError::InvalidRank(format!(
            "row count {r} must lie in 1..={m}"
        )));
    }
    if c == 0 || c > n {
        return Err(CurError::InvalidRank(format!(
            "column count {c} must lie in 1..={n}"
        )));
    }
    if b == 0 || b > m.min(n) {
        return Err(CurError::InvalidArgument(format!(
            "block count {b} must lie in 1..={}",
            m.min(n)
        )));
    }
    let (rows, cols) = rayon::join(
        || BlockwiseSelector::new(r, b, Axis::Rows).tol(tol).run(a),
        || BlockwiseSelector::new(c, b, Axis::Cols).tol(tol).run(a),
    );
    let (rows, cols) = (rows?, cols?);
    let mut row_set = rows.indices;
    let mut col_set = cols.indices;
    let early = rows.trace.terminated_early || cols.trace.terminated_early;
    if early && row_set.len() != col_set.len() {
        let keep = row_set.len().min(col_set.len());
        row_set.truncate(keep);
        col_set.truncate(keep);
    }
    if row_set.is_empty() || col_set.is_empty() {
        return Err(CurError::InvalidArgument(
            "selection found no nonzero rows or columns".into(),
        ));
    }
    Ok(Decomposition {
        factors: assemble(a, &row_set, &col_set)?,
        row_trace: rows.trace,
        col_trace: cols.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{hilbert, random_uniform, synthetic_lowrank};
    use proptest::prelude::*;

    fn set(axis: Axis, idx: &[usize], dim: usize) -> IndexSet {
        IndexSet::from_indices(axis, idx.to_vec(), dim).unwrap()
    }

    #[test]
    fn assemble_identity() {
        let a = Matrix::<f64>::identity(3).unwrap();
        let f = assemble(
            &a,
            &set(Axis::Rows, &[0, 1], 3),
            &set(Axis::Cols, &[0, 1], 3),
        )
        .unwrap();
        assert_eq!(f.core(), &Matrix::identity(2).unwrap());
        assert_eq!(f.c(), &a.select_cols(&[0, 1]).unwrap());
        assert_eq!(f.r(), &a.select_rows(&[0, 1]).unwrap());
    }

    #[test]
    fn assemble_hilbert_corner() {
        let a = hilbert::<f64>(4).unwrap();
        let f = assemble(&a, &set(Axis::Rows, &[0], 4), &set(Axis::Cols, &[0], 4)).unwrap();
        assert_eq!(f.core().as_slice(), &[1.0]);
    }

    #[test]
    fn assemble_rejects_bad_indices() {
        let a = hilbert::<f64>(4).unwrap();
        // IndexSet::from_indices refuses duplicates, so build one by hand
        let dup = IndexSet {
            axis: Axis::Rows,
            indices: vec![1, 1],
        };
        let cols = set(Axis::Cols, &[0], 4);
        assert!(matches!(
            assemble(&a, &dup, &cols),
            Err(CurError::InvalidIndex(_))
        ));
        let out = IndexSet {
            axis: Axis::Rows,
            indices: vec![4],
        };
        assert!(assemble(&a, &out, &cols).is_err());
        assert!(assemble(&a, &IndexSet::new(Axis::Rows), &cols).is_err());
    }

    #[test]
    fn pseudoinverse_examples() {
        let p = pseudoinverse(&Matrix::from_rows(&[[2.0]]).unwrap(), 1e-12).unwrap();
        assert_eq!(p.as_slice(), &[0.5]);
        let i2 = Matrix::<f64>::identity(2).unwrap();
        assert_eq!(pseudoinverse(&i2, 1e-12).unwrap(), i2);
        let ones = Matrix::from_rows(&[[1.0f64, 1.0], [1.0, 1.0]]).unwrap();
        let p = pseudoinverse(&ones, 1e-12).unwrap();
        for &x in p.as_slice() {
            assert!((x - 0.25).abs() <= 1e-15, "{x}");
        }
        let zero = Matrix::<f64>::zeros(2, 3).unwrap();
        assert!(pseudoinverse(&zero, 1e-12).unwrap().is_zero());
    }

    fn penrose_residuals(m: &Matrix<f64>) -> (f64, f64, f64, f64) {
        let p = pseudoinverse(m, 1e-12).unwrap();
        let mp = m.matmul(&p).unwrap();
        let pm = p.matmul(m).unwrap();
        let e1 = mp.matmul(m).unwrap().sub(m).unwrap().frobenius_norm();
        let e2 = pm.matmul(&p).unwrap().sub(&p).unwrap().frobenius_norm();
        let e3 = mp.sub(&mp.transpose()).unwrap().frobenius_norm();
        let e4 = pm.sub(&pm.transpose()).unwrap().frobenius_norm();
        (e1, e2, e3, e4)
    }

    proptest! {
        #[test]
        fn penrose_conditions(rank in 1usize..=10, seed in any::<u64>()) {
            let left = random_uniform::<f64>(10, rank, seed).unwrap();
            let right = random_uniform::<f64>(rank, 10, seed ^ 0x9e37).unwrap();
            let m = left.matmul(&right).unwrap();
            let p = pseudoinverse(&m, 1e-12).unwrap();
            let (e1, e2, e3, e4) = penrose_residuals(&m);
            let fro = m.frobenius_norm();
            prop_assert!(e1 <= 1e-10 * fro, "M M+ M: {}", e1);
            prop_assert!(e2 <= 1e-10 * fro * p.frobenius_norm().powi(2), "M+ M M+: {}", e2);
            prop_assert!(e3 <= 1e-10 * fro.max(1.0));
            prop_assert!(e4 <= 1e-10 * fro.max(1.0));
        }
    }

    #[test]
    fn evaluate_exact_cases() {
        let u = [1.0, -2.0, 0.5];
        let v = [3.0, 1.0, -4.0, 2.0];
        let a = Matrix::from_fn(3, 4, |i, j| u[i] * v[j]).unwrap();
        // argmax |u_i v_j| is at (1, 2)
        let f = assemble(&a, &set(Axis::Rows, &[1], 3), &set(Axis::Cols, &[2], 4)).unwrap();
        let back = f.evaluate(1e-12).unwrap();
        assert!(back.sub(&a).unwrap().frobenius_norm() <= 1e-12 * a.frobenius_norm());
        assert!(relative_error(&a, &f).unwrap() <= 1e-12);

        let id = Matrix::<f64>::identity(3).unwrap();
        let all = [0, 1, 2];
        let f = assemble(&id, &set(Axis::Rows, &all, 3), &set(Axis::Cols, &all, 3)).unwrap();
        assert_eq!(f.evaluate(1e-12).unwrap(), id);
        assert_eq!(relative_error(&id, &f).unwrap(), 0.0);
    }

    #[test]
    fn zero_reconstruction_has_unit_error() {
        // the chosen row is zero, so C U R = 0
        let a = Matrix::from_rows(&[[1.0, 2.0], [0.0, 0.0]]).unwrap();
        let f = assemble(&a, &set(Axis::Rows, &[1], 2), &set(Axis::Cols, &[0], 2)).unwrap();
        assert_eq!(relative_error(&a, &f).unwrap(), 1.0);
    }

    #[test]
    fn zero_reference_is_an_error() {
        let a = Matrix::<f64>::zeros(2, 2).unwrap();
        let f = assemble(&a, &set(Axis::Rows, &[0], 2), &set(Axis::Cols, &[0], 2)).unwrap();
        assert!(matches!(relative_error(&a, &f), Err(CurError::ZeroMatrix)));
    }

    #[test]
    fn streamed_error_matches_dense_formula() {
        let a = hilbert::<f64>(40).unwrap();
        let f = decompose(&a, 6, 6, 3, 1e-12).unwrap();
        let dense =
            a.sub(&f.evaluate(1e-12).unwrap()).unwrap().frobenius_norm() / a.frobenius_norm();
        let streamed = relative_error(&a, &f).unwrap();
        assert!(
            (dense - streamed).abs() <= 1e-12 * dense,
            "{dense} vs {streamed}"
        );
    }

    #[test]
    fn blockwise_rank_three_reconstructs() {
        let a = synthetic_lowrank::<f64>(16, 3).unwrap();
        let f = decompose(&a, 3, 3, 4, 1e-12).unwrap();
        let dense =
            a.sub(&f.evaluate(1e-12).unwrap()).unwrap().frobenius_norm() / a.frobenius_norm();
        assert!(dense <= 1e-10, "{dense}");
    }

    #[test]
    fn decompose_scalar_matrix() {
        let a = Matrix::from_rows(&[[7.0]]).unwrap();
        let f = decompose(&a, 1, 1, 1, 1e-12).unwrap();
        assert_eq!(f.evaluate(1e-12).unwrap().as_slice(), &[7.0]);
    }

    #[test]
    fn decompose_lowrank_64() {
        let a = synthetic_lowrank::<f64>(64, 5).unwrap();
        let f = decompose(&a, 5, 5, 4, 1e-12).unwrap();
        assert!(relative_error(&a, &f).unwrap() <= 1e-10);
    }

    #[test]
    fn decompose_truncates_mismatched_early_stops() {
        let a = synthetic_lowrank::<f64>(20, 3).unwrap();
        let d = decompose_detailed(&a, 6, 2, 2, 1e-10).unwrap();
        assert!(d.row_trace.terminated_early);
        assert_eq!(d.row_trace.iterations_run, 3);
        assert!(!d.col_trace.terminated_early);
        assert_eq!(d.factors.core().shape(), (2, 2));
    }

    #[test]
    fn decompose_keeps_rectangular_request() {
        let a = random_uniform::<f64>(12, 9, 4).unwrap();
        let f = decompose(&a, 5, 3, 3, 1e-12).unwrap();
        assert_eq!(f.core().shape(), (5, 3));
    }

    #[test]
    fn decompose_argument_checks() {
        let a = random_uniform::<f64>(6, 4, 1).unwrap();
        assert!(decompose(&a, 0, 1, 1, 1e-12).is_err());
        assert!(decompose(&a, 7, 1, 1, 1e-12).is_err());
        assert!(decompose(&a, 1, 5, 1, 1e-12).is_err());
        assert!(decompose(&a, 1, 1, 5, 1e-12).is_err());
        let z = Matrix::<f64>::zeros(3, 3).unwrap();
        assert!(decompose(&z, 1, 1, 1, 0.0).is_err());
    }

    #[test]
    fn interpolates_selected_rows_and_columns() {
        for seed in 0..5 {
            let a = random_uniform::<f64>(15, 11, seed).unwrap();
            let f = decompose(&a, 4, 4, 2, 1e-12).unwrap();
            let back = f.evaluate(1e-12).unwrap();
            let scale = a.chebyshev_norm();
            for &i in f.row_indices().as_slice() {
                for j in 0..a.cols() {
                    assert!((back[(i, j)] - a[(i, j)]).abs() <= 1e-10 * scale);
                }
            }
            for &j in f.col_indices().as_slice() {
                for i in 0..a.rows() {
                    assert!((back[(i, j)] - a[(i, j)]).abs() <= 1e-10 * scale);
                }
            }
        }
    }
}
