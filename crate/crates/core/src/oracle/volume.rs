use crate::error::{CurError, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// `|det M|` by LU factorization with partial pivoting.
pub fn volume<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    if m.rows() != m.cols() {
        return Err(CurError::InvalidShape(format!(
            "volume needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut lu = m.clone();
    let mut det = T::one();
    for k in 0..n {
        let mut piv = k;
        let mut piv_abs = lu.get(k, k).abs();
        for i in k + 1..n {
            if lu.get(i, k).abs() > piv_abs {
                piv = i;
                piv_abs = lu.get(i, k).abs();
            }
        }
        if piv_abs == T::zero() {
            return Ok(T::zero());
        }
        if piv != k {
            for j in 0..n {
                let tmp = lu.get(k, j);
                lu.set(k, j, lu.get(piv, j));
                lu.set(piv, j, tmp);
            }
        }
        let pivot = lu.get(k, k);
        det = det * pivot;
        for i in k + 1..n {
            let factor = lu.get(i, k) / pivot;
            if factor == T::zero() {
                continue;
            }
            for j in k + 1..n {
                let v = lu.get(i, j) - factor * lu.get(k, j);
                lu.set(i, j, v);
            }
        }
    }
    Ok(det.abs())
}
