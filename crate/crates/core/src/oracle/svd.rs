//! One-sided (Hestenes) Jacobi SVD for small dense matrices.

use crate::error::{CurError, Result};
use crate::matrix::Matrix;
use crate::scalar::{dot, Scalar};

/// Default cap on `min(rows, cols)` for the Jacobi routines.
pub const DEFAULT_SVD_CAP: usize = 1024;

const MAX_SWEEPS: usize = 80;

/// Singular values in non-increasing order, `min(m, n)` of them.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum<T> {
    values: Vec<T>,
}

impl<T: Scalar> SingularSpectrum<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `σ_k` with the 1-based numbering used in error bounds; zero past the
    /// end of the spectrum.
    pub fn sigma(&self, k: usize) -> T {
        assert!(k >= 1, "singular values are numbered from 1");
        self.values.get(k - 1).copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.sigma(1)
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }
}

/// Thin SVD `A = U · diag(s) · Vᵀ` with `k = min(m, n)` columns in `U`
/// and `V`.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: Matrix<T>,
    pub s: Vec<T>,
    pub v: Matrix<T>,
}

pub fn singular_values<T: Scalar>(a: &Matrix<T>) -> Result<SingularSpectrum<T>> {
    singular_values_capped(a, DEFAULT_SVD_CAP)
}

pub fn singular_values_capped<T: Scalar>(a: &Matrix<T>, cap: usize) -> Result<SingularSpectrum<T>> {
    let svd = jacobi_svd_capped(a, cap, false)?;
    Ok(SingularSpectrum { values: svd.s })
}

pub fn jacobi_svd<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>> {
    jacobi_svd_capped(a, DEFAULT_SVD_CAP, true)
}

fn jacobi_svd_capped<T: Scalar>(a: &Matrix<T>, cap: usize, want_vectors: bool) -> Result<Svd<T>> {
    let k = a.rows().min(a.cols());
    if k > cap {
        return Err(CurError::BudgetExceeded {
            what: "jacobi svd (min dimension)",
            required: k as u128,
            budget: cap as u128,
        });
    }
    if a.rows() >= a.cols() {
        tall_svd(a, want_vectors)
    } else {
        let t = tall_svd(&a.transpose(), want_vectors)?;
        Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        })
    }
}

/// Orthogonalizes the columns of a tall `m × n` matrix by plane rotations.
fn tall_svd<T: Scalar>(a: &Matrix<T>, want_vectors: bool) -> Result<Svd<T>> {
    let (m, n) = a.shape();
    // column-major working copies so each column is a contiguous slice
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<T>> = if want_vectors {
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { T::one() } else { T::zero() })
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    let eps = T::epsilon();
    let mut sq: Vec<T> = cols.iter().map(|c| dot(c, c)).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = sq[p];
                let beta = sq[q];
                if alpha == T::zero() || beta == T::zero() {
                    continue;
                }
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::of(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                if want_vectors {
                    rotate(&mut v, p, q, c, s);
                }
                sq[p] = dot(&cols[p], &cols[p]);
                sq[q] = dot(&cols[q], &cols[q]);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<T> = sq.iter().map(|x| x.sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal values keep column order
    order.sort_by(|&i, &j| {
        norms[j]
            .partial_cmp(&norms[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let s: Vec<T> = order.iter().map(|&j| norms[j]).collect();

    let (u, vm) = if want_vectors {
        let u = Matrix::from_fn(m, n, |i, jj| {
            let j = order[jj];
            if norms[j] > T::zero() {
                cols[j][i] / norms[j]
            } else {
                T::zero()
            }
        })?;
        let vm = Matrix::from_fn(n, n, |i, jj| v[order[jj]][i])?;
        (u, vm)
    } else {
        (Matrix::zeros(1, 1)?, Matrix::zeros(1, 1)?)
    };
    Ok(Svd { u, s, v: vm })
}

fn rotate<T: Scalar>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (lo, hi) = cols.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let xp = *x;
        let yq = *y;
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}
