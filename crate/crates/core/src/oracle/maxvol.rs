use crate::error::{CurError, Result};
use crate::matrix::Matrix;
use crate::partition::Axis;
use crate::scalar::Scalar;
use crate::selection::IndexSet;

use super::volume::volume;

/// Default limit on the number of `r × r` submatrices examined.
pub const DEFAULT_MAXVOL_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone)]
pub struct MaxvolResult<T> {
    pub rows: IndexSet,
    pub cols: IndexSet,
    pub volume: T,
    pub candidates_examined: u64,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact: acc * (n - i) is divisible by (i + 1)
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn brute_force_maxvol<T: Scalar>(a: &Matrix<T>, r: usize) -> Result<MaxvolResult<T>> {
    brute_force_maxvol_with_budget(a, r, DEFAULT_MAXVOL_BUDGET)
}

/// Exhaustive search for the `r × r` submatrix of largest `|det|`.
///
/// Row combinations form the outer loop and column combinations the inner
/// one, both in lexicographic order; only a strictly larger volume replaces
/// the incumbent, so ties resolve to the lexicographically smallest
/// `(I, J)`.
pub fn brute_force_maxvol_with_budget<T: Scalar>(
    a: &Matrix<T>,
    r: usize,
    budget: u128,
) -> Result<MaxvolResult<T>> {
    let (m, n) = a.shape();
    if r == 0 || r > m.min(n) {
        return Err(CurError::InvalidRank(format!(
            "submatrix order {r} must lie in 1..={}",
            m.min(n)
        )));
    }
    let required = binomial(m, r).saturating_mul(binomial(n, r));
    if required > budget {
        return Err(CurError::BudgetExceeded {
            what: "exhaustive maxvol (candidate submatrices)",
            required,
            budget,
        });
    }

    let mut best_rows: Vec<usize> = (0..r).collect();
    let mut best_cols: Vec<usize> = (0..r).collect();
    let mut best_vol = T::neg_infinity();
    let mut examined = 0u64;

    let mut rows: Vec<usize> = (0..r).collect();
    loop {
        let mut cols: Vec<usize> = (0..r).collect();
        loop {
            let vol = volume(&a.gather(&rows, &cols)?)?;
            examined += 1;
            if vol > best_vol {
                best_vol = vol;
                best_rows.clone_from(&rows);
                best_cols.clone_from(&cols);
            }
            if !next_combination(&mut cols, n) {
                break;
            }
        }
        if !next_combination(&mut rows, m) {
            break;
        }
    }

    Ok(MaxvolResult {
        rows: IndexSet::from_indices(Axis::Rows, best_rows, m)?,
        cols: IndexSet::from_indices(Axis::Cols, best_cols, n)?,
        volume: best_vol,
        candidates_examined: examined,
    })
}

/// Advances `combo` (strictly increasing, values `< n`) to the next
/// combination in lexicographic order; false once exhausted.
pub fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
