//! Instance checks of the max-volume cross approximation error bounds
//!
//! ```text
//! ‖A − A_r‖_C ≤ (r + 1) σ_{r+1}
//! ‖A − A_r‖_C ≤ (r + 1) σ_{r+1} / sqrt(1 + Σ_{k=1..r} σ_{r+1}² / σ_k²)
//! ```
//!
//! where `A_r = A(:, J) A(I, J)† A(I, :)` and `(I, J)` is the exhaustive
//! max-volume choice. The bounds hold in exact arithmetic, so the
//! comparison allows a relative slack of `1e-9` plus an absolute floor of
//! `1e-12 · ‖A‖_C`.

use crate::cur::{assemble, DEFAULT_PINV_TOL};
use crate::error::{CurError, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

use super::maxvol::{brute_force_maxvol_with_budget, MaxvolResult, DEFAULT_MAXVOL_BUDGET};
use super::svd::{singular_values, SingularSpectrum};

pub const RELATIVE_SLACK: f64 = 1e-9;
pub const ABSOLUTE_FLOOR: f64 = 1e-12;
/// Cores with volume below `SINGULAR_CORE · ‖A‖_C^r` void the hypothesis.
pub const SINGULAR_CORE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckOutcome {
    Holds,
    Fails,
    /// The max-volume core is numerically singular.
    Skipped,
}

#[derive(Debug, Clone)]
pub struct TheoremCheck<T> {
    pub outcome: CheckOutcome,
    /// `‖A − A_r‖_C`.
    pub lhs: T,
    /// Right-hand side of the bound being checked.
    pub rhs: T,
    /// `(r + 1) σ_{r+1}`, the first bound, for comparison.
    pub basic_rhs: T,
    pub maxvol: MaxvolResult<T>,
}

impl<T> TheoremCheck<T> {
    pub fn holds(&self) -> bool {
        self.outcome == CheckOutcome::Holds
    }
}

/// Everything both checks share: maxvol choice, residual, spectrum.
struct Instance<T> {
    maxvol: MaxvolResult<T>,
    lhs: T,
    spectrum: SingularSpectrum<T>,
    scale: T,
    singular: bool,
}

fn prepare<T: Scalar>(a: &Matrix<T>, r: usize, budget: u128) -> Result<Instance<T>> {
    let bound = a.rows().min(a.cols());
    if r == 0 || r >= bound {
        return Err(CurError::InvalidRank(format!(
            "bound checks need 1 <= r < min(m, n) = {bound}, got {r}"
        )));
    }
    let maxvol = brute_force_maxvol_with_budget(a, r, budget)?;
    let scale = a.chebyshev_norm();
    let singular = !(maxvol.volume > T::of(SINGULAR_CORE) * scale.powi(r as i32));
    let lhs = if singular {
        T::nan()
    } else {
        let approx = assemble(a, &maxvol.rows, &maxvol.cols)?.evaluate(T::of(DEFAULT_PINV_TOL))?;
        a.sub(&approx)?.chebyshev_norm()
    };
    Ok(Instance {
        maxvol,
        lhs,
        spectrum: singular_values(a)?,
        scale,
        singular,
    })
}

fn judge<T: Scalar>(inst: Instance<T>, rhs: T, basic_rhs: T) -> TheoremCheck<T> {
    let outcome = if inst.singular {
        CheckOutcome::Skipped
    } else if inst.lhs <= rhs * T::of(1.0 + RELATIVE_SLACK) + T::of(ABSOLUTE_FLOOR) * inst.scale
        && rhs <= basic_rhs
    {
        CheckOutcome::Holds
    } else {
        CheckOutcome::Fails
    };
    TheoremCheck {
        outcome,
        lhs: inst.lhs,
        rhs,
        basic_rhs,
        maxvol: inst.maxvol,
    }
}

fn basic_bound<T: Scalar>(spectrum: &SingularSpectrum<T>, r: usize) -> T {
    T::of_count(r + 1) * spectrum.sigma(r + 1)
}

/// `(r + 1) σ_{r+1} / sqrt(1 + Σ_{k=1..r} σ_{r+1}² / σ_k²)`.
///
/// A zero `σ_k` forces `σ_{r+1} = 0`; such terms are taken as zero.
pub fn improved_bound<T: Scalar>(spectrum: &SingularSpectrum<T>, r: usize) -> T {
    let tail = spectrum.sigma(r + 1);
    let mut denom = T::one();
    for k in 1..=r {
        let sk = spectrum.sigma(k);
        if sk > T::zero() {
            let ratio = tail / sk;
            denom = denom + ratio * ratio;
        }
    }
    basic_bound(spectrum, r) / denom.sqrt()
}

pub fn verify_theorem1<T: Scalar>(a: &Matrix<T>, r: usize) -> Result<TheoremCheck<T>> {
    verify_theorem1_with_budget(a, r, DEFAULT_MAXVOL_BUDGET)
}

pub fn verify_theorem1_with_budget<T: Scalar>(
    a: &Matrix<T>,
    r: usize,
    budget: u128,
) -> Result<TheoremCheck<T>> {
    let inst = prepare(a, r, budget)?;
    let rhs = basic_bound(&inst.spectrum, r);
    Ok(judge(inst, rhs, rhs))
}

pub fn verify_theorem2<T: Scalar>(a: &Matrix<T>, r: usize) -> Result<TheoremCheck<T>> {
    verify_theorem2_with_budget(a, r, DEFAULT_MAXVOL_BUDGET)
}

/// Checks the improved bound; also fails the instance if it ever exceeds
/// the basic bound.
pub fn verify_theorem2_with_budget<T: Scalar>(
    a: &Matrix<T>,
    r: usize,
    budget: u128,
) -> Result<TheoremCheck<T>> {
    let inst = prepare(a, r, budget)?;
    let rhs = improved_bound(&inst.spectrum, r);
    let basic = basic_bound(&inst.spectrum, r);
    Ok(judge(inst, rhs, basic))
}
