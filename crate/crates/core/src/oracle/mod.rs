//! Brute-force and dense linear-algebra references used to check the
//! selection kernels and the cross approximation error bounds on small
//! matrices.
//!
//! Nothing here scales: the exhaustive max-volume search is combinatorial
//! and the Jacobi SVD is cubic, so both carry explicit budgets and fail
//! with [`CurError::BudgetExceeded`](crate::CurError::BudgetExceeded)
//! instead of truncating.

mod maxvol;
mod svd;
mod theorems;
mod volume;

pub use maxvol::{
    binomial, brute_force_maxvol, brute_force_maxvol_with_budget, next_combination, MaxvolResult,
    DEFAULT_MAXVOL_BUDGET,
};
pub use svd::{
    jacobi_svd, singular_values, singular_values_capped, SingularSpectrum, Svd, DEFAULT_SVD_CAP,
};
pub use theorems::{
    improved_bound, verify_theorem1, verify_theorem1_with_budget, verify_theorem2,
    verify_theorem2_with_budget, CheckOutcome, TheoremCheck,
};
pub use volume::volume;
