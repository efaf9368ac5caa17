//! Tolerance ladder shared by every module.
//!
//! | rung        | value  | used for                                              |
//! |-------------|--------|-------------------------------------------------------|
//! | `ALGEBRAIC` | 1e-12  | group axioms, unit norm, exp/log near zero            |
//! | `DERIVED`   | 1e-10  | identities derived from the axioms (Ad homomorphism)  |
//! | `RELATOR`   | 1e-9   | default relator residual accepted for a representation |
//! | `RANK`      | 1e-8   | singular-value threshold for rank decisions           |
//!
//! A singular value within a factor [`ILL_CONDITIONED_FACTOR`] of the rank
//! threshold (on either side) makes the verdict "ill-conditioned".

pub const ALGEBRAIC: f64 = 1e-12;
pub const DERIVED: f64 = 1e-10;
pub const RELATOR: f64 = 1e-9;
pub const RANK: f64 = 1e-8;

pub const ILL_CONDITIONED_FACTOR: f64 = 10.0;

/// `true` when `sigma` sits in `[tol / 10, 10 tol]`.
pub fn near_threshold(sigma: f64, tol: f64) -> bool {
    sigma >= tol / ILL_CONDITIONED_FACTOR && sigma <= tol * ILL_CONDITIONED_FACTOR
}
