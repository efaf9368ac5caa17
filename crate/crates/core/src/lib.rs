//! Numerics for SU(2) character varieties of finitely presented groups.
//!
//! The crate is `no_std` (with `alloc`). It covers unit-quaternion arithmetic,
//! Fox calculus, twisted group cohomology by singular-value rank decisions,
//! stratification of `Hom(F_g, SU(2))/SU(2)` by stabilizer dimension, the
//! cup-product symplectic form on surface-group cohomology, determinant-line
//! torsion of metrized exact sequences, and a stratified sum over flat
//! connections of a 3-manifold given externally supplied Chern–Simons values.
//!
//! IO, file formats and the command line live in the companion `charvar` crate.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod cohomology;
pub mod error;
pub mod heegaard;
pub mod linalg;
pub mod moduli;
pub mod presentation;
pub mod sampling;
pub mod strata;
pub mod su2;
pub mod symplectic;
pub mod tol;
pub mod torsion;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use presentation::{FoxDerivative, Letter, Presentation, PresentationKind, Representation, Word};
pub use su2::{AdjointMatrix, Alg, Su2};

pub use num_complex::Complex64;
