//! Twisted group cohomology `H^0`, `H^1` with coefficients in su(2) or an
//! Ad-invariant subspace of it.
//!
//! With `n` generators and `m` relators and a `k`-dimensional coefficient
//! space, `d0` is `k n x k` (block `g` is `Ad(x_g) - I`) and `d1` is the Fox
//! Jacobian, `k m x k n`. Ranks come from singular values compared against an
//! absolute threshold. `H^1` representatives are taken in
//! `ker d1 ∩ (im d0)^⊥`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{orthogonal_complement, Matrix};
use crate::presentation::Representation;
use crate::su2::Alg;

/// Which part of su(2) serves as coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientPart {
    Full,
    /// The stabilizer line; the action on it is trivial.
    Stabilizer,
    /// Its 2-dimensional orthocomplement.
    Complement,
}

/// Orthonormal basis (columns, `3 x k`) of an Ad-invariant subspace of su(2).
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficients {
    basis: Matrix,
}

impl Coefficients {
    pub fn full() -> Self {
        Coefficients { basis: Matrix::identity(3) }
    }

    pub fn line(axis: Alg) -> Self {
        let a = axis.scale(1.0 / axis.norm());
        Coefficients { basis: Matrix::column_vector(&a.0) }
    }

    pub fn complement_of(axis: Alg) -> Self {
        let line = Coefficients::line(axis);
        Coefficients { basis: orthogonal_complement(&line.basis, 1e-6) }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// `P^T m P` for a 3x3 operator `m`.
    pub fn restrict(&self, m: &Matrix) -> Matrix {
        self.basis.transpose().matmul(m).matmul(&self.basis)
    }

    /// Coordinates of an algebra vector.
    pub fn coordinates(&self, v: Alg) -> Vec<f64> {
        self.basis.transpose().mul_vec(&v.0)
    }

    pub fn embed(&self, coords: &[f64]) -> Alg {
        Alg::from_slice(&self.basis.mul_vec(coords))
    }

    /// Splits a flattened `k n` cochain into per-generator algebra vectors.
    pub fn embed_cochain(&self, flat: &[f64]) -> Vec<Alg> {
        flat.chunks(self.dim()).map(|c| self.embed(c)).collect()
    }

    pub fn project_cochain(&self, values: &[Alg]) -> Vec<f64> {
        values.iter().flat_map(|v| self.coordinates(*v)).collect()
    }
}

/// `d0` and `d1` of the presentation complex with twisted coefficients.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pub d0: Matrix,
    pub d1: Matrix,
    pub coeff_dim: usize,
}

impl TwistedComplex {
    pub fn new(rep: &Representation, coeffs: &Coefficients) -> Self {
        let k = coeffs.dim();
        let n = rep.generator_count();
        let mut d0 = Matrix::zeros(k * n, k);
        let id = Matrix::identity(3);
        for (g, x) in rep.images().iter().enumerate() {
            d0.set_block(k * g, 0, &coeffs.restrict(&x.ad().to_matrix().sub(&id)));
        }
        let jac = rep.fox_jacobian();
        let m = jac.rows() / 3;
        let mut d1 = Matrix::zeros(k * m, k * n);
        for r in 0..m {
            for g in 0..n {
                d1.set_block(k * r, k * g, &coeffs.restrict(&jac.block(3 * r, 3 * g, 3, 3)));
            }
        }
        TwistedComplex { d0, d1, coeff_dim: k }
    }

    /// `max |d1 d0|`; zero up to rounding when the relators hold.
    pub fn composite_defect(&self) -> f64 {
        if self.d1.rows() == 0 {
            return 0.0;
        }
        self.d1.matmul(&self.d0).max_abs()
    }
}

/// `d0` with full coefficients: block `g` is `Ad(x_g) - I`.
pub fn build_d0(rep: &Representation) -> Matrix {
    TwistedComplex::new(rep, &Coefficients::full()).d0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexMap {
    D0,
    D1,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Warning {
    /// A singular value within a factor 10 of the threshold.
    IllConditioned { map: ComplexMap, sigma: f64 },
    /// The harmonic basis does not have `h1` columns.
    BasisDimension { h1: usize, basis: usize },
}

/// Dimensions and orthonormal bases of `H^0`, `H^1`.
#[derive(Clone, Debug)]
pub struct CohomologySummary {
    pub h0: usize,
    pub h1: usize,
    /// `dim ker d1`, the Zariski tangent dimension.
    pub z1_dim: usize,
    pub rank_d0: usize,
    pub rank_d1: usize,
    /// `k x h0`, spanning `ker d0`.
    pub basis_h0: Matrix,
    /// `k n x h1`, spanning `ker d1 ∩ (im d0)^⊥`.
    pub basis_h1: Matrix,
    pub singular_values_d0: Vec<f64>,
    pub singular_values_d1: Vec<f64>,
    pub warnings: Vec<Warning>,
    pub coefficients: Coefficients,
    pub complex: TwistedComplex,
}

impl CohomologySummary {
    pub fn ill_conditioned(&self) -> bool {
        self.warnings.iter().any(|w| matches!(w, Warning::IllConditioned { .. }))
    }

    /// Smallest singular value of `d0` above the threshold, if any.
    pub fn smallest_nonzero_d0(&self, tol: f64) -> Option<f64> {
        self.singular_values_d0.iter().copied().rfind(|&s| s > tol)
    }

    /// Coordinates in `basis_h1` of a cocycle (flattened, `k n` entries).
    /// Coboundary components drop out because the basis is orthogonal to `im d0`.
    pub fn h1_coordinates(&self, cocycle: &[f64]) -> Vec<f64> {
        self.basis_h1.transpose().mul_vec(cocycle)
    }

    /// Basis vector `j` of `H^1` as per-generator algebra vectors.
    pub fn h1_vector(&self, j: usize) -> Vec<Alg> {
        self.coefficients.embed_cochain(&self.basis_h1.column(j))
    }
}

/// Cohomology with full su(2) coefficients.
pub fn cohomology(rep: &Representation, tol: f64) -> Result<CohomologySummary> {
    cohomology_with(rep, &Coefficients::full(), tol)
}

/// Cohomology with coefficients in an Ad-invariant subspace.
pub fn cohomology_with(rep: &Representation, coeffs: &Coefficients, tol: f64) -> Result<CohomologySummary> {
    if rep.residual() > tol {
        return Err(Error::RelatorResidual { residual: rep.residual(), tolerance: tol });
    }
    let complex = TwistedComplex::new(rep, coeffs);
    let k = complex.coeff_dim;
    let n = rep.generator_count();

    let svd0 = complex.d0.svd();
    let svd1 = complex.d1.svd();
    let rank_d0 = svd0.rank(tol);
    let rank_d1 = svd1.rank(tol);
    let z1_dim = k * n - rank_d1;

    let mut warnings = Vec::new();
    for sigma in svd0.near_threshold(tol) {
        warnings.push(Warning::IllConditioned { map: ComplexMap::D0, sigma });
    }
    for sigma in svd1.near_threshold(tol) {
        warnings.push(Warning::IllConditioned { map: ComplexMap::D1, sigma });
    }

    let h0 = k - rank_d0;
    let h1 = z1_dim.saturating_sub(rank_d0);
    let harmonic = complex.d1.vstack(&complex.d0.transpose()).svd();
    let basis_h1 = harmonic.null_space(tol);
    if basis_h1.cols() != h1 {
        warnings.push(Warning::BasisDimension { h1, basis: basis_h1.cols() });
    }

    Ok(CohomologySummary {
        h0,
        h1,
        z1_dim,
        rank_d0,
        rank_d1,
        basis_h0: svd0.null_space(tol),
        basis_h1,
        singular_values_d0: svd0.sigma,
        singular_values_d1: svd1.sigma,
        warnings,
        coefficients: coeffs.clone(),
        complex,
    })
}

/// Unit axis spanning the stabilizer algebra; needs `h0 = 1`.
pub fn stabilizer_axis(rep: &Representation, tol: f64) -> Result<Alg> {
    let full = cohomology(rep, tol)?;
    if full.h0 != 1 {
        return Err(Error::NoCanonicalSplitting { h0: full.h0 });
    }
    Ok(Alg::from_slice(&full.basis_h0.column(0)))
}

pub fn coefficients_for(rep: &Representation, part: CoefficientPart, tol: f64) -> Result<Coefficients> {
    match part {
        CoefficientPart::Full => Ok(Coefficients::full()),
        CoefficientPart::Stabilizer => Ok(Coefficients::line(stabilizer_axis(rep, tol)?)),
        CoefficientPart::Complement => Ok(Coefficients::complement_of(stabilizer_axis(rep, tol)?)),
    }
}

/// Cohomology with coefficients in the stabilizer line or its complement.
/// Only defined at reducible nontrivial points, where the splitting is canonical.
pub fn restrict_coefficients(rep: &Representation, part: CoefficientPart, tol: f64) -> Result<CohomologySummary> {
    let coeffs = coefficients_for(rep, part, tol)?;
    cohomology_with(rep, &coeffs, tol)
}
