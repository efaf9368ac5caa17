//! Torsion of exact sequences of metric vector spaces, the volume of the
//! handlebody locus, and the Mayer–Vietoris torsion of a Heegaard splitting.
//!
//! Convention: for `0 -> V_1 -> ... -> V_n -> 0` with maps `f_1, ..., f_{n-1}`,
//! `log tau = sum_{j odd} log det'(f_j) - sum_{j even} log det'(f_j)`, where
//! `det'` is the product of nonzero singular values. Positions are 1-based.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use libm::exp;

use crate::cohomology::{cohomology, Coefficients, TwistedComplex};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::presentation::Representation;
use crate::strata::{classify_stratum, Stratum};

pub const CONVENTION: &str = "odd-position maps in numerator; det' = product of nonzero singular values; su(2) metric = dot product in (i,j,k)";

/// Composites must vanish to this absolute level.
pub const COMPOSITE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionValue {
    pub value: f64,
    pub log_value: f64,
    pub convention: &'static str,
}

impl TorsionValue {
    pub fn from_log(log_value: f64) -> Self {
        TorsionValue { value: exp(log_value), log_value, convention: CONVENTION }
    }

    pub fn one() -> Self {
        Self::from_log(0.0)
    }

    pub fn half_density(&self) -> HalfDensityValue {
        HalfDensityValue { value: exp(0.5 * self.log_value) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfDensityValue {
    pub value: f64,
}

/// `0 -> V_1 -> ... -> V_n -> 0` with orthonormal reference bases.
/// `maps[j]` is `dims[j+1] x dims[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSequence {
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl MetricSequence {
    pub fn new(dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        if dims.is_empty() && maps.is_empty() {
            return Ok(MetricSequence { dims, maps });
        }
        if maps.len() + 1 != dims.len() {
            return Err(Error::ShapeMismatch(format!("{} spaces need {} maps, got {}", dims.len(), dims.len() - 1, maps.len())));
        }
        for (j, m) in maps.iter().enumerate() {
            if m.rows() != dims[j + 1] || m.cols() != dims[j] {
                return Err(Error::ShapeMismatch(format!(
                    "map {} is {}x{}, expected {}x{}",
                    j + 1,
                    m.rows(),
                    m.cols(),
                    dims[j + 1],
                    dims[j]
                )));
            }
        }
        Ok(MetricSequence { dims, maps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// Largest `|f_{j+1} f_j|` entry.
    pub fn composite_residual(&self) -> f64 {
        self.maps.windows(2).map(|w| w[1].matmul(&w[0]).max_abs()).fold(0.0, f64::max)
    }

    /// Checks exactness at every space and returns `log det'` of each map.
    ///
    /// On failure the residual is the composite defect at that space, or, if
    /// composites vanish, the number of missing dimensions.
    pub fn exactness(&self, tol: f64) -> Result<Vec<f64>> {
        let svds: Vec<_> = self.maps.iter().map(Matrix::svd).collect();
        let ranks: Vec<usize> = svds.iter().map(|s| s.rank(tol)).collect();
        for (i, &dim) in self.dims.iter().enumerate() {
            let composite = if i >= 1 && i < self.maps.len() {
                self.maps[i].matmul(&self.maps[i - 1]).max_abs()
            } else {
                0.0
            };
            if composite >= COMPOSITE_TOLERANCE {
                return Err(Error::NotExact { position: i + 1, residual: composite });
            }
            let incoming = if i >= 1 { ranks[i - 1] } else { 0 };
            let outgoing = if i < self.maps.len() { ranks[i] } else { 0 };
            if incoming + outgoing != dim {
                return Err(Error::NotExact { position: i + 1, residual: dim.abs_diff(incoming + outgoing) as f64 });
            }
        }
        Ok(svds.iter().map(|s| s.log_pseudo_determinant(tol)).collect())
    }
}

pub fn sequence_torsion(seq: &MetricSequence, tol: f64) -> Result<TorsionValue> {
    let logs = seq.exactness(tol)?;
    let log_value = logs.iter().enumerate().map(|(j, l)| if j % 2 == 0 { *l } else { -*l }).sum();
    Ok(TorsionValue::from_log(log_value))
}

/// `0 -> V -> W -> W / im d -> 0` for injective `d`, the quotient
/// identified isometrically with `(im d)^⊥`.
fn injection_sequence(d: &Matrix, tol: f64) -> Result<MetricSequence> {
    let complement = d.transpose().svd().null_space(tol);
    MetricSequence::new(vec![d.cols(), d.rows(), complement.cols()], vec![d.clone(), complement.transpose()])
}

fn require_free(rep: &Representation) -> Result<()> {
    if rep.presentation().relator_count() != 0 {
        return Err(Error::NotFree);
    }
    Ok(())
}

/// Volume of the handlebody locus at `rep` against the metric volume, and
/// its square root.
///
/// Stratum 3 uses `0 -> g -> g^n -> T -> 0` with first map `d0`; stratum 1
/// uses the same sequence with `g` replaced by the complement of the
/// stabilizer line, the line itself contributing `1`; stratum 0 is `1`.
pub fn jw_volume(rep: &Representation, tol: f64) -> Result<(TorsionValue, HalfDensityValue)> {
    require_free(rep)?;
    let label = classify_stratum(rep, tol)?;
    let t = match label.stratum {
        Stratum::Trivial => TorsionValue::one(),
        Stratum::Irreducible => {
            let c = cohomology(rep, tol)?;
            sequence_torsion(&injection_sequence(&c.complex.d0, tol)?, tol)?
        }
        Stratum::Reducible => {
            let (line, complement) = jw_volume_split(rep, tol)?;
            TorsionValue::from_log(line.log_value + complement.log_value)
        }
    };
    let h = t.half_density();
    Ok((t, h))
}

/// Stabilizer-line and complement factors of the volume at a stratum-1 point.
pub fn jw_volume_split(rep: &Representation, tol: f64) -> Result<(TorsionValue, TorsionValue)> {
    require_free(rep)?;
    let axis = crate::cohomology::stabilizer_axis(rep, tol)?;
    let line = TwistedComplex::new(rep, &Coefficients::line(axis));
    // d0 vanishes on the line: the sequence is 0 -> l^n -> l^n -> 0 by the identity
    if line.d0.max_abs() > tol {
        return Err(Error::NoCanonicalSplitting { h0: 1 });
    }
    let n = line.d0.rows();
    let line_part = sequence_torsion(&MetricSequence::new(vec![n, n], vec![Matrix::identity(n)])?, tol)?;
    let comp = TwistedComplex::new(rep, &Coefficients::complement_of(axis));
    let comp_part = sequence_torsion(&injection_sequence(&comp.d0, tol)?, tol)?;
    Ok((line_part, comp_part))
}

/// Restriction data for the Mayer–Vietoris sequence
/// `0 -> H^1(N) -> H^1(H_1) + H^1(H_2) -> H^1(Sigma) -> H^1(N)^* -> 0`,
/// all in orthonormal harmonic bases.
#[derive(Clone, Debug, PartialEq)]
pub struct MvData {
    /// `H^1(N) -> H^1(H_i)`.
    pub r1: Matrix,
    pub r2: Matrix,
    /// `H^1(H_i) -> H^1(Sigma)`.
    pub s1: Matrix,
    pub s2: Matrix,
    /// Pairing on `H^1(Sigma)`.
    pub gram: Matrix,
}

impl MvData {
    /// `alpha = (r1; r2)`, `beta = (s1, -s2)`, `gamma(v) = omega(iota -, v)`
    /// with `iota = s1 r1`.
    pub fn sequence(&self) -> Result<MetricSequence> {
        let n = self.r1.cols();
        let (h1, h2) = (self.r1.rows(), self.r2.rows());
        let sigma = self.s1.rows();
        if self.r2.cols() != n
            || self.s1.cols() != h1
            || self.s2.cols() != h2
            || self.s2.rows() != sigma
            || self.gram.rows() != sigma
            || self.gram.cols() != sigma
        {
            return Err(Error::ShapeMismatch("Mayer-Vietoris restriction data".into()));
        }
        let alpha = self.r1.vstack(&self.r2);
        let beta = self.s1.hstack(&self.s2.scaled(-1.0));
        let iota = self.s1.matmul(&self.r1);
        let gamma = iota.transpose().matmul(&self.gram);
        MetricSequence::new(vec![n, h1 + h2, sigma, n], vec![alpha, beta, gamma])
    }
}

pub fn mv_torsion(data: &MvData, tol: f64) -> Result<TorsionValue> {
    sequence_torsion(&data.sequence()?, tol)
}

/// Relative agreement of two positive values.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
