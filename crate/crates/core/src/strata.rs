//! Stratification of `Hom(F_g, SU(2))/SU(2)` by stabilizer dimension,
//! the trace polarization, and samplers for each stratum.
//!
//! Stratum `i` collects points whose stabilizer has dimension `3 - i`:
//! `i = 0` (stabilizer SU(2)), `i = 1` (a maximal torus), `i = 3` (the center).
//! Central tuples other than the trivial one have stabilizer SU(2) too; they
//! are labelled `i = 0` with `central = true`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use libm::sqrt;

use crate::cohomology::{cohomology, restrict_coefficients, CoefficientPart, ComplexMap, Warning};
use crate::error::{Error, Result};
use crate::presentation::{Presentation, Representation, Word};
use crate::sampling::Rng;
use crate::su2::{Alg, Su2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stratum {
    Trivial,
    Reducible,
    Irreducible,
}

impl Stratum {
    pub const ALL: [Stratum; 3] = [Stratum::Trivial, Stratum::Reducible, Stratum::Irreducible];

    /// `i` in `{0, 1, 3}`.
    pub fn index(self) -> u8 {
        match self {
            Stratum::Trivial => 0,
            Stratum::Reducible => 1,
            Stratum::Irreducible => 3,
        }
    }

    pub fn from_index(i: u8) -> Option<Stratum> {
        match i {
            0 => Some(Stratum::Trivial),
            1 => Some(Stratum::Reducible),
            3 => Some(Stratum::Irreducible),
            _ => None,
        }
    }

    pub fn stabilizer_dim(self) -> usize {
        3 - self.index() as usize
    }

    fn from_stabilizer_dim(h0: usize) -> Option<Stratum> {
        match h0 {
            3 => Some(Stratum::Trivial),
            1 => Some(Stratum::Reducible),
            0 => Some(Stratum::Irreducible),
            _ => None,
        }
    }

    /// Stratum dimension on `Hom(F_g, SU(2))/SU(2)`: `0, g, 3g - 3`.
    pub fn expected_dimension(self, g: usize) -> usize {
        match self {
            Stratum::Trivial => 0,
            Stratum::Reducible => g,
            Stratum::Irreducible => (3 * g).saturating_sub(3),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StratumLabel {
    pub stratum: Stratum,
    pub stabilizer_dim: usize,
    /// All images are `±1` but not all `+1`.
    pub central: bool,
}

impl StratumLabel {
    pub fn index(&self) -> u8 {
        self.stratum.index()
    }
}

/// Stabilizer dimension from the images alone: `3` if all are central,
/// `1` if all non-central images share an axis, else `0`.
fn algebraic_stabilizer_dim(images: &[Su2], tol: f64) -> usize {
    let vectors: Vec<Alg> = images.iter().map(Su2::vector).filter(|v| v.norm() > tol).collect();
    let Some(axis) = vectors.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) else {
        return 3;
    };
    let axis = axis.scale(1.0 / axis.norm());
    if vectors.iter().all(|v| axis.cross(*v).norm() <= tol) {
        1
    } else {
        0
    }
}

/// Classifies by `i = 3 - h0`, cross-checked against the axis test.
pub fn classify_stratum(rep: &Representation, tol: f64) -> Result<StratumLabel> {
    let c = cohomology(rep, tol)?;
    if let Some(sigma) = c.warnings.iter().find_map(|w| match w {
        Warning::IllConditioned { map: ComplexMap::D0, sigma } => Some(*sigma),
        _ => None,
    }) {
        return Err(Error::BoundaryAmbiguous { sigma });
    }
    let algebraic = algebraic_stabilizer_dim(rep.images(), tol);
    if algebraic != c.h0 {
        return Err(Error::StratumConflict { numeric: c.h0, algebraic });
    }
    let stratum =
        Stratum::from_stabilizer_dim(c.h0).ok_or(Error::StratumConflict { numeric: c.h0, algebraic })?;
    let central = stratum == Stratum::Trivial && rep.images().iter().any(|x| x.w() < 0.0);
    Ok(StratumLabel { stratum, stabilizer_dim: c.h0, central })
}

/// Tangent dimension of the stratum through `rep` on `Hom(F_g, SU(2))/SU(2)`:
/// `0`, `h1` with stabilizer-line coefficients, or `h1` with full coefficients.
/// Errors when the computed value differs from `0, g, 3g - 3`.
pub fn stratum_tangent_dim(rep: &Representation, tol: f64) -> Result<usize> {
    if rep.presentation().relator_count() != 0 {
        return Err(Error::NotFree);
    }
    let g = rep.generator_count();
    let label = classify_stratum(rep, tol)?;
    let computed = match label.stratum {
        Stratum::Trivial => 0,
        Stratum::Reducible => restrict_coefficients(rep, CoefficientPart::Stabilizer, tol)?.h1,
        Stratum::Irreducible => cohomology(rep, tol)?.h1,
    };
    let expected = label.stratum.expected_dimension(g);
    if computed != expected {
        return Err(Error::TangentDimension { stratum: label.index(), computed, expected });
    }
    Ok(computed)
}

/// Traces of the holonomies along the supplied curve words.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizationValue {
    pub traces: Vec<f64>,
}

impl PolarizationValue {
    /// All traces equal to 2 within `tol`.
    pub fn is_maximally_degenerate(&self, tol: f64) -> bool {
        self.traces.iter().all(|t| (t - 2.0).abs() <= tol)
    }
}

pub fn polarization_map(rep: &Representation, curves: &[Word]) -> Result<PolarizationValue> {
    let traces = curves.iter().map(|c| rep.evaluate(c).map(|h| h.trace())).collect::<Result<Vec<_>>>()?;
    Ok(PolarizationValue { traces })
}

/// Membership in the handlebody fibre: every curve has trace 2, or, with no
/// curves supplied, every generator in `killed` maps to the identity.
pub fn in_handlebody_fibre(rep: &Representation, curves: &[Word], killed: &[usize], tol: f64) -> Result<bool> {
    if curves.is_empty() {
        return Ok(killed.iter().all(|&g| rep.images()[g].distance(&Su2::IDENTITY) <= tol));
    }
    Ok(polarization_map(rep, curves)?.is_maximally_degenerate(tol))
}

const REJECTION_BUDGET: usize = 1000;

/// Random point of the given stratum of `Hom(F_g, SU(2))`; deterministic in `seed`.
pub fn sample_stratum(g: usize, stratum: Stratum, seed: u64, tol: f64) -> Result<Representation> {
    assert!(g >= 1, "genus must be positive");
    let pres = Arc::new(Presentation::free(g));
    let mut rng = Rng::new(seed);
    if stratum == Stratum::Trivial {
        return Ok(Representation::trivial(pres));
    }
    for _ in 0..REJECTION_BUDGET {
        let images: Vec<Su2> = match stratum {
            Stratum::Reducible => {
                let axis = rng.unit_vector();
                (0..g).map(|_| rng.torus_element(axis)).collect()
            }
            _ => (0..g).map(|_| rng.haar_su2()).collect(),
        };
        let rep = Representation::new(pres.clone(), images)?;
        if matches!(classify_stratum(&rep, tol), Ok(label) if label.stratum == stratum) {
            return Ok(rep);
        }
    }
    Err(Error::RejectionBudget { attempts: REJECTION_BUDGET })
}

/// Haar-random tuple in `SU(2)^g`, no rejection.
pub fn haar_free_rep(g: usize, rng: &mut Rng) -> Representation {
    let pres = Arc::new(Presentation::free(g));
    Representation::new(pres, (0..g).map(|_| rng.haar_su2()).collect()).expect("free group has no relators")
}

/// Quaternion rotating unit vector `from` onto unit vector `to` under `Ad`.
pub(crate) fn rotation_between(from: Alg, to: Alg) -> Su2 {
    let c = from.dot(to);
    if 1.0 + c < 1e-12 {
        // antiparallel: half-turn about any perpendicular axis
        let trial = if from.0[0].abs() < 0.9 { Alg::basis(0) } else { Alg::basis(1) };
        let perp = from.cross(trial);
        let perp = perp.scale(1.0 / perp.norm());
        return Su2::new(0.0, perp.0[0], perp.0[1], perp.0[2]).expect("unit axis");
    }
    let axis = from.cross(to);
    Su2::new(1.0 + c, axis.0[0], axis.0[1], axis.0[2]).expect("nonzero quaternion")
}

/// A pair with `[A, B] = c`, random among such pairs.
///
/// `B` is drawn on the great 2-sphere where `tr(c B) = tr(B)`; `A` then
/// conjugates `B` to `c B`, composed with a random rotation about `B`'s axis.
pub fn solve_commutator(c: Su2, rng: &mut Rng) -> (Su2, Su2) {
    let [c0, c1, c2, c3] = c.components();
    let normal = [c0 - 1.0, -c1, -c2, -c3];
    let nn = sqrt(normal.iter().map(|t| t * t).sum());
    loop {
        let mut q = [rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()];
        if nn > 1e-14 {
            let d: f64 = q.iter().zip(&normal).map(|(a, b)| a * b).sum::<f64>() / (nn * nn);
            for (qi, ni) in q.iter_mut().zip(&normal) {
                *qi -= d * ni;
            }
        }
        let Ok(b) = Su2::from_array(q) else { continue };
        let bv = b.vector();
        if bv.norm() < 1e-6 {
            continue;
        }
        let target = (c * b).vector();
        let (bh, th) = (bv.scale(1.0 / bv.norm()), target.scale(1.0 / target.norm()));
        let spin = Su2::exp(bh.scale(rng.uniform_in(0.0, core::f64::consts::PI)));
        let a = rotation_between(bh, th) * spin;
        return (a, b);
    }
}

/// Random irreducible representation of the genus-`g` surface group.
pub fn sample_surface_irreducible(g: usize, seed: u64, tol: f64) -> Result<Representation> {
    assert!(g >= 1, "genus must be positive");
    let pres = Arc::new(Presentation::surface(g));
    let mut rng = Rng::new(seed);
    for _ in 0..REJECTION_BUDGET {
        let mut a: Vec<Su2> = (0..g - 1).map(|_| rng.haar_su2()).collect();
        let mut b: Vec<Su2> = (0..g - 1).map(|_| rng.haar_su2()).collect();
        let partial = a.iter().zip(&b).fold(Su2::IDENTITY, |acc, (x, y)| acc * *x * *y * x.inverse() * y.inverse());
        let (ag, bg) = solve_commutator(partial.inverse(), &mut rng);
        a.push(ag);
        b.push(bg);
        a.extend(b);
        let rep = Representation::new(pres.clone(), a)?;
        let c = cohomology(&rep, tol)?;
        if c.h0 == 0 && !c.ill_conditioned() {
            return Ok(rep);
        }
    }
    Err(Error::RejectionBudget { attempts: REJECTION_BUDGET })
}

/// Surface representation with `A_i -> rho(a_i)` and every `B_i -> 1`; it
/// extends over the handlebody in which the `B_i` bound discs.
pub fn embed_in_surface(free_rep: &Representation) -> Result<Representation> {
    if free_rep.presentation().relator_count() != 0 {
        return Err(Error::NotFree);
    }
    let g = free_rep.generator_count();
    let mut images = free_rep.images().to_vec();
    images.extend(core::iter::repeat_n(Su2::IDENTITY, g));
    Representation::new(Arc::new(Presentation::surface(g)), images)
}
