//! The Goldman pairing on `H^1(pi_1 Sigma_g; su(2))`, differentials of trace
//! functions, and isotropy of polarization fibres.
//!
//! The pairing is the cup product `(u ⌣ v)(a, b) = <u(a), Ad(a) v(b)>`
//! evaluated on the 2-chain of the relator word. Its scale is that of the
//! dot-product metric on su(2).

use alloc::vec::Vec;

use crate::cohomology::{cohomology, CohomologySummary};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::presentation::{PresentationKind, Representation, Word};
use crate::sampling::Rng;
use crate::su2::{inner, trace_pairing, Alg, Su2};
use crate::tol;

/// Values of a 1-cocycle on the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    values: Vec<Alg>,
}

impl Cocycle {
    /// Checks `|d1 u| < tol`.
    pub fn new(rep: &Representation, values: Vec<Alg>, tol: f64) -> Result<Cocycle> {
        let c = Cocycle::unchecked(values);
        if c.values.len() != rep.generator_count() {
            return Err(Error::ShapeMismatch(alloc::format!(
                "cocycle has {} values for {} generators",
                c.values.len(),
                rep.generator_count()
            )));
        }
        let residual = c.d1_residual(rep);
        if residual >= tol {
            return Err(Error::NotACocycle { residual });
        }
        Ok(c)
    }

    pub fn unchecked(values: Vec<Alg>) -> Cocycle {
        Cocycle { values }
    }

    /// `(d0 xi)(x) = Ad(x) xi - xi`.
    pub fn coboundary(rep: &Representation, xi: Alg) -> Cocycle {
        Cocycle { values: rep.images().iter().map(|x| x.ad().apply(xi) - xi).collect() }
    }

    /// Harmonic representative `j` of a cohomology summary.
    pub fn from_h1(summary: &CohomologySummary, j: usize) -> Cocycle {
        Cocycle { values: summary.h1_vector(j) }
    }

    pub fn values(&self) -> &[Alg] {
        &self.values
    }

    pub fn flat(&self) -> Vec<f64> {
        self.values.iter().flat_map(|v| v.0).collect()
    }

    pub fn from_flat(flat: &[f64]) -> Cocycle {
        Cocycle { values: flat.chunks(3).map(Alg::from_slice).collect() }
    }

    pub fn d1_residual(&self, rep: &Representation) -> f64 {
        let r = rep.fox_jacobian().mul_vec(&self.flat());
        libm::sqrt(r.iter().map(|x| x * x).sum())
    }

    pub fn add(&self, o: &Cocycle) -> Cocycle {
        Cocycle { values: self.values.iter().zip(&o.values).map(|(a, b)| *a + *b).collect() }
    }

    pub fn scale(&self, c: f64) -> Cocycle {
        Cocycle { values: self.values.iter().map(|a| a.scale(c)).collect() }
    }

    /// The cocycle transported along `x -> h x h^-1`.
    pub fn rotated(&self, h: &Su2) -> Cocycle {
        let ad = h.ad();
        Cocycle { values: self.values.iter().map(|a| ad.apply(*a)).collect() }
    }
}

fn require_surface(rep: &Representation) -> Result<()> {
    match rep.presentation().kind() {
        PresentationKind::Surface { .. } => Ok(()),
        _ => Err(Error::NotSurface),
    }
}

/// `omega(u, v)` on the fundamental 2-chain of the surface relator.
///
/// Reading the relator letter by letter with prefix `R`, a letter `x`
/// contributes `(u ⌣ v)(R, x)` and a letter `x^-1` contributes
/// `-(u ⌣ v)(R x^-1, x)`.
pub fn goldman_form(rep: &Representation, u: &Cocycle, v: &Cocycle) -> Result<f64> {
    require_surface(rep)?;
    let relator = &rep.presentation().relators()[0];
    let (u, v) = (u.values(), v.values());
    let mut prefix = Su2::IDENTITY;
    let mut u_prefix = Alg::ZERO;
    let mut total = 0.0;
    for l in relator.letters() {
        let x = rep.images()[l.gen];
        if l.inverse {
            prefix = prefix * x.inverse();
            u_prefix = u_prefix - prefix.ad().apply(u[l.gen]);
            total -= inner(u_prefix, prefix.ad().apply(v[l.gen]));
        } else {
            total += inner(u_prefix, prefix.ad().apply(v[l.gen]));
            u_prefix = u_prefix + prefix.ad().apply(u[l.gen]);
            prefix = prefix * x;
        }
    }
    Ok(total)
}

/// `d/dt|_0 tr rho_t(w)` along `x_g -> exp(t u_g) x_g`.
pub fn trace_derivative(rep: &Representation, w: &Word, u: &Cocycle) -> Result<f64> {
    let value = rep.cocycle_value(u.values(), w)?;
    Ok(trace_pairing(value, &rep.evaluate(w)?))
}

/// Gram matrix `omega(b_i, b_j)`.
pub fn gram_matrix(rep: &Representation, basis: &[Cocycle]) -> Result<Matrix> {
    let n = basis.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = goldman_form(rep, &basis[i], &basis[j])?;
        }
    }
    Ok(m)
}

fn cocycles_from_columns(summary: &CohomologySummary, coords: &Matrix) -> Vec<Cocycle> {
    let flat = summary.basis_h1.matmul(coords);
    (0..flat.cols()).map(|j| Cocycle { values: summary.coefficients.embed_cochain(&flat.column(j)) }).collect()
}

/// Orthonormal basis, in harmonic gauge, of the classes killed by every
/// trace differential `d tr_C`.
pub fn fibre_tangent_basis(rep: &Representation, curves: &[Word], tol: f64) -> Result<Vec<Cocycle>> {
    let summary = cohomology(rep, tol)?;
    let h1 = summary.h1;
    if curves.is_empty() || h1 == 0 {
        return Ok(cocycles_from_columns(&summary, &Matrix::identity(h1)));
    }
    let basis: Vec<Cocycle> = (0..h1).map(|j| Cocycle::from_h1(&summary, j)).collect();
    let mut m = Matrix::zeros(curves.len(), h1);
    for (r, c) in curves.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            m[(r, j)] = trace_derivative(rep, c, b)?;
        }
    }
    let kernel = m.svd().null_space(tol);
    Ok(cocycles_from_columns(&summary, &kernel))
}

/// Tangent space of the handlebody locus at `rep`: classes of cocycles
/// vanishing on the generators in `killed`, orthonormalized in harmonic gauge.
pub fn handlebody_tangent_basis(rep: &Representation, killed: &[usize], tol: f64) -> Result<Vec<Cocycle>> {
    let summary = cohomology(rep, tol)?;
    let n = rep.generator_count();
    let mut select = Matrix::zeros(3 * killed.len(), 3 * n);
    for (r, &g) in killed.iter().enumerate() {
        if g >= n {
            return Err(Error::GeneratorOutOfRange { index: g, generators: n });
        }
        for k in 0..3 {
            select[(3 * r + k, 3 * g + k)] = 1.0;
        }
    }
    let cocycles = rep.fox_jacobian().vstack(&select).svd().null_space(tol);
    let coords = summary.basis_h1.transpose().matmul(&cocycles);
    let span = coords.svd().range(tol);
    Ok(cocycles_from_columns(&summary, &span))
}

/// Antisymmetry, gauge and rank audit of `omega` at one surface representation.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticAudit {
    pub h1: usize,
    pub gram_rank: usize,
    /// `max |omega(u, v) + omega(v, u)|` over basis pairs.
    pub antisymmetry_defect: f64,
    /// `max |omega(d0 xi, v)|` over random `xi` and basis `v`.
    pub coboundary_defect: f64,
    /// `max |omega(u, v)|` over the handlebody tangent basis.
    pub isotropy_defect: Option<f64>,
    pub handlebody_dim: Option<usize>,
}

/// Audits `omega` at `rep`; when `killed` is given, also the isotropy of the
/// handlebody tangent space.
pub fn audit(rep: &Representation, killed: Option<&[usize]>, rng: &mut Rng, tol: f64) -> Result<SymplecticAudit> {
    require_surface(rep)?;
    let summary = cohomology(rep, tol)?;
    let basis: Vec<Cocycle> = (0..summary.h1).map(|j| Cocycle::from_h1(&summary, j)).collect();
    let gram = gram_matrix(rep, &basis)?;
    let gram_rank = gram.svd().rank(tol::RANK);
    let antisymmetry_defect = gram.add(&gram.transpose()).max_abs();
    let mut coboundary_defect: f64 = 0.0;
    for _ in 0..3 {
        let xi = Cocycle::coboundary(rep, rng.gaussian_alg());
        for b in &basis {
            coboundary_defect = coboundary_defect.max(goldman_form(rep, &xi, b)?.abs());
            coboundary_defect = coboundary_defect.max(goldman_form(rep, b, &xi)?.abs());
        }
    }
    let (isotropy_defect, handlebody_dim) = match killed {
        Some(k) => {
            let t = handlebody_tangent_basis(rep, k, tol)?;
            (Some(gram_matrix(rep, &t)?.max_abs()), Some(t.len()))
        }
        None => (None, None),
    };
    Ok(SymplecticAudit {
        h1: summary.h1,
        gram_rank,
        antisymmetry_defect,
        coboundary_defect,
        isotropy_defect,
        handlebody_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;
    use crate::strata::{embed_in_surface, sample_stratum, sample_surface_irreducible, Stratum};
    use alloc::sync::Arc;
    use alloc::vec;

    fn random_cocycle(summary: &CohomologySummary, rep: &Representation, rng: &mut Rng) -> Cocycle {
        let mut u = Cocycle::coboundary(rep, rng.gaussian_alg());
        for j in 0..summary.h1 {
            u = u.add(&Cocycle::from_h1(summary, j).scale(rng.gaussian()));
        }
        u
    }

    /// Cup product summed over the bar 2-chain written out independently:
    /// for the torus relator `a b a^-1 b^-1` and trivial coefficients the
    /// pairing is `u(a).v(b) - u(b).v(a)`.
    #[test]
    fn torus_with_trivial_action_is_the_determinant() {
        let pres = Arc::new(Presentation::surface(1));
        let rep = Representation::trivial(pres);
        let mut rng = Rng::new(1);
        for _ in 0..20 {
            let u = Cocycle::new(&rep, vec![rng.gaussian_alg(), rng.gaussian_alg()], 1e-8).unwrap();
            let v = Cocycle::new(&rep, vec![rng.gaussian_alg(), rng.gaussian_alg()], 1e-8).unwrap();
            let expected = u.values()[0].dot(v.values()[1]) - u.values()[1].dot(v.values()[0]);
            assert!((goldman_form(&rep, &u, &v).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn antisymmetric_gauge_invariant_and_nondegenerate() {
        let mut rng = Rng::new(5);
        for seed in 0..10 {
            let rep = sample_surface_irreducible(2, seed, tol::RANK).unwrap();
            let s = cohomology(&rep, tol::RANK).unwrap();
            let (u, v) = (random_cocycle(&s, &rep, &mut rng), random_cocycle(&s, &rep, &mut rng));
            assert!(u.d1_residual(&rep) < 1e-9);
            assert!(goldman_form(&rep, &u, &u).unwrap().abs() < 1e-9);
            let (uv, vu) = (goldman_form(&rep, &u, &v).unwrap(), goldman_form(&rep, &v, &u).unwrap());
            assert!((uv + vu).abs() < 1e-9);
            let shifted = u.add(&Cocycle::coboundary(&rep, rng.gaussian_alg()));
            assert!((goldman_form(&rep, &shifted, &v).unwrap() - uv).abs() < 1e-8);

            let a = audit(&rep, None, &mut rng, tol::RANK).unwrap();
            assert_eq!((a.h1, a.gram_rank), (6, 6));
            assert!(a.antisymmetry_defect < 1e-9 && a.coboundary_defect < 1e-8);
        }
    }

    #[test]
    fn genus_three_rank() {
        let mut rng = Rng::new(2);
        let rep = sample_surface_irreducible(3, 4, tol::RANK).unwrap();
        let a = audit(&rep, None, &mut rng, tol::RANK).unwrap();
        assert_eq!((a.h1, a.gram_rank), (12, 12));
    }

    #[test]
    fn conjugation_equivariance() {
        let mut rng = Rng::new(8);
        let rep = sample_surface_irreducible(2, 3, tol::RANK).unwrap();
        let s = cohomology(&rep, tol::RANK).unwrap();
        let (u, v) = (random_cocycle(&s, &rep, &mut rng), random_cocycle(&s, &rep, &mut rng));
        let h = rng.haar_su2();
        let moved = rep.conjugated(&h);
        let a = goldman_form(&rep, &u, &v).unwrap();
        let b = goldman_form(&moved, &u.rotated(&h), &v.rotated(&h)).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_surface_groups() {
        let rep = Representation::trivial(Arc::new(Presentation::free(2)));
        let u = Cocycle::unchecked(vec![Alg::ZERO; 2]);
        assert_eq!(goldman_form(&rep, &u, &u), Err(Error::NotSurface));
    }

    #[test]
    fn non_cocycles_are_refused() {
        let rep = sample_surface_irreducible(2, 0, tol::RANK).unwrap();
        let values = vec![Alg::new(1.0, 0.0, 0.0), Alg::ZERO, Alg::ZERO, Alg::ZERO];
        assert!(matches!(Cocycle::new(&rep, values, 1e-8), Err(Error::NotACocycle { .. })));
    }

    #[test]
    fn trace_derivative_examples() {
        let mut rng = Rng::new(11);
        let rep = sample_surface_irreducible(2, 6, tol::RANK).unwrap();
        let s = cohomology(&rep, tol::RANK).unwrap();
        let pres = rep.presentation().clone();
        let w = pres.parse_word("a1 b2 A2").unwrap();
        let zero = Cocycle::unchecked(vec![Alg::ZERO; 4]);
        assert_eq!(trace_derivative(&rep, &w, &zero).unwrap(), 0.0);

        for _ in 0..10 {
            let u = random_cocycle(&s, &rep, &mut rng);
            let an = trace_derivative(&rep, &w, &u).unwrap();
            let h = 1e-5;
            let plus = rep.flowed(u.values(), h).evaluate(&w).unwrap().trace();
            let minus = rep.flowed(u.values(), -h).evaluate(&w).unwrap().trace();
            assert!(((plus - minus) / (2.0 * h) - an).abs() < 1e-7);
        }

        let lh = embed_in_surface(&sample_stratum(2, Stratum::Irreducible, 1, tol::RANK).unwrap()).unwrap();
        let s = cohomology(&lh, tol::RANK).unwrap();
        let b1 = pres.parse_word("b1").unwrap();
        let u = random_cocycle(&s, &lh, &mut rng);
        assert!(trace_derivative(&lh, &b1, &u).unwrap().abs() < 1e-12);
    }

    #[test]
    fn fibre_bases() {
        let rep = sample_surface_irreducible(2, 2, tol::RANK).unwrap();
        let pres = rep.presentation().clone();
        assert_eq!(fibre_tangent_basis(&rep, &[], tol::RANK).unwrap().len(), 6);

        let curves: Vec<Word> = ["a1", "a2", "a1 b1 A1 B1"].iter().map(|c| pres.parse_word(c).unwrap()).collect();
        let fibre = fibre_tangent_basis(&rep, &curves, tol::RANK).unwrap();
        assert_eq!(fibre.len(), 3);
        // the trace functions Poisson-commute, so the fibre is Lagrangian
        assert!(gram_matrix(&rep, &fibre).unwrap().max_abs() < 1e-7);
        for u in &fibre {
            for c in &curves {
                assert!(trace_derivative(&rep, c, u).unwrap().abs() < 1e-8);
            }
        }
    }

    #[test]
    fn handlebody_locus_is_lagrangian() {
        let mut rng = Rng::new(4);
        for seed in 0..10 {
            let free = sample_stratum(2, Stratum::Irreducible, seed, tol::RANK).unwrap();
            let rep = embed_in_surface(&free).unwrap();
            let pres = rep.presentation().clone();
            let a = audit(&rep, Some(&[2, 3]), &mut rng, tol::RANK).unwrap();
            assert_eq!((a.h1, a.gram_rank, a.handlebody_dim), (6, 6, Some(3)));
            assert!(a.isotropy_defect.unwrap() < 1e-7);

            let tangent = handlebody_tangent_basis(&rep, &[2, 3], tol::RANK).unwrap();
            let curves: Vec<Word> = ["b1", "b2", "a1 b1 A1 B1"].iter().map(|c| pres.parse_word(c).unwrap()).collect();
            let fibre = fibre_tangent_basis(&rep, &curves, tol::RANK).unwrap();
            // every trace differential vanishes on L_H, so the fibre basis is all of H^1
            assert_eq!(fibre.len(), 6);
            let f = Matrix::from_fn(12, fibre.len(), |r, c| fibre[c].values()[r / 3].0[r % 3]);
            for t in &tangent {
                let flat = t.flat();
                let proj = f.matmul(&f.transpose()).mul_vec(&flat);
                let miss: f64 = proj.iter().zip(&flat).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(miss < 1e-9);
            }
        }
    }
}
