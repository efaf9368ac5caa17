//! Monte Carlo censuses over `Hom(F_g, SU(2))` and surface groups. Draw `i`
//! uses its own generator `Rng::for_draw(seed, i)`, so results do not depend
//! on the number of worker threads.

use charvar_core::cohomology::cohomology;
use charvar_core::sampling::{sub_seed, Rng};
use charvar_core::strata::{
    classify_stratum, embed_in_surface, haar_free_rep, sample_stratum, sample_surface_irreducible,
    stratum_tangent_dim, Stratum,
};
use charvar_core::symplectic::audit;
use charvar_core::Error;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StratumCounts {
    pub trivial: usize,
    pub reducible: usize,
    pub irreducible: usize,
    /// Draws whose stabilizer rank sits inside the ill-conditioned band.
    pub ambiguous: usize,
    pub conflicts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionAudit {
    pub expected: usize,
    pub violations: usize,
    pub first_violation: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentAudit {
    pub stratum: u8,
    pub samples: usize,
    pub expected: usize,
    pub violations: usize,
    pub sampling_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrataScan {
    pub genus: usize,
    pub samples: usize,
    pub seed: u64,
    pub counts: StratumCounts,
    /// `h1 - h0 = 3g - 3` on every Haar draw.
    pub h1_minus_h0: DimensionAudit,
    /// `3 - h0 + h1 = 3g` on every Haar draw.
    pub euler: DimensionAudit,
    pub tangent: Vec<TangentAudit>,
}

struct Draw {
    h0: usize,
    h1: usize,
    label: Result<Stratum, Error>,
}

fn audit_of(expected: usize, ok: impl Iterator<Item = bool>) -> DimensionAudit {
    let bad: Vec<usize> = ok.enumerate().filter(|(_, ok)| !ok).map(|(i, _)| i).collect();
    DimensionAudit { expected, violations: bad.len(), first_violation: bad.first().copied() }
}

/// Haar census plus `samples` forced draws per stratum checked against the
/// stratum dimensions `0, g, 3g - 3`.
pub fn strata_scan(genus: usize, samples: usize, seed: u64, tol: f64) -> Result<StrataScan, Error> {
    if genus == 0 {
        return Err(Error::InvalidInput("genus must be positive".into()));
    }
    let draws: Vec<Draw> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let rep = haar_free_rep(genus, &mut Rng::for_draw(seed, i as u64));
            let c = cohomology(&rep, tol)?;
            Ok(Draw { h0: c.h0, h1: c.h1, label: classify_stratum(&rep, tol).map(|l| l.stratum) })
        })
        .collect::<Result<_, Error>>()?;

    let mut counts = StratumCounts::default();
    for d in &draws {
        match d.label {
            Ok(Stratum::Trivial) => counts.trivial += 1,
            Ok(Stratum::Reducible) => counts.reducible += 1,
            Ok(Stratum::Irreducible) => counts.irreducible += 1,
            Err(Error::BoundaryAmbiguous { .. }) => counts.ambiguous += 1,
            Err(Error::StratumConflict { .. }) => counts.conflicts += 1,
            Err(ref e) => return Err(e.clone()),
        }
    }
    let expected = 3 * genus - 3;
    let h1_minus_h0 = audit_of(expected, draws.iter().map(|d| d.h1 as i64 - d.h0 as i64 == expected as i64));
    let euler = audit_of(3 * genus, draws.iter().map(|d| 3 + d.h1 == 3 * genus + d.h0));

    let tangent = Stratum::ALL
        .iter()
        .map(|&s| tangent_audit(genus, s, samples, sub_seed(seed, 1 + s.index() as u64), tol))
        .collect();
    Ok(StrataScan { genus, samples, seed, counts, h1_minus_h0, euler, tangent })
}

/// Forced samples in one stratum; `stratum_tangent_dim` must return the
/// expected dimension on each.
pub fn tangent_audit(genus: usize, stratum: Stratum, samples: usize, seed: u64, tol: f64) -> TangentAudit {
    let outcomes: Vec<Option<bool>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let rep = sample_stratum(genus, stratum, sub_seed(seed, i as u64), tol).ok()?;
            Some(matches!(stratum_tangent_dim(&rep, tol), Ok(d) if d == stratum.expected_dimension(genus)))
        })
        .collect();
    TangentAudit {
        stratum: stratum.index(),
        samples,
        expected: stratum.expected_dimension(genus),
        violations: outcomes.iter().filter(|o| **o == Some(false)).count(),
        sampling_failures: outcomes.iter().filter(|o| o.is_none()).count(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymplecticCheck {
    pub genus: usize,
    pub samples: usize,
    pub seed: u64,
    pub expected_rank: usize,
    pub max_antisymmetry_defect: f64,
    pub max_coboundary_defect: f64,
    pub rank_violations: usize,
    /// Handlebody points: the tangent space to the image of the handlebody
    /// representations, paired with itself.
    pub max_isotropy_defect: f64,
    pub expected_handlebody_dim: usize,
    pub handlebody_dim_violations: usize,
    pub tolerance: f64,
    pub isotropy_tolerance: f64,
    pub passed: bool,
}

/// Bound on `|omega|` between handlebody tangent vectors.
pub const ISOTROPY_TOLERANCE: f64 = 1e-7;

/// Audits the form at random irreducible surface representations and at
/// representations extending over a handlebody.
pub fn symplectic_check(genus: usize, samples: usize, seed: u64, tol: f64) -> Result<SymplecticCheck, Error> {
    if genus < 2 {
        return Err(Error::InvalidInput("symplectic check needs genus at least 2".into()));
    }
    let killed: Vec<usize> = (genus..2 * genus).collect();
    let audits: Vec<_> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sub_seed(seed, i as u64);
            let mut rng = Rng::for_draw(seed, i as u64);
            let surface = sample_surface_irreducible(genus, s, tol)?;
            let a = audit(&surface, None, &mut rng, tol)?;
            let handle = embed_in_surface(&sample_stratum(genus, Stratum::Irreducible, s, tol)?)?;
            let b = audit(&handle, Some(&killed), &mut rng, tol)?;
            Ok((a, b))
        })
        .collect::<Result<_, Error>>()?;

    let expected_rank = 6 * genus - 6;
    let expected_handlebody_dim = 3 * genus - 3;
    let fold = |f: &dyn Fn(&(charvar_core::symplectic::SymplecticAudit, charvar_core::symplectic::SymplecticAudit)) -> f64| {
        audits.iter().map(f).fold(0.0, f64::max)
    };
    let max_antisymmetry_defect = fold(&|(a, b)| a.antisymmetry_defect.max(b.antisymmetry_defect));
    let max_coboundary_defect = fold(&|(a, b)| a.coboundary_defect.max(b.coboundary_defect));
    let max_isotropy_defect = fold(&|(_, b)| b.isotropy_defect.unwrap_or(f64::INFINITY));
    let rank_violations = audits.iter().filter(|(a, _)| a.gram_rank != expected_rank || a.h1 != expected_rank).count();
    let handlebody_dim_violations =
        audits.iter().filter(|(_, b)| b.handlebody_dim != Some(expected_handlebody_dim)).count();
    let passed = max_antisymmetry_defect < tol
        && max_coboundary_defect < tol
        && rank_violations == 0
        && handlebody_dim_violations == 0
        && max_isotropy_defect < ISOTROPY_TOLERANCE;
    Ok(SymplecticCheck {
        genus,
        samples,
        seed,
        expected_rank,
        max_antisymmetry_defect,
        max_coboundary_defect,
        rank_violations,
        max_isotropy_defect,
        expected_handlebody_dim,
        handlebody_dim_violations,
        tolerance: tol,
        isotropy_tolerance: ISOTROPY_TOLERANCE,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_scan_is_clean() {
        let s = strata_scan(2, 50, 7, 1e-8).unwrap();
        assert_eq!(s.counts.irreducible + s.counts.ambiguous + s.counts.reducible + s.counts.trivial, 50);
        assert_eq!(s.h1_minus_h0.violations, 0);
        assert_eq!(s.euler.violations, 0);
        assert!(s.tangent.iter().all(|t| t.violations == 0 && t.sampling_failures == 0));
        assert_eq!(s, strata_scan(2, 50, 7, 1e-8).unwrap());
    }

    #[test]
    fn small_symplectic_check_passes() {
        let c = symplectic_check(2, 5, 3, 1e-8).unwrap();
        assert!(c.passed, "{c:?}");
        assert!(symplectic_check(1, 5, 3, 1e-8).is_err());
    }
}
