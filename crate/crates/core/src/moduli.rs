//! Flat SU(2) connections on built-in and user-supplied 3-manifolds, the
//! clean intersection test, and assembly of the stratified sum
//! `Z(N, k) = sum_i sum_x w_x e^{2 pi i k cs(x)} tau(N, x)`.
//!
//! Chern–Simons values and spectral flows are inputs, never computed here.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::{PI, TAU};
use libm::{cos, floor, round, sin, sqrt};
use num_complex::Complex64;

use crate::cohomology::{cohomology, restrict_coefficients, stabilizer_axis, CoefficientPart, Coefficients};
use crate::error::{Error, Result};
use crate::heegaard::HeegaardData;
use crate::presentation::{Representation, Word};
use crate::strata::{classify_stratum, rotation_between, Stratum, StratumLabel};
use crate::su2::{Alg, Su2};
use crate::torsion::{mv_torsion, TorsionValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    Sphere,
    S1xS2,
    Lens { p: usize, q: i64 },
    ThreeTorus,
}

impl Example {
    pub fn heegaard(&self) -> Result<HeegaardData> {
        match *self {
            Example::Sphere => Ok(HeegaardData::sphere()),
            Example::S1xS2 => Ok(HeegaardData::s1_x_s2()),
            Example::Lens { p, q } => HeegaardData::lens(p, q),
            Example::ThreeTorus => Ok(HeegaardData::three_torus()),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Example::Sphere => "S3".into(),
            Example::S1xS2 => "S1xS2".into(),
            Example::Lens { p, q } => format!("L({p},{q})"),
            Example::ThreeTorus => "T3".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnumerationParams {
    /// Number of chart intervals per circle factor of a positive-dimensional family.
    pub resolution: usize,
    pub tol: f64,
}

impl Default for EnumerationParams {
    fn default() -> Self {
        EnumerationParams { resolution: 8, tol: crate::tol::RANK }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CleanVerdict {
    pub passed: bool,
    /// Declared dimension of the component.
    pub tangent_dim: usize,
    /// `h1` of `pi_1(N)` with the stratum's coefficients.
    pub cohomology_dim: usize,
}

#[derive(Clone, Debug)]
pub struct ModuliPoint {
    pub id: String,
    pub rep: Representation,
    pub stratum: StratumLabel,
    /// Chern–Simons value mod 1, once supplied.
    pub cs: Option<f64>,
    pub torsion: TorsionValue,
    pub component_dim: usize,
    /// Quadrature weight; 1 for isolated points.
    pub weight: f64,
    pub verdict: CleanVerdict,
}

impl ModuliPoint {
    pub fn fingerprint(&self) -> Vec<i64> {
        fingerprint(&self.rep)
    }
}

/// A user-supplied candidate point.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub id: Option<String>,
    pub images: Vec<Su2>,
    pub component_dim: usize,
    pub weight: f64,
}

const FINGERPRINT_SCALE: f64 = 1e7;

/// Generators, then `g_i g_j` and `g_i g_j^-1` for `i < j`, then `g_i g_j g_k`
/// for `i < j < k`.
pub fn fingerprint_schedule(n: usize) -> Vec<Word> {
    let mut words: Vec<Word> = (0..n).map(Word::generator).collect();
    for i in 0..n {
        for j in i + 1..n {
            words.push(Word::generator(i).concat(&Word::generator(j)));
            words.push(Word::generator(i).concat(&Word::power(j, -1)));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                words.push(Word::generator(i).concat(&Word::generator(j)).concat(&Word::generator(k)));
            }
        }
    }
    words
}

/// Traces along the fixed schedule, rounded to `1e-7`.
pub fn fingerprint(rep: &Representation) -> Vec<i64> {
    fingerprint_schedule(rep.generator_count())
        .iter()
        .map(|w| {
            let t = rep.evaluate(w).expect("schedule uses existing generators").trace();
            round(t * FINGERPRINT_SCALE) as i64
        })
        .collect()
}

pub fn format_fingerprint(f: &[i64]) -> String {
    let parts: Vec<String> = f.iter().map(|x| format!("{x}")).collect();
    parts.join(":")
}

/// Some `h` with `h a_i h^-1 = b_i` for all `i`, found by aligning axes.
pub fn find_conjugator(a: &[Su2], b: &[Su2], tol: f64) -> Option<Su2> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| (x.w() - y.w()).abs() > tol) {
        return None;
    }
    let check = |h: Su2| a.iter().zip(b).all(|(x, y)| (h * *x * h.inverse()).distance(y) <= tol).then_some(h);
    let first = a.iter().position(|x| x.vector().norm() > tol);
    let Some(i) = first else {
        return check(Su2::IDENTITY);
    };
    let unit = |v: Alg| v.scale(1.0 / v.norm());
    let (ai, bi) = (unit(a[i].vector()), unit(b[i].vector()));
    let h0 = rotation_between(ai, bi);
    // remaining freedom: rotation about bi
    for (x, y) in a.iter().zip(b) {
        let moved = h0.ad().apply(x.vector());
        let perp_a = moved - bi.scale(moved.dot(bi));
        let perp_b = y.vector() - bi.scale(y.vector().dot(bi));
        if perp_a.norm() > sqrt(tol) && perp_b.norm() > sqrt(tol) {
            let (pa, pb) = (unit(perp_a), unit(perp_b));
            let angle = libm::atan2(pa.cross(pb).dot(bi), pa.dot(pb));
            return check(Su2::exp(bi.scale(angle / 2.0)) * h0);
        }
    }
    check(h0)
}

fn rotation(theta: f64) -> Su2 {
    Su2::exp(Alg::new(theta, 0.0, 0.0))
}

/// Mayer–Vietoris torsion of a flat connection in its stratum's coefficients:
/// `1` on the trivial stratum, the stabilizer line on the reducible one and
/// all of su(2) on the irreducible one.
pub fn point_torsion(rep: &Representation, heegaard: &HeegaardData, tol: f64) -> Result<TorsionValue> {
    stratum_torsion(rep, classify_stratum(rep, tol)?.stratum, heegaard, tol)
}

fn stratum_torsion(rep: &Representation, stratum: Stratum, heegaard: &HeegaardData, tol: f64) -> Result<TorsionValue> {
    Ok(match stratum {
        Stratum::Trivial => TorsionValue::one(),
        Stratum::Reducible => {
            let coeffs = Coefficients::line(stabilizer_axis(rep, tol)?);
            mv_torsion(&heegaard.mv_data(rep, &coeffs, tol)?, tol)?
        }
        Stratum::Irreducible => mv_torsion(&heegaard.mv_data(rep, &Coefficients::full(), tol)?, tol)?,
    })
}

/// Stratum, torsion and clean-intersection verdict of one candidate.
fn build_point(
    id: String,
    rep: Representation,
    component_dim: usize,
    weight: f64,
    heegaard: &HeegaardData,
    tol: f64,
) -> Result<ModuliPoint> {
    let stratum = classify_stratum(&rep, tol)?;
    let verdict = clean_verdict(&rep, stratum, component_dim, tol)?;
    let torsion = stratum_torsion(&rep, stratum.stratum, heegaard, tol)?;
    Ok(ModuliPoint { id, rep, stratum, cs: None, torsion, component_dim, weight, verdict })
}

fn clean_verdict(rep: &Representation, stratum: StratumLabel, component_dim: usize, tol: f64) -> Result<CleanVerdict> {
    let cohomology_dim = match stratum.stratum {
        Stratum::Trivial => return Ok(CleanVerdict { passed: true, tangent_dim: component_dim, cohomology_dim: 0 }),
        Stratum::Reducible => restrict_coefficients(rep, CoefficientPart::Stabilizer, tol)?.h1,
        Stratum::Irreducible => cohomology(rep, tol)?.h1,
    };
    Ok(CleanVerdict { passed: cohomology_dim == component_dim, tangent_dim: component_dim, cohomology_dim })
}

/// Compares the declared component dimension with `h1` of `pi_1(N)` in the
/// stratum's coefficients. The trivial stratum passes.
pub fn clean_intersection_check(point: &ModuliPoint, heegaard: &HeegaardData, tol: f64) -> Result<CleanVerdict> {
    if **point.rep.presentation() != **heegaard.manifold() {
        return Err(Error::InvalidHeegaard("point is not a representation of the splitting's manifold".into()));
    }
    clean_verdict(&point.rep, point.stratum, point.component_dim, tol)
}

/// Drops candidates conjugate to an earlier one. Fingerprints propose merges;
/// an explicit conjugator confirms them.
fn deduplicate(points: Vec<ModuliPoint>, tol: f64) -> Vec<ModuliPoint> {
    let mut buckets: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    let mut kept: Vec<ModuliPoint> = Vec::new();
    for p in points {
        let f = p.fingerprint();
        let bucket = buckets.entry(f).or_default();
        let duplicate = bucket
            .iter()
            .any(|&i| find_conjugator(kept[i].rep.images(), p.rep.images(), 1e3 * tol.max(1e-12)).is_some());
        if !duplicate {
            bucket.push(kept.len());
            kept.push(p);
        }
    }
    kept
}

/// Flat connections of a built-in example, in a fixed order.
///
/// Lens spaces: `a -> exp(2 pi n / p e_1)`, `n = 0..=p/2`. `S^1 x S^2`: the
/// trivial and central points plus the reducible arc `theta = pi j / M`,
/// `0 < j < M`, weight `pi / M`. `T^3`: commuting triples on the grid
/// `2 pi j / M`, weight `(2 pi / M)^3`, central triples isolated.
pub fn enumerate_moduli(example: Example, params: &EnumerationParams) -> Result<Vec<ModuliPoint>> {
    let h = example.heegaard()?;
    let pres = h.manifold().clone();
    let tol = params.tol;
    let m = params.resolution.max(1);
    let mut points = Vec::new();
    match example {
        Example::Sphere => {
            points.push(build_point("trivial".into(), Representation::trivial(pres), 0, 1.0, &h, tol)?);
        }
        Example::Lens { p, .. } => {
            for n in 0..=p / 2 {
                let rep = Representation::new(pres.clone(), vec![rotation(TAU * n as f64 / p as f64)])?;
                points.push(build_point(format!("n{n}"), rep, 0, 1.0, &h, tol)?);
            }
        }
        Example::S1xS2 => {
            points.push(build_point("trivial".into(), Representation::trivial(pres.clone()), 0, 1.0, &h, tol)?);
            let central = Representation::new(pres.clone(), vec![Su2::MINUS_IDENTITY])?;
            points.push(build_point("central".into(), central, 0, 1.0, &h, tol)?);
            for j in 1..m {
                let rep = Representation::new(pres.clone(), vec![rotation(PI * j as f64 / m as f64)])?;
                points.push(build_point(format!("theta{j}"), rep, 1, PI / m as f64, &h, tol)?);
            }
        }
        Example::ThreeTorus => {
            let step = TAU / m as f64;
            let weight = step * step * step;
            for j1 in 0..m {
                for j2 in 0..m {
                    for j3 in 0..m {
                        let js = [j1, j2, j3];
                        let images: Vec<Su2> = js.iter().map(|&j| rotation(TAU * j as f64 / m as f64)).collect();
                        let central = js.iter().all(|&j| 2 * j % m == 0);
                        let rep = Representation::new(pres.clone(), images)?;
                        let id = format!("t{j1}-{j2}-{j3}");
                        let (dim, w) = if central { (0, 1.0) } else { (3, weight) };
                        points.push(build_point(id, rep, dim, w, &h, tol)?);
                    }
                }
            }
        }
    }
    Ok(deduplicate(points, tol))
}

/// Points from user-supplied candidates; relators must hold within `tol`.
pub fn enumerate_custom(heegaard: &HeegaardData, candidates: &[Candidate], tol: f64) -> Result<Vec<ModuliPoint>> {
    let mut points = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        let rep = Representation::with_tolerance(heegaard.manifold().clone(), c.images.clone(), tol)?;
        let id = c.id.clone().unwrap_or_else(|| format!("c{i}"));
        points.push(build_point(id, rep, c.component_dim, c.weight, heegaard, tol)?);
    }
    Ok(deduplicate(points, tol))
}

/// Fills `cs` from `(key, value)` pairs, matched against point ids or
/// formatted fingerprints. Every point must be matched.
pub fn apply_cs_table(points: &mut [ModuliPoint], table: &[(String, f64)]) -> Result<()> {
    for p in points.iter_mut() {
        let fp = format_fingerprint(&p.fingerprint());
        let hit = table.iter().find(|(k, _)| *k == p.id || *k == fp);
        match hit {
            Some((_, cs)) => p.cs = Some(*cs),
            None => return Err(Error::UnmatchedPoint(p.id.clone())),
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantResult {
    pub k: i64,
    /// Contributions of strata `0, 1, 3`, in that order.
    pub per_stratum: [(u8, Complex64); 3],
    pub total: Complex64,
    pub diagnostics: Vec<(String, CleanVerdict)>,
}

/// `e^{2 pi i t}` with `t` first reduced to `[0, 1)`.
fn unit_phase(t: f64) -> Complex64 {
    let t = t - floor(t);
    Complex64::new(cos(TAU * t), sin(TAU * t))
}

/// `sum_x w_x e^{2 pi i k cs_x} tau_x` per stratum, accumulated in list order.
pub fn assemble_invariant(points: &[ModuliPoint], k: i64) -> Result<InvariantResult> {
    let mut per = [(0u8, Complex64::new(0.0, 0.0)), (1, Complex64::new(0.0, 0.0)), (3, Complex64::new(0.0, 0.0))];
    let mut diagnostics = Vec::with_capacity(points.len());
    for p in points {
        if !p.verdict.passed {
            return Err(Error::NotClean {
                point: p.id.clone(),
                tangent: p.verdict.tangent_dim,
                cohomology: p.verdict.cohomology_dim,
            });
        }
        let cs = p.cs.ok_or_else(|| Error::UnmatchedPoint(p.id.clone()))?;
        let slot = match p.stratum.stratum {
            Stratum::Trivial => 0,
            Stratum::Reducible => 1,
            Stratum::Irreducible => 2,
        };
        let phase = unit_phase((cs - floor(cs)) * k as f64);
        per[slot].1 += phase * (p.weight * p.torsion.value);
        diagnostics.push((p.id.clone(), p.verdict));
    }
    let total = per[0].1 + per[1].1 + per[2].1;
    Ok(InvariantResult { k, per_stratum: per, total, diagnostics })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FgEntry {
    pub tau: f64,
    pub spectral_flow: i64,
    pub cs: f64,
}

/// `(1/2) e^{3 pi i/4} sum_i sqrt(tau_i) e^{-2 pi i I_i/4} e^{2 pi i cs_i (k+2)}`.
pub fn stationary_phase_fg(entries: &[FgEntry], k: i64) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for e in entries {
        if e.tau <= 0.0 || !e.tau.is_finite() {
            return Err(Error::InvalidInput(format!("tau must be positive, got {}", e.tau)));
        }
        let flow = unit_phase(-(e.spectral_flow.rem_euclid(4) as f64) / 4.0);
        let cs = e.cs - floor(e.cs);
        sum += flow * unit_phase(cs * (k + 2) as f64) * sqrt(e.tau);
    }
    Ok(unit_phase(3.0 / 8.0) * 0.5 * sum)
}
