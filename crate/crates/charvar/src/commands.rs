//! One function per subcommand, each returning the report body.

use std::path::Path;

use charvar_core::cohomology::{cohomology_with, coefficients_for, CoefficientPart, ComplexMap, Warning};
use charvar_core::moduli::{
    apply_cs_table, assemble_invariant, enumerate_custom, enumerate_moduli, format_fingerprint, point_torsion,
    stationary_phase_fg, EnumerationParams, Example, ModuliPoint,
};
use charvar_core::strata::{classify_stratum, polarization_map, stratum_tangent_dim};
use charvar_core::torsion::{sequence_torsion, TorsionValue};
use charvar_core::PresentationKind;
use serde::Serialize;
use serde_json::{json, Value};

use crate::census::{strata_scan, symplectic_check};
use crate::formats::{
    format_complex, load_cs_table, load_fg_entries, ComplexJson, ManifoldFile, RepresentationFile, TorsionFile,
    TorsionInput,
};
use crate::{CliError, CliResult, RunConfig};

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn warning_json(w: &Warning) -> Value {
    let name = |m: &ComplexMap| match m {
        ComplexMap::D0 => "d0",
        ComplexMap::D1 => "d1",
    };
    match w {
        Warning::IllConditioned { map, sigma } => json!({"kind": "ill_conditioned", "map": name(map), "sigma": sigma}),
        Warning::BasisDimension { h1, basis } => json!({"kind": "basis_dimension", "h1": h1, "basis": basis}),
    }
}

pub fn classify(input: &Path, polish: bool, cfg: &RunConfig) -> CliResult<Value> {
    let file = RepresentationFile::load(input)?;
    let rep = file.build(cfg.tolerance, polish)?;
    let label = classify_stratum(&rep, cfg.tolerance)?;
    let mut body = json!({
        "stratum": label.index(),
        "stabilizer_dim": label.stabilizer_dim,
        "central": label.central,
        "relator_residual": rep.residual(),
        "fingerprint": format_fingerprint(&charvar_core::moduli::fingerprint(&rep)),
    });
    if let PresentationKind::Free { .. } = rep.presentation().kind() {
        body["tangent_dim"] = stratum_tangent_dim(&rep, cfg.tolerance)?.into();
    }
    if !file.curves.is_empty() {
        let curves = file.curves.iter().map(|c| rep.presentation().parse_word(c)).collect::<Result<Vec<_>, _>>()?;
        let value = polarization_map(&rep, &curves)?;
        body["polarization"] = json!({
            "traces": value.traces,
            "maximally_degenerate": value.is_maximally_degenerate(cfg.tolerance),
        });
    }
    Ok(body)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CoefficientArg {
    Full,
    Stabilizer,
    Complement,
}

impl CoefficientArg {
    fn part(self) -> CoefficientPart {
        match self {
            CoefficientArg::Full => CoefficientPart::Full,
            CoefficientArg::Stabilizer => CoefficientPart::Stabilizer,
            CoefficientArg::Complement => CoefficientPart::Complement,
        }
    }

    fn name(self) -> &'static str {
        match self {
            CoefficientArg::Full => "full",
            CoefficientArg::Stabilizer => "stabilizer",
            CoefficientArg::Complement => "complement",
        }
    }
}

pub fn cohomology(input: &Path, coefficients: CoefficientArg, polish: bool, cfg: &RunConfig) -> CliResult<Value> {
    let rep = RepresentationFile::load(input)?.build(cfg.tolerance, polish)?;
    let coeffs = coefficients_for(&rep, coefficients.part(), cfg.tolerance)?;
    let c = cohomology_with(&rep, &coeffs, cfg.tolerance)?;
    Ok(json!({
        "h0": c.h0,
        "h1": c.h1,
        "z1_dim": c.z1_dim,
        "rank_d0": c.rank_d0,
        "rank_d1": c.rank_d1,
        "coefficients": coefficients.name(),
        "singular_values_d0": c.singular_values_d0,
        "singular_values_d1": c.singular_values_d1,
        "relator_residual": rep.residual(),
        "warnings": c.warnings.iter().map(warning_json).collect::<Vec<_>>(),
    }))
}

pub fn strata_scan_cmd(genus: usize, cfg: &RunConfig) -> CliResult<Value> {
    Ok(to_value(&strata_scan(genus, cfg.samples, cfg.seed, cfg.tolerance)?))
}

/// Exits with a domain error when the audit fails.
pub fn symplectic_check_cmd(genus: usize, cfg: &RunConfig) -> CliResult<(Value, bool)> {
    let check = symplectic_check(genus, cfg.samples, cfg.seed, cfg.tolerance)?;
    Ok((to_value(&check), check.passed))
}

fn torsion_json(t: &TorsionValue) -> Value {
    json!({"torsion": t.value, "log_torsion": t.log_value, "convention": t.convention})
}

pub fn torsion(input: &Path, polish: bool, cfg: &RunConfig) -> CliResult<Value> {
    match TorsionFile::load(input)?.build(cfg.tolerance, polish)? {
        TorsionInput::Sequence(seq) => {
            let t = sequence_torsion(&seq, cfg.tolerance)?;
            let mut body = torsion_json(&t);
            body["source"] = "sequence".into();
            body["dims"] = to_value(&seq.dims());
            Ok(body)
        }
        TorsionInput::Splitting { rep, heegaard } => {
            let label = classify_stratum(&rep, cfg.tolerance)?;
            let t = point_torsion(&rep, &heegaard, cfg.tolerance)?;
            let mut body = torsion_json(&t);
            body["source"] = "heegaard".into();
            body["stratum"] = label.index().into();
            Ok(body)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExampleArg {
    S3,
    S1xs2,
    Lens,
    T3,
    Custom,
}

pub struct InvariantArgs<'a> {
    pub example: ExampleArg,
    pub p: Option<usize>,
    pub q: Option<i64>,
    pub k: i64,
    pub cs_table: Option<&'a Path>,
    pub resolution: usize,
    pub manifold: Option<&'a Path>,
}

fn point_json(p: &ModuliPoint) -> Value {
    json!({
        "id": p.id,
        "fingerprint": format_fingerprint(&p.fingerprint()),
        "stratum": p.stratum.index(),
        "central": p.stratum.central,
        "cs": p.cs,
        "torsion": p.torsion.value,
        "log_torsion": p.torsion.log_value,
        "component_dim": p.component_dim,
        "weight": p.weight,
        "verdict": {
            "passed": p.verdict.passed,
            "tangent_dim": p.verdict.tangent_dim,
            "cohomology_dim": p.verdict.cohomology_dim,
        },
    })
}

pub fn invariant(args: &InvariantArgs<'_>, cfg: &RunConfig) -> CliResult<Value> {
    if args.resolution == 0 {
        return Err(CliError::Usage("--resolution must be at least 1".into()));
    }
    let params = EnumerationParams { resolution: args.resolution, tol: cfg.tolerance };
    let (name, mut points) = match args.example {
        ExampleArg::Custom => {
            let path = args.manifold.ok_or_else(|| CliError::Usage("--example custom needs a manifold file".into()))?;
            let (heegaard, candidates) = ManifoldFile::load(path)?.build()?;
            ("custom".to_string(), enumerate_custom(&heegaard, &candidates, cfg.tolerance)?)
        }
        other => {
            let example = match other {
                ExampleArg::S3 => Example::Sphere,
                ExampleArg::S1xs2 => Example::S1xS2,
                ExampleArg::T3 => Example::ThreeTorus,
                ExampleArg::Lens => {
                    let p = args.p.ok_or_else(|| CliError::Usage("--example lens needs --p".into()))?;
                    Example::Lens { p, q: args.q.unwrap_or(1) }
                }
                ExampleArg::Custom => unreachable!(),
            };
            (example.name(), enumerate_moduli(example, &params)?)
        }
    };
    let cs_source = match args.cs_table {
        Some(path) => {
            apply_cs_table(&mut points, &load_cs_table(path)?)?;
            "table"
        }
        None => {
            for p in points.iter_mut() {
                p.cs = Some(0.0);
            }
            "default-zero"
        }
    };
    let result = assemble_invariant(&points, args.k)?;
    let per_stratum: serde_json::Map<String, Value> = result
        .per_stratum
        .iter()
        .map(|(i, z)| (i.to_string(), to_value(&ComplexJson::from(*z))))
        .collect();
    Ok(json!({
        "manifold": name,
        "k": result.k,
        "total": ComplexJson::from(result.total),
        "formatted": format_complex(result.total),
        "per_stratum": per_stratum,
        "cs_source": cs_source,
        "resolution": args.resolution,
        "points": points.iter().map(point_json).collect::<Vec<_>>(),
    }))
}

pub fn fg_sum(entries: &Path, k: i64) -> CliResult<Value> {
    let entries = load_fg_entries(entries)?;
    let z = stationary_phase_fg(&entries, k)?;
    Ok(json!({
        "k": k,
        "entries": entries.len(),
        "value": ComplexJson::from(z),
        "formatted": format_complex(z),
    }))
}

