//! JSON input formats. Every file carries `"schema": 1` and unknown fields
//! are rejected. Quaternions are `[w, x, y, z]`; words are whitespace
//! separated generator names with a capitalized name for the inverse.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use charvar_core::heegaard::{handle_generator_names, Handle, HeegaardData};
use charvar_core::linalg::Matrix;
use charvar_core::moduli::{Candidate, FgEntry};
use charvar_core::torsion::MetricSequence;
use charvar_core::{Presentation, PresentationKind, Representation, Su2, Word};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

pub const SCHEMA: u32 = 1;

/// Largest accepted deviation of an input quaternion from unit norm.
const UNIT_NORM_SLACK: f64 = 1e-6;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.display().to_string(), source })
}

fn check_schema(schema: u32) -> CliResult<()> {
    if schema != SCHEMA {
        return Err(CliError::Usage(format!("unsupported schema {schema}, expected {SCHEMA}")));
    }
    Ok(())
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    /// `free`, `surface`, `cyclic`, `circle_times_surface` or `custom`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relators: Option<Vec<String>>,
}

impl PresentationSpec {
    pub fn build(&self) -> CliResult<Presentation> {
        let need = |v: Option<usize>, what: &str| {
            v.ok_or_else(|| CliError::Usage(format!("presentation of kind '{}' needs '{what}'", self.kind)))
        };
        let kind = match self.kind.as_str() {
            "free" => PresentationKind::Free { genus: need(self.genus, "genus")? },
            "surface" => PresentationKind::Surface { genus: need(self.genus, "genus")? },
            "cyclic" => PresentationKind::Cyclic { order: need(self.order, "order")? },
            "circle_times_surface" => PresentationKind::CircleTimesSurface { genus: need(self.genus, "genus")? },
            "custom" => PresentationKind::Custom,
            other => return Err(CliError::Usage(format!("unknown presentation kind '{other}'"))),
        };
        let standard = match kind {
            PresentationKind::Free { genus } => Some(Presentation::free(genus)),
            PresentationKind::Surface { genus } if genus > 0 => Some(Presentation::surface(genus)),
            PresentationKind::Cyclic { order } if order > 0 => Some(Presentation::cyclic(order)),
            PresentationKind::CircleTimesSurface { genus } if genus > 0 => Some(Presentation::circle_times_surface(genus)),
            PresentationKind::Custom => None,
            _ => return Err(CliError::Usage("genus/order must be positive".into())),
        };
        match (&self.generators, &self.relators, standard) {
            (None, None, Some(p)) => Ok(p),
            (Some(gens), rels, _) => {
                let rels = rels.as_deref().unwrap_or_default();
                let words = rels.iter().map(|r| Word::parse(r, gens)).collect::<Result<Vec<_>, _>>()?;
                Ok(Presentation::from_parts(gens.clone(), words, kind)?)
            }
            _ => Err(CliError::Usage(format!("presentation of kind '{}' needs 'generators'", self.kind))),
        }
    }
}

pub type ImageMap = BTreeMap<String, [f64; 4]>;

pub fn quaternion(q: [f64; 4]) -> CliResult<Su2> {
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_SLACK {
        return Err(CliError::Usage(format!("quaternion {q:?} is not a unit quaternion (norm {norm})")));
    }
    Ok(Su2::from_array(q)?)
}

/// Images in generator order; every generator exactly once.
pub fn images_for(pres: &Presentation, map: &ImageMap) -> CliResult<Vec<Su2>> {
    if let Some(extra) = map.keys().find(|k| !pres.generators().contains(k)) {
        return Err(CliError::Usage(format!("image given for unknown generator '{extra}'")));
    }
    pres.generators()
        .iter()
        .map(|g| {
            let q = map.get(g).ok_or_else(|| CliError::Usage(format!("missing image for generator '{g}'")))?;
            quaternion(*q)
        })
        .collect()
}

/// Builds the representation, projecting onto exact relator solutions first
/// when `polish` is set.
pub fn build_representation(pres: Arc<Presentation>, map: &ImageMap, tol: f64, polish: bool) -> CliResult<Representation> {
    let images = images_for(&pres, map)?;
    if polish {
        let rough = Representation::approximate(pres, images)?;
        return Ok(rough.polish(tol.min(charvar_core::tol::RELATOR), 100)?);
    }
    Ok(Representation::new(pres, images)?)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationFile {
    pub schema: u32,
    pub presentation: PresentationSpec,
    pub representation: ImageMap,
    /// Curve words for the polarization map.
    #[serde(default)]
    pub curves: Vec<String>,
}

impl RepresentationFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let f: Self = read_json(path)?;
        check_schema(f.schema)?;
        Ok(f)
    }

    pub fn build(&self, tol: f64, polish: bool) -> CliResult<Representation> {
        build_representation(Arc::new(self.presentation.build()?), &self.representation, tol, polish)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub dims: Vec<usize>,
    /// `maps[j]` as a list of rows, `dims[j+1] x dims[j]`.
    pub maps: Vec<Vec<Vec<f64>>>,
}

impl SequenceSpec {
    pub fn build(&self) -> CliResult<MetricSequence> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for (j, rows) in self.maps.iter().enumerate() {
            let (r, c) = (
                self.dims.get(j + 1).copied().unwrap_or(0),
                self.dims.get(j).copied().unwrap_or(0),
            );
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(CliError::Usage(format!("map {} must be {r}x{c}", j + 1)));
            }
            maps.push(Matrix::from_fn(r, c, |i, k| rows[i][k]));
        }
        Ok(MetricSequence::new(self.dims.clone(), maps)?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandleSpec {
    /// Words in `x1..xg` for `a1..ag, b1..bg`.
    pub surface_images: Vec<String>,
    /// Words in the manifold generators for `x1..xg`.
    pub manifold_images: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeegaardSpec {
    pub genus: usize,
    pub handles: [HandleSpec; 2],
}

impl HeegaardSpec {
    pub fn build(&self, manifold: Arc<Presentation>) -> CliResult<HeegaardData> {
        let names = handle_generator_names(self.genus);
        let handle = |h: &HandleSpec| -> CliResult<Handle> {
            Ok(Handle {
                surface_images: h.surface_images.iter().map(|w| Word::parse(w, &names)).collect::<Result<_, _>>()?,
                manifold_images: h.manifold_images.iter().map(|w| manifold.parse_word(w)).collect::<Result<_, _>>()?,
            })
        };
        let handles = [handle(&self.handles[0])?, handle(&self.handles[1])?];
        Ok(HeegaardData::new(self.genus, manifold.clone(), handles)?)
    }
}

/// Either a bare metric sequence, or a representation of a manifold group
/// together with a Heegaard splitting.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionFile {
    pub schema: u32,
    #[serde(default)]
    pub sequence: Option<SequenceSpec>,
    #[serde(default)]
    pub presentation: Option<PresentationSpec>,
    #[serde(default)]
    pub representation: Option<ImageMap>,
    #[serde(default)]
    pub heegaard: Option<HeegaardSpec>,
}

pub enum TorsionInput {
    Sequence(MetricSequence),
    Splitting { rep: Representation, heegaard: HeegaardData },
}

impl TorsionFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let f: Self = read_json(path)?;
        check_schema(f.schema)?;
        Ok(f)
    }

    pub fn build(&self, tol: f64, polish: bool) -> CliResult<TorsionInput> {
        match (&self.sequence, &self.presentation, &self.representation, &self.heegaard) {
            (Some(seq), None, None, None) => Ok(TorsionInput::Sequence(seq.build()?)),
            (None, Some(p), Some(images), Some(h)) => {
                let pres = Arc::new(p.build()?);
                let rep = build_representation(pres.clone(), images, tol, polish)?;
                Ok(TorsionInput::Splitting { rep, heegaard: h.build(pres)? })
            }
            _ => Err(CliError::Usage(
                "torsion input needs either 'sequence' or all of 'presentation', 'representation', 'heegaard'".into(),
            )),
        }
    }
}

fn default_weight() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    #[serde(default)]
    pub id: Option<String>,
    pub representation: ImageMap,
    #[serde(default)]
    pub component_dim: usize,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

/// A user-described manifold: presentation, splitting and candidate points.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldFile {
    pub schema: u32,
    pub presentation: PresentationSpec,
    pub heegaard: HeegaardSpec,
    pub candidates: Vec<CandidateSpec>,
}

impl ManifoldFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let f: Self = read_json(path)?;
        check_schema(f.schema)?;
        Ok(f)
    }

    pub fn build(&self) -> CliResult<(HeegaardData, Vec<Candidate>)> {
        let pres = Arc::new(self.presentation.build()?);
        let heegaard = self.heegaard.build(pres.clone())?;
        let candidates = self
            .candidates
            .iter()
            .map(|c| {
                if !(c.weight.is_finite() && c.weight > 0.0) {
                    return Err(CliError::Usage(format!("candidate weight must be positive, got {}", c.weight)));
                }
                Ok(Candidate {
                    id: c.id.clone(),
                    images: images_for(&pres, &c.representation)?,
                    component_dim: c.component_dim,
                    weight: c.weight,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok((heegaard, candidates))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsEntry {
    /// Point id or formatted trace fingerprint.
    pub point_id: String,
    pub cs: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Versioned<T> {
    schema: u32,
    entries: Vec<T>,
}

/// A bare list, or `{"schema": 1, "entries": [...]}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ListFile<T> {
    Bare(Vec<T>),
    Versioned(Versioned<T>),
}

fn load_list<T: DeserializeOwned>(path: &Path) -> CliResult<Vec<T>> {
    match read_json::<ListFile<T>>(path)? {
        ListFile::Bare(v) => Ok(v),
        ListFile::Versioned(v) => {
            check_schema(v.schema)?;
            Ok(v.entries)
        }
    }
}

pub fn load_cs_table(path: &Path) -> CliResult<Vec<(String, f64)>> {
    let entries: Vec<CsEntry> = load_list(path)?;
    if let Some(bad) = entries.iter().find(|e| !e.cs.is_finite()) {
        return Err(CliError::Usage(format!("non-finite cs for point '{}'", bad.point_id)));
    }
    Ok(entries.into_iter().map(|e| (e.point_id, e.cs)).collect())
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FgEntrySpec {
    pub tau: f64,
    pub spectral_flow: i64,
    pub cs: f64,
}

pub fn load_fg_entries(path: &Path) -> CliResult<Vec<FgEntry>> {
    let entries: Vec<FgEntrySpec> = load_list(path)?;
    Ok(entries.into_iter().map(|e| FgEntry { tau: e.tau, spectral_flow: e.spectral_flow, cs: e.cs }).collect())
}

/// `{"re": .., "im": ..}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<charvar_core::Complex64> for ComplexJson {
    fn from(z: charvar_core::Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

/// `a+bi` with six decimals; values that round to zero print without a sign.
pub fn format_complex(z: charvar_core::Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
    format!("{:.6}{:+.6}i", clean(z.re), clean(z.im))
}
