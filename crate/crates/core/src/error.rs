use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Domain errors. Every variant names the invariant that failed.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A quaternion with zero or non-finite norm cannot be normalized.
    DegenerateQuaternion,
    /// `log` is undefined at `-1`.
    LogBranchCut,
    GeneratorOutOfRange { index: usize, generators: usize },
    InvalidPresentation(String),
    ParseWord(String),
    ImageCount { expected: usize, found: usize },
    RelatorResidual { residual: f64, tolerance: f64 },
    /// Newton polish did not bring the residual under tolerance.
    PolishFailed { residual: f64 },
    NotACocycle { residual: f64 },
    /// Coefficient splitting requires a one-dimensional stabilizer.
    NoCanonicalSplitting { h0: usize },
    /// Numeric rank and algebraic axis tests disagree.
    StratumConflict { numeric: usize, algebraic: usize },
    /// The smallest relevant singular value is too close to the threshold.
    BoundaryAmbiguous { sigma: f64 },
    /// A stratum tangent dimension disagrees with the expected `0, g, 3g - 3`.
    TangentDimension { stratum: u8, computed: usize, expected: usize },
    RejectionBudget { attempts: usize },
    NotSurface,
    NotFree,
    ShapeMismatch(String),
    NotExact { position: usize, residual: f64 },
    InvalidHeegaard(String),
    UnmatchedPoint(String),
    /// Assembly refuses points failing stratified clean intersection.
    NotClean { point: String, tangent: usize, cohomology: usize },
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateQuaternion => write!(f, "quaternion has zero or non-finite norm"),
            Error::LogBranchCut => write!(f, "log is undefined at the antipode -1"),
            Error::GeneratorOutOfRange { index, generators } => {
                write!(f, "generator index {index} out of range (presentation has {generators})")
            }
            Error::InvalidPresentation(msg) => write!(f, "invalid presentation: {msg}"),
            Error::ParseWord(msg) => write!(f, "cannot parse word: {msg}"),
            Error::ImageCount { expected, found } => {
                write!(f, "representation needs {expected} images, found {found}")
            }
            Error::RelatorResidual { residual, tolerance } => {
                write!(f, "relator residual {residual:e} exceeds tolerance {tolerance:e}")
            }
            Error::PolishFailed { residual } => {
                write!(f, "projection onto relator solutions stalled at residual {residual:e}")
            }
            Error::NotACocycle { residual } => write!(f, "not a cocycle: |d1 u| = {residual:e}"),
            Error::NoCanonicalSplitting { h0 } => {
                write!(f, "coefficient splitting needs a 1-dimensional stabilizer, found h0 = {h0}")
            }
            Error::StratumConflict { numeric, algebraic } => write!(
                f,
                "stabilizer dimension conflict: singular values give {numeric}, axis test gives {algebraic}"
            ),
            Error::BoundaryAmbiguous { sigma } => {
                write!(f, "boundary-ambiguous stratum: singular value {sigma:e} is near the threshold")
            }
            Error::TangentDimension { stratum, computed, expected } => write!(
                f,
                "stratum {stratum} tangent dimension {computed} differs from expected {expected}"
            ),
            Error::RejectionBudget { attempts } => {
                write!(f, "sampler rejected {attempts} candidates in a row")
            }
            Error::NotSurface => write!(f, "operation requires a surface-group presentation"),
            Error::NotFree => write!(f, "operation requires a free-group presentation"),
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::NotExact { position, residual } => {
                write!(f, "sequence not exact at position {position} (residual {residual:e})")
            }
            Error::InvalidHeegaard(msg) => write!(f, "invalid Heegaard data: {msg}"),
            Error::UnmatchedPoint(id) => write!(f, "no Chern-Simons value supplied for point {id}"),
            Error::NotClean { point, tangent, cohomology } => write!(
                f,
                "point {point} fails stratified clean intersection: tangent dim {tangent} vs H^1 dim {cohomology}"
            ),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
