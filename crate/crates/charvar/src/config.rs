use serde::Serialize;

use crate::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Table,
}

/// Settings shared by every subcommand; embedded in each report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub tolerance: f64,
    pub seed: u64,
    pub samples: usize,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { tolerance: 1e-8, seed: 0, samples: 100, output_format: OutputFormat::Json }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.tolerance > 0.0 && self.tolerance < 1e-2) {
            return Err(CliError::Usage(format!("--tol must lie in (0, 1e-2), got {}", self.tolerance)));
        }
        if self.samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        Ok(())
    }
}

/// Convention tags attached to every report.
#[derive(Clone, Debug, Serialize)]
pub struct Conventions {
    pub metric: &'static str,
    pub fox_derivative: &'static str,
    pub torsion: &'static str,
    pub symplectic_form: &'static str,
    pub cs_phase: &'static str,
    pub quadrature: &'static str,
}

pub fn conventions() -> Conventions {
    Conventions {
        metric: "su(2) = imaginary quaternions, (i, j, k) orthonormal, <X, Y> = dot product",
        fox_derivative: "left: d(uv) = du + u dv; cocycle u(ab) = u(a) + Ad(a) u(b)",
        torsion: charvar_core::torsion::CONVENTION,
        symplectic_form: "cup product <u(a), Ad(a) v(b)> on the relator 2-chain, unnormalized",
        cs_phase: "exp(2 pi i k cs), cs taken mod 1",
        quadrature: "uniform angle charts, weight = product of step sizes; isolated points weight 1",
    }
}
