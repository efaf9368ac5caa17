use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::commands::{self, CoefficientArg, ExampleArg, InvariantArgs};
use crate::report::{envelope, render};
use crate::{CliError, OutputFormat, RunConfig, EXIT_DOMAIN, EXIT_INPUT, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "charvar", version, about = "Strata, cohomology, torsion and invariant sums for SU(2) character varieties")]
pub struct Cli {
    /// Rank threshold for singular values.
    #[arg(long = "tol", global = true, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stratum label of one representation.
    Classify {
        input: PathBuf,
        /// Project onto exact relator solutions before classifying.
        #[arg(long)]
        polish: bool,
    },
    /// Dimensions of H^0 and H^1 with adjoint coefficients.
    Cohomology {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = CoefficientArg::Full)]
        coefficients: CoefficientArg,
        #[arg(long)]
        polish: bool,
    },
    /// Haar census of Hom(F_g, SU(2)) with dimension audits.
    StrataScan {
        #[arg(long)]
        genus: usize,
    },
    /// Antisymmetry, rank and isotropy audit of the surface form.
    SymplecticCheck {
        #[arg(long)]
        genus: usize,
    },
    /// Torsion of a metric exact sequence or of a Heegaard-split flat connection.
    Torsion {
        input: PathBuf,
        #[arg(long)]
        polish: bool,
    },
    /// Stratified invariant sum over the flat connections of an example manifold.
    Invariant {
        #[arg(long, value_enum)]
        example: ExampleArg,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        cs_table: Option<PathBuf>,
        /// Grid size for positive-dimensional components.
        #[arg(long, default_value_t = 8)]
        resolution: usize,
        /// Manifold description for `--example custom`.
        manifold: Option<PathBuf>,
    },
    /// Stationary-phase sum from a list of (tau, spectral flow, cs) entries.
    FgSum {
        #[arg(long)]
        entries: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Cohomology { .. } => "cohomology",
            Command::StrataScan { .. } => "strata-scan",
            Command::SymplecticCheck { .. } => "symplectic-check",
            Command::Torsion { .. } => "torsion",
            Command::Invariant { .. } => "invariant",
            Command::FgSum { .. } => "fg-sum",
        }
    }
}

/// Exit code with the text destined for standard output and standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: &CliError) -> Self {
        Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text },
            };
        }
    };
    let config = RunConfig { tolerance: cli.tolerance, seed: cli.seed, samples: cli.samples, output_format: cli.format };
    match execute(&cli.command, &config) {
        Ok((body, passed)) => match envelope(cli.command.name(), &body, &config) {
            Ok(report) => {
                let stdout = render(&report, config.output_format);
                if passed {
                    Outcome { code: EXIT_OK, stdout, stderr: String::new() }
                } else {
                    let stderr = format!("error: {} audit failed\n", cli.command.name());
                    Outcome { code: EXIT_DOMAIN, stdout, stderr }
                }
            }
            Err(e) => Outcome::error(&e),
        },
        Err(e) => Outcome::error(&e),
    }
}

fn execute(command: &Command, cfg: &RunConfig) -> Result<(serde_json::Value, bool), CliError> {
    cfg.validate()?;
    let ok = |v| Ok((v, true));
    match command {
        Command::Classify { input, polish } => ok(commands::classify(input, *polish, cfg)?),
        Command::Cohomology { input, coefficients, polish } => {
            ok(commands::cohomology(input, *coefficients, *polish, cfg)?)
        }
        Command::StrataScan { genus } => ok(commands::strata_scan_cmd(*genus, cfg)?),
        Command::SymplecticCheck { genus } => commands::symplectic_check_cmd(*genus, cfg),
        Command::Torsion { input, polish } => ok(commands::torsion(input, *polish, cfg)?),
        Command::Invariant { example, p, q, k, cs_table, resolution, manifold } => {
            let args = InvariantArgs {
                example: *example,
                p: *p,
                q: *q,
                k: *k,
                cs_table: cs_table.as_deref(),
                resolution: *resolution,
                manifold: manifold.as_deref(),
            };
            ok(commands::invariant(&args, cfg)?)
        }
        Command::FgSum { entries, k } => ok(commands::fg_sum(entries, *k)?),
    }
}
