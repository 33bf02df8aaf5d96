//! Argument parsing, command dispatch and exit codes.
//!
//! Exit codes: 0 success, 1 a mathematical verdict failed, 2 bad input or
//! usage, 3 internal consistency failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use jmetric_core::algebra::{dimension_table, equivalent_w1_definitions, ModelFiber, MAX_HALF_DIM};
use jmetric_core::classify::{classify, table1_summary, Verdict};
use jmetric_core::connection::{identity_residuals, IdentityResiduals, LocalGeometry};
use jmetric_core::manifold::{catalog as cat, validate_structure};
use jmetric_core::{AEStructureKind, ChartedManifold, Error as CoreError, SamplePlan};
use serde::Serialize;
use thiserror::Error;

use crate::config::{load_manifold, ConfigError};
use crate::report::{
    AlgebraReport, CatalogEntry, CatalogReport, IdentitiesReport, Render, VerifyReport, W1Definitions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "jmetric", version, about = "Checks (J^2 = ±1)-metric manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for sample points and vectors.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of sample points.
    #[arg(long, global = true, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub points: u64,
    /// Number of sampled vector triples per point.
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub vectors: u64,
    /// Verdict tolerance.
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = positive)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in manifolds.
    Catalog,
    /// Check the structure axioms.
    Validate {
        /// Catalog name or path to a JSON config.
        #[arg(long)]
        manifold: String,
    },
    /// Evaluate the class predicates.
    Classify {
        #[arg(long)]
        manifold: String,
        /// Predicates the manifold is claimed to satisfy; exit 1 if any fails.
        #[arg(long, value_enum, value_delimiter = ',')]
        expect: Vec<Predicate>,
    },
    /// Run the theorem checks on one manifold, or the summary table over the
    /// catalog when no manifold is given.
    Verify {
        #[arg(long)]
        manifold: Option<String>,
    },
    /// Dimensions of W, W1 and the Codazzi subspace.
    AlgebraTable,
    /// Residuals of the identities every structure satisfies.
    Identities {
        #[arg(long)]
        manifold: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Predicate {
    Kahler,
    Integrable,
    Nearly,
    Codazzi,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be a positive number".into())
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Verdict(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verdict(_) => EXIT_VERDICT,
            CliError::Io { .. } => EXIT_USAGE,
            CliError::Config(ConfigError::Core(e)) | CliError::Core(e) => core_exit_code(e),
            CliError::Config(_) => EXIT_USAGE,
        }
    }
}

fn core_exit_code(e: &CoreError) -> i32 {
    if e.is_internal() {
        return EXIT_INTERNAL;
    }
    match e {
        CoreError::NearSingularMetric { .. } | CoreError::InvalidStructure { .. } => EXIT_VERDICT,
        _ => EXIT_USAGE,
    }
}

/// A catalog name, or a path to a JSON config when the argument names an
/// existing file or ends in `.json`.
pub fn resolve_manifold(arg: &str) -> Result<ChartedManifold, CliError> {
    let path = Path::new(arg);
    if arg.ends_with(".json") || path.is_file() {
        return Ok(load_manifold(path)?);
    }
    Ok(cat::catalog(arg)?)
}

struct Output {
    text: String,
    json: String,
    /// Set when a verdict failed; the report is still written.
    failure: Option<String>,
}

fn output<T: Serialize + Render>(report: &T, failure: Option<String>) -> Output {
    let mut json = serde_json::to_string_pretty(report).expect("reports serialize");
    json.push('\n');
    Output {
        text: report.render(),
        json,
        failure,
    }
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let plan = SamplePlan::new(cli.seed, cli.points as usize, cli.vectors as usize);
    let tol = cli.tol;
    match &cli.command {
        Command::Catalog => {
            let entries = cat::standard_entries()
                .into_iter()
                .map(|name| {
                    let m = cat::catalog(&name)?;
                    Ok(CatalogEntry {
                        name,
                        kind: m.kind(),
                        dim: m.dim(),
                    })
                })
                .collect::<Result<_, CoreError>>()?;
            Ok(output(&CatalogReport { entries }, None))
        }
        Command::Validate { manifold } => {
            let m = resolve_manifold(manifold)?;
            let report = validate_structure(&m, &plan)?;
            let failure = (!report.valid).then(|| format!("`{}` fails the structure axioms", m.name()));
            Ok(output(&report, failure))
        }
        Command::Classify { manifold, expect } => {
            let m = resolve_manifold(manifold)?;
            let report = classify(&m, &plan, tol)?;
            let v = &report.verdicts;
            let failed: Vec<String> = expect
                .iter()
                .filter(|p| {
                    let verdict = match p {
                        Predicate::Kahler => v.kahler,
                        Predicate::Integrable => v.integrable,
                        Predicate::Nearly => v.nearly,
                        Predicate::Codazzi => v.codazzi,
                    };
                    verdict == Verdict::Fails
                })
                .map(|p| format!("{p:?}").to_lowercase())
                .collect();
            let failure =
                (!failed.is_empty()).then(|| format!("`{}` fails: {}", m.name(), failed.join(", ")));
            Ok(output(&report, failure))
        }
        Command::Verify { manifold: Some(manifold) } => {
            let m = resolve_manifold(manifold)?;
            let report = classify(&m, &plan, tol)?;
            let verify = VerifyReport {
                manifold: report.manifold,
                kind: report.kind,
                seed: report.seed,
                n_points: report.n_points,
                tol,
                checks: report.theorem_checks,
            };
            Ok(output(&verify, None))
        }
        Command::Verify { manifold: None } => Ok(output(&table1_summary(&plan, tol)?, None)),
        Command::AlgebraTable => {
            let dimensions = dimension_table()?;
            let mut w1_definitions = Vec::new();
            for kind in AEStructureKind::ALL {
                for n in 1..=MAX_HALF_DIM {
                    let equivalent = equivalent_w1_definitions(&ModelFiber::standard(kind, n)?)?;
                    w1_definitions.push(W1Definitions { kind, n, equivalent });
                }
            }
            let failure = w1_definitions
                .iter()
                .find(|w| !w.equivalent)
                .map(|w| format!("W1 definitions differ for {} n = {}", w.kind.name(), w.n));
            if let Some(msg) = failure {
                return Err(CoreError::TheoremViolation {
                    theorem: "w1-definitions",
                    detail: msg,
                }
                .into());
            }
            Ok(output(
                &AlgebraReport {
                    dimensions,
                    w1_definitions,
                },
                None,
            ))
        }
        Command::Identities { manifold } => {
            let m = resolve_manifold(manifold)?;
            if !validate_structure(&m, &plan)?.valid {
                return Err(CoreError::InvalidStructure {
                    manifold: m.name().to_string(),
                }
                .into());
            }
            let triples = plan.vector_triples(m.dim());
            let mut residuals = IdentityResiduals::default();
            for p in plan.points(m.domain()) {
                residuals.merge(&identity_residuals(&LocalGeometry::at(&m, &p)?, &triples));
            }
            let holds = residuals.max() < tol;
            let report = IdentitiesReport {
                manifold: m.name().to_string(),
                kind: m.kind(),
                seed: plan.seed,
                n_points: plan.n_points,
                n_vector_triples: plan.n_vector_triples,
                tol,
                residuals,
                holds,
            };
            let out = output(&report, None);
            if !holds {
                // the identities hold for every structure
                return Err(CoreError::TheoremViolation {
                    theorem: "structure-identities",
                    detail: format!("max residual {:e}", report.residuals.max()),
                }
                .into());
            }
            Ok(out)
        }
    }
}

fn write_report(cli: &Cli, out: &Output) -> Result<(), CliError> {
    let body = match cli.format {
        Format::Text => &out.text,
        Format::Json => &out.json,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "standard output".into(),
                    source,
                })
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = execute(&cli).and_then(|out| {
        write_report(&cli, &out)?;
        match out.failure {
            Some(msg) => Err(CliError::Verdict(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("jmetric: {e}");
            e.exit_code()
        }
    }
}
