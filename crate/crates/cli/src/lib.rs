//! Document format and command-line driver for the `ionad` engine.

pub mod commands;
pub mod doc;
pub mod error;
pub mod model;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use ionad::Budget;

use commands::{Options, Report};
use error::Status;

#[derive(Debug, Parser)]
#[command(name = "ionad", version, about = "Compute with finite ionads")]
pub struct Cli {
    /// Limit on pre-quotient representatives when computing interiors.
    #[arg(long, global = true, default_value_t = Budget::default().fibers)]
    pub budget_fibers: u64,
    /// Limit on incoming morphisms of an object whose sieves are enumerated.
    #[arg(long, global = true, default_value_t = Budget::default().sieve_arrows)]
    pub budget_sieves: usize,
    /// Seed for randomized law probes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random families used by law probes.
    #[arg(long, global = true, default_value_t = 10)]
    pub probes: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and resolve a document.
    Validate { file: PathBuf },
    /// Check that a basis is flat, then probe the comonad laws.
    Flatness { basis: PathBuf },
    /// The interior of a family, with witnesses.
    Interior { ionad: PathBuf, family: PathBuf },
    /// All coalgebra structures on a family.
    OpensEnumerate { ionad: PathBuf, family: PathBuf },
    /// Covering sieves of the generated topology.
    Site { ionad: PathBuf },
    /// Check the sheaf condition for a presheaf on the basis.
    SheafCheck { ionad: PathBuf, presheaf: PathBuf },
    /// The ionad of a space, as a basis document.
    Sigma { space: PathBuf },
    /// The space of opens of an ionad.
    Lambda { ionad: PathBuf },
    /// The Alexandroff ionad of a category, as a basis document.
    Alexandroff { category: PathBuf },
    /// The equivariant ionad of a group action, as a basis document.
    Equivariant { action: PathBuf },
    /// The specialisation category of an ionad.
    SpecCat { ionad: PathBuf },
    /// The category of continuous maps and specialisations between two ionads.
    HomCat { src: PathBuf, dst: PathBuf },
    /// Check that a point map lifts to a continuous map.
    MapCheck { map: PathBuf },
    /// Compose two maps, the first applied first.
    Compose { first: PathBuf, second: PathBuf },
    /// The product of two ionads.
    Product { left: PathBuf, right: PathBuf },
    /// The coproduct of ionads.
    Coproduct {
        #[arg(required = true)]
        summands: Vec<PathBuf>,
    },
    /// The tensor of a category with an ionad.
    Tensor { category: PathBuf, ionad: PathBuf },
    /// The cotensor of an ionad with the arrow category.
    Cotensor { ionad: PathBuf },
    /// A category or a site in DOT format.
    ExportDot { file: PathBuf },
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { Status::InputError } else { Status::Ok };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { status, stdout: String::new(), stderr: text }
            } else {
                Outcome { status, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(&cli) {
        Ok(Report { status, text }) => Outcome {
            status,
            stdout: text,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            status: e.status(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(cli: &Cli) -> error::Result<Report> {
    let opts = Options {
        budget: Budget {
            fibers: cli.budget_fibers,
            sieve_arrows: cli.budget_sieves,
            ..Budget::default()
        },
        seed: cli.seed,
        probes: cli.probes,
    };
    let o = &opts;
    match &cli.command {
        Command::Validate { file } => commands::validate(file, o),
        Command::Flatness { basis } => commands::flatness(basis, o),
        Command::Interior { ionad, family } => commands::interior(ionad, family, o),
        Command::OpensEnumerate { ionad, family } => commands::opens_enumerate(ionad, family, o),
        Command::Site { ionad } => commands::site(ionad, o),
        Command::SheafCheck { ionad, presheaf } => commands::sheaf(ionad, presheaf, o),
        Command::Sigma { space } => commands::sigma(space),
        Command::Lambda { ionad } => commands::lambda_cmd(ionad, o),
        Command::Alexandroff { category } => commands::alexandroff(category),
        Command::Equivariant { action } => commands::equivariant(action),
        Command::SpecCat { ionad } => commands::spec_cat(ionad, o),
        Command::HomCat { src, dst } => commands::hom_cat(src, dst, o),
        Command::MapCheck { map } => commands::map_check(map, o),
        Command::Compose { first, second } => commands::compose_cmd(first, second, o),
        Command::Product { left, right } => commands::product_cmd(left, right, o),
        Command::Coproduct { summands } => commands::coproduct_cmd(summands, o),
        Command::Tensor { category, ionad } => commands::tensor_cmd(category, ionad, o),
        Command::Cotensor { ionad } => commands::cotensor_cmd(ionad, o),
        Command::ExportDot { file } => commands::export_dot(file, o),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn help_and_version_succeed() {
        for flag in ["--help", "--version"] {
            let out = run(["ionad", flag]);
            assert_eq!(out.status, Status::Ok);
            assert!(out.stderr.is_empty() && !out.stdout.is_empty());
        }
    }

    #[test]
    fn argument_errors_are_input_errors() {
        let out = run(["ionad", "coproduct"]);
        assert_eq!(out.status, Status::InputError);
        assert!(out.stdout.is_empty());
    }
}
