//! `dbrackets`: exact verification and computation of derived-bracket and
//! homotopy-Lie structures on finite-dimensional graded algebras.
//!
//! Exit codes: 0 = all checks pass; 1 = a verification failure or hypothesis
//! violation; 2 = malformed input.

mod output;
mod run;

use clap::{Args, Parser, Subcommand, ValueEnum};
use derived_brackets::higherops::OrderDefinition;
use output::{CliReport, Outcome};
use run::{ComputeOptions, VerifyOptions};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "dbrackets",
    about = "Exact higher-order operator calculus and derived brackets on graded algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite against an algebra file.
    Verify(VerifyArgs),
    /// Compute a single bracket, tower value, order, or cohomology.
    Compute(ComputeArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// What to verify.
    #[arg(value_enum)]
    subject: VerifySubject,
    /// Path to the JSON algebra file.
    #[arg(long)]
    algebra: String,
    /// Named operator (Delta) where the subject needs one.
    #[arg(long)]
    operator: Option<String>,
    /// Named differential (Q or d) where the subject needs one.
    #[arg(long)]
    differential: Option<String>,
    /// Largest arity checked.
    #[arg(long, default_value_t = 4)]
    max_arity: usize,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Additionally verify this many seeded random operators (equivalence).
    #[arg(long, default_value_t = 0)]
    random_ops: usize,
    /// Write the full JSON report here.
    #[arg(long)]
    json: Option<String>,
}

#[derive(Args)]
struct ComputeArgs {
    /// What to compute.
    #[arg(value_enum)]
    what: ComputeWhat,
    /// Path to the JSON algebra file.
    #[arg(long)]
    algebra: String,
    /// Named operator (Delta).
    #[arg(long)]
    operator: Option<String>,
    /// Named differential (Q).
    #[arg(long)]
    differential: Option<String>,
    /// Comma-separated basis labels used as arguments.
    #[arg(long, value_delimiter = ',')]
    args: Vec<String>,
    /// Search bound for order computation.
    #[arg(long, default_value_t = 5)]
    max: usize,
    /// Which tower defines the order.
    #[arg(long, value_enum, default_value_t = DefinitionArg::Phi)]
    definition: DefinitionArg,
    /// Write the full JSON report here.
    #[arg(long)]
    json: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum VerifySubject {
    Equivalence,
    OrderCalculus,
    DerivedLie,
    Voronov,
    Linfty,
    AinftySymmetrize,
    Hochschild,
    CrossConstruction,
    Cdbt,
}

impl VerifySubject {
    fn name(self) -> &'static str {
        match self {
            VerifySubject::Equivalence => "equivalence",
            VerifySubject::OrderCalculus => "order-calculus",
            VerifySubject::DerivedLie => "derived-lie",
            VerifySubject::Voronov => "voronov",
            VerifySubject::Linfty => "linfty",
            VerifySubject::AinftySymmetrize => "ainfty-symmetrize",
            VerifySubject::Hochschild => "hochschild",
            VerifySubject::CrossConstruction => "cross-construction",
            VerifySubject::Cdbt => "cdbt",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ComputeWhat {
    Gamma,
    Psi,
    Phi,
    UnshuffleSum,
    BBracket,
    CBracket,
    BvBracket,
    Cohomology,
    Order,
}

impl ComputeWhat {
    fn name(self) -> &'static str {
        match self {
            ComputeWhat::Gamma => "gamma",
            ComputeWhat::Psi => "psi",
            ComputeWhat::Phi => "phi",
            ComputeWhat::UnshuffleSum => "unshuffle-sum",
            ComputeWhat::BBracket => "b-bracket",
            ComputeWhat::CBracket => "c-bracket",
            ComputeWhat::BvBracket => "bv-bracket",
            ComputeWhat::Cohomology => "cohomology",
            ComputeWhat::Order => "order",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DefinitionArg {
    Gamma,
    Psi,
    Phi,
}

impl From<DefinitionArg> for OrderDefinition {
    fn from(d: DefinitionArg) -> Self {
        match d {
            DefinitionArg::Gamma => OrderDefinition::Gamma,
            DefinitionArg::Psi => OrderDefinition::Psi,
            DefinitionArg::Phi => OrderDefinition::Phi,
        }
    }
}

fn command_echo() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn emit(report: CliReport, json_path: Option<&str>) -> i32 {
    report.print_human();
    if let Some(path) = json_path {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: cannot write JSON report to {path}: {e}");
            return Outcome::MalformedInput.exit_code();
        }
    }
    report.outcome().exit_code()
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let command = command_echo();
    let code = match cli.command {
        Command::Verify(args) => {
            let subject = args.subject.name();
            let opts = VerifyOptions {
                operator: args.operator.clone(),
                differential: args.differential.clone(),
                max_arity: args.max_arity,
                seed: args.seed,
                random_ops: args.random_ops,
            };
            let result = run::load_algebra(&args.algebra)
                .and_then(|file| run::run_verify(args.subject, &file, &opts));
            let elapsed = started.elapsed().as_millis();
            let report = match result {
                Ok(report) => {
                    let seed = (args.random_ops > 0).then_some(args.seed);
                    CliReport::from_report(command, report, elapsed, seed)
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    CliReport::from_error(command, subject, &err, elapsed)
                }
            };
            emit(report, args.json.as_deref())
        }
        Command::Compute(args) => {
            let what = args.what.name();
            let opts = ComputeOptions {
                operator: args.operator.clone(),
                differential: args.differential.clone(),
                args: args.args.clone(),
                max: args.max,
                definition: args.definition.into(),
            };
            let result = run::load_algebra(&args.algebra)
                .and_then(|file| run::run_compute(args.what, &file, &opts));
            let elapsed = started.elapsed().as_millis();
            let report = match result {
                Ok(report) => CliReport::from_report(command, report, elapsed, None),
                Err(err) => {
                    eprintln!("error: {err}");
                    CliReport::from_error(command, what, &err, elapsed)
                }
            };
            emit(report, args.json.as_deref())
        }
    };
    std::process::exit(code);
}
