use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hmf_cli::commands;
use hmf_cli::config::Config;
use hmf_cli::report::{Format, Report};
use hmf_cli::verify::{self, Bounds, Suite};
use hmf_cli::CliError;

/// Invariants of Fermat-type graded hypersurfaces and their categories of
/// matrix factorizations.
#[derive(Parser, Debug)]
#[command(name = "hmf", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// TOML file with node_limit, window and [oracle] max_n / max_entry / max_d.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Everything known about a weight sequence, e.g. `analyze 2,3,5`.
    Analyze { weights: String },
    /// The grading group B_d.
    Group { weights: String },
    /// Minimal ADE and nonpositive partitions.
    Decompose { weights: String },
    /// Gorenstein parameter and the shape of the semi-orthogonal decomposition.
    Sod { weights: String },
    /// Cartan matrix, Coxeter polynomial and Loewy length of A3, D4, E6, ... or
    /// of a tensor product of A-types given as weights.
    Quiver { quiver: String },
    /// Endomorphism algebra of the standard factorizations of x^d.
    Mf { d: i64 },
    /// Orbit identity for x^a + y^b under the diagonal grading.
    Orbit {
        #[arg(default_value = "3,3")]
        weights: String,
        #[arg(long)]
        window: Option<i64>,
    },
    /// Run a verification battery.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Sequences (d_0, ..., d_n) with n up to this.
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        max_entry: Option<u64>,
        /// Largest d for x^d.
        #[arg(long)]
        max_d: Option<i64>,
        /// Strands -L..=L.
        #[arg(long)]
        window: Option<i64>,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match &cli.command {
        Command::Analyze { weights } => commands::analyze(&commands::parse_weights(weights)?, &cfg),
        Command::Group { weights } => commands::group(&commands::parse_weights(weights)?),
        Command::Decompose { weights } => commands::decompose(&commands::parse_weights(weights)?, &cfg),
        Command::Sod { weights } => commands::sod(&commands::parse_weights(weights)?),
        Command::Quiver { quiver } => commands::quiver(quiver),
        Command::Mf { d } => commands::mf(*d),
        Command::Orbit { weights, window } => {
            commands::orbit(&commands::parse_weights(weights)?, window.unwrap_or(cfg.window))
        }
        Command::Verify { suite, max_n, max_entry, max_d, window } => {
            verify::run(*suite, Bounds { max_n: *max_n, max_entry: *max_entry, max_d: *max_d, window: *window }, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(if report.passed == Some(false) { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("hmf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
