mod commands;
mod emit;
mod figures;
mod reference;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::emit::CliError;

#[derive(Parser, Debug)]
#[command(name = "bloch-bohr", version, about = "Bohr radii, Bloch seminorms and coefficient bounds on shifted disks")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Output file (a directory for `tables all`); standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Compare against the embedded reference values and fail on any mismatch.
    #[arg(long, global = true)]
    pub check: bool,
    #[arg(long, global = true, default_value_t = 1e-5)]
    pub tol: f64,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reproduce a radius table (or `all` of them).
    Tables(tables::TablesArgs),
    /// Solve a single radius equation and print the diagnostics as JSON.
    Radius(commands::RadiusArgs),
    /// Evaluate the majorant series of a catalog function at a radius.
    VerifyMajorant(commands::MajorantArgs),
    /// Sample curves for external plotting.
    FigureData(figures::FigureArgs),
    /// Coefficient bounds and the Landau radius.
    Coeffs(commands::CoeffsArgs),
    /// Grid estimate of the Bloch seminorms of a catalog function.
    NormEstimate(commands::NormArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.global.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    if !(cli.global.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", cli.global.tol)));
    }
    let g = &cli.global;
    match cli.command {
        Command::Tables(a) => tables::run(&a, g),
        Command::Radius(a) => commands::radius(&a, g),
        Command::VerifyMajorant(a) => commands::verify_majorant(&a, g),
        Command::FigureData(a) => figures::run(&a, g),
        Command::Coeffs(a) => commands::coeffs(&a, g),
        Command::NormEstimate(a) => commands::norm_estimate(&a, g),
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
