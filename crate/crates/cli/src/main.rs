mod commands;
mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

/// Stable identifier of the JSON document layout.
pub const SCHEMA_VERSION: &str = "1.0.0";

/// Environment variable that caps the worker thread count.
const THREADS_ENV: &str = "ZERNIKE_THREADS";

/// Exact algebra and spectra of the generalized quantum Zernike Hamiltonians.
#[derive(Parser, Debug)]
#[command(name = "zernike", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum Command {
    /// Check the explicit symmetries and the dependence relation.
    Verify(VerifyArgs),
    /// Derive the quadratic-leading symmetries from the graded ansatz.
    Derive(DeriveArgs),
    /// Higgs-type relations, ladder operators and structure function.
    Higgs(OrderArgs),
    /// Solve the finite-representation constraints.
    Spectrum(SpectrumArgs),
    /// Exact triangular matrix of H_N on polynomials.
    Oracle(OracleArgs),
    /// Level tables and bound-state counts of the curved oscillators.
    Oscillator(OscillatorArgs),
    /// CSV data of one of the five spectrum figures.
    Figure(FigureArgs),
    /// Check the factorization and closed-form spectrum conjectures.
    ConjectureCheck(OrderArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Derive(_) => "derive",
            Command::Higgs(_) => "higgs",
            Command::Spectrum(_) => "spectrum",
            Command::Oracle(_) => "oracle",
            Command::Oscillator(_) => "oscillator",
            Command::Figure(_) => "figure",
            Command::ConjectureCheck(_) => "conjecture-check",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
pub struct Output {
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
pub struct OrderArgs {
    /// Order N of the Hamiltonian.
    #[arg(long = "N")]
    pub order: u32,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long = "N")]
    pub order: u32,
    /// Exact γ values (default: symbolic).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub gammas: Vec<String>,
    /// Include the symmetry operators in the report.
    #[arg(long)]
    pub show_operators: bool,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct DeriveArgs {
    #[arg(long = "N")]
    pub order: u32,
    /// Leading momentum term of the symmetry.
    #[arg(long, value_enum, default_value_t = LeadingArg::Both)]
    pub leading: LeadingArg,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LeadingArg {
    P1,
    P2,
    Both,
}

#[derive(Args, Debug, Serialize)]
pub struct SpectrumArgs {
    #[arg(long = "N")]
    pub order: u32,
    /// Exact γ values; omit with --symbolic to keep them free.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub gammas: Vec<String>,
    /// Level range, e.g. `1..10` (inclusive).
    #[arg(long = "n")]
    pub n: Option<String>,
    /// Keep n symbolic and return closed-form families.
    #[arg(long)]
    pub symbolic: bool,
    /// γ indices whose vanishing limit must exist (default: k >= 3).
    #[arg(long, value_delimiter = ',')]
    pub vanish: Vec<u32>,
    /// Allow the one-dimensional representation n = 0.
    #[arg(long)]
    pub allow_ground_state: bool,
    /// Family exported by --format csv.
    #[arg(long, default_value = "I")]
    pub family: String,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct OracleArgs {
    #[arg(long = "N")]
    pub order: u32,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub gammas: Vec<String>,
    #[arg(long, default_value_t = 16)]
    pub max_degree: u32,
    #[arg(long)]
    pub eigenvectors: bool,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct OscillatorArgs {
    /// Curvature κ (integers and fractions are exact, decimals are floats).
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub mu: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub nu: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-2")]
    pub beta: String,
    #[arg(long = "n", default_value = "1..10")]
    pub n: String,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct FigureArgs {
    #[arg(long)]
    pub id: u32,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

impl Command {
    fn output(&self) -> &Output {
        match self {
            Command::Verify(a) => &a.output,
            Command::Derive(a) => &a.output,
            Command::Higgs(a) | Command::ConjectureCheck(a) => &a.output,
            Command::Spectrum(a) => &a.output,
            Command::Oracle(a) => &a.output,
            Command::Oscillator(a) => &a.output,
            Command::Figure(a) => &a.output,
        }
    }
}

/// What a command hands back: the `results` value, an optional CSV body
/// and whether every check passed.
pub struct Outcome {
    pub results: serde_json::Value,
    pub csv: Option<String>,
    pub passed: bool,
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.parse().map_err(|_| anyhow::anyhow!("{THREADS_ENV}={v} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn emit(output: &Output, body: &str) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    configure_threads()?;
    let outcome = match &cli.command {
        Command::Verify(a) => commands::verify(a)?,
        Command::Derive(a) => commands::derive(a)?,
        Command::Higgs(a) => commands::higgs(a)?,
        Command::Spectrum(a) => commands::spectrum(a)?,
        Command::Oracle(a) => commands::oracle(a)?,
        Command::Oscillator(a) => commands::oscillator(a)?,
        Command::Figure(a) => commands::figure(a)?,
        Command::ConjectureCheck(a) => commands::conjecture_check(a)?,
    };
    let output = cli.command.output();
    let body = match output.format {
        Format::Csv => outcome.csv.ok_or_else(|| anyhow::anyhow!("{} has no CSV form", cli.command.name()))?,
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": cli.command.name(),
                "inputs": serde_json::to_value(&cli.command)?,
                "results": outcome.results,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    emit(output, &body)?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": cli.command.name(),
                "error": format!("{err:#}"),
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap_or_default());
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
