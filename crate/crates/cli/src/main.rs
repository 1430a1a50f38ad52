//! `dirac-abc`: bound states of the planar Dirac oscillator in an
//! Aharonov-Bohm-Coulomb field.
//!
//! All inputs are in natural units (ħ = c = 1).

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "dirac-abc",
    version,
    about = "Dirac oscillator in an Aharonov-Bohm-Coulomb field (natural units, ħ = c = 1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Energies at a fixed oscillator frequency over a range of (n, m_l, s).
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Quantized frequencies and energies of one state.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Sampled normalized radial profile of one state.
    #[command(allow_negative_numbers = true)]
    Wavefunction(WavefunctionArgs),
    /// Sweep one parameter and report E and ω.
    #[command(allow_negative_numbers = true)]
    Scan(ScanArgs),
    /// Check solved states against the finite-difference radial operator.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct PhysArgs {
    /// Rest mass m0
    #[arg(long, default_value_t = 1.0)]
    m0: f64,
    /// Charge magnitude |e|
    #[arg(long)]
    e: Option<f64>,
    /// Coulomb charge number Z
    #[arg(long = "Z", default_value_t = 0.0)]
    z: f64,
    /// Aharonov-Bohm flux Φ_AB
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Homogeneous magnetic field B
    #[arg(long = "B", default_value_t = 0.0)]
    b: f64,
    #[arg(long, value_enum, default_value_t = Convention::Linear)]
    gamma_convention: Convention,
    /// Root-finding tolerance
    #[arg(long, env = "DIRAC_ABC_TOL", default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args, Debug, Clone)]
struct StateArgs {
    /// Radial quantum number (polynomial degree), n ≥ 1
    #[arg(long)]
    n: Option<u32>,
    /// Orbital quantum number m_l (half-integer)
    #[arg(long)]
    ml: Option<f64>,
    /// Spin parameter s = ±1
    #[arg(long)]
    s: Option<i32>,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    phys: PhysArgs,
    /// Oscillator frequency ω
    #[arg(long)]
    omega: Option<f64>,
    /// Set ω = ω_c/2 (the resonance ω̄ = 0)
    #[arg(long)]
    omega_equals_half_cyclotron: bool,
    #[arg(long, default_value_t = 3)]
    n_max: u32,
    /// m_l runs over the half-integers in [−ml_max, ml_max]
    #[arg(long, default_value_t = 2.5)]
    ml_max: f64,
    #[arg(long, value_enum, default_value_t = BranchFilter::Both)]
    branch: BranchFilter,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    phys: PhysArgs,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum, default_value_t = BranchFilter::Both)]
    branch: BranchFilter,
    /// Use the closed forms for n = 1, 2
    #[arg(long)]
    closed_form: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct WavefunctionArgs {
    #[command(flatten)]
    phys: PhysArgs,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum, default_value_t = BranchFilter::Positive)]
    branch: BranchFilter,
    /// Which admissible root, ordered by ω̄
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Upper end of the x grid; defaults to where the profile has decayed
    #[arg(long)]
    x_max: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    phys: PhysArgs,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum)]
    param: ScanParam,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long, default_value_t = 11)]
    steps: usize,
    #[arg(long)]
    closed_form: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    phys: PhysArgs,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum, default_value_t = BranchFilter::Both)]
    branch: BranchFilter,
    /// `solve` CSV to check; `-` reads stdin
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 8000)]
    points: usize,
    #[arg(long, default_value_t = 1e-4)]
    x_min: f64,
    #[arg(long, default_value_t = 12.0)]
    x_max: f64,
    /// Also solve on the halved grid and Richardson-extrapolate
    #[arg(long)]
    refine: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Convention {
    /// γ² = (m_l + |e|Φ)² − Z²|e|⁴
    Linear,
    /// γ² = (m_l² + |e|Φ)² − Z²|e|⁴
    AsPrinted,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum BranchFilter {
    #[value(alias = "+")]
    Positive,
    #[value(alias = "-")]
    Negative,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ScanParam {
    #[value(name = "Z")]
    Z,
    Phi,
    #[value(name = "B")]
    B,
    Ml,
}

/// Failures raised by the front end itself rather than the library.
#[derive(Debug)]
enum CliError {
    Usage(String),
    OracleMismatch(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::OracleMismatch(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    if let Some(e) = err.downcast_ref::<dirac_abc::Error>() {
        let code = match e {
            dirac_abc::Error::InvalidParameter(_)
            | dirac_abc::Error::NegativeEffectiveFrequency(_)
            | dirac_abc::Error::SupercriticalCoupling { .. }
            | dirac_abc::Error::CriticalExponent => 2,
            dirac_abc::Error::NoBoundState(_)
            | dirac_abc::Error::DegenerateCondition(_)
            | dirac_abc::Error::ImaginaryEnergy(_) => 3,
            dirac_abc::Error::GridTooCoarse(_) => 4,
            dirac_abc::Error::SeriesNotConverged { .. }
            | dirac_abc::Error::QuadratureFailure(_) => 5,
        };
        return (e.name(), code);
    }
    match err.downcast_ref::<CliError>() {
        Some(CliError::Usage(_)) => ("InvalidParameter", 2),
        Some(CliError::OracleMismatch(_)) => ("OracleMismatch", 4),
        None => ("Io", 1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(args) => commands::spectrum(&args),
        Command::Solve(args) => commands::solve(&args),
        Command::Wavefunction(args) => commands::wavefunction(&args),
        Command::Scan(args) => commands::scan(&args),
        Command::Verify(args) => commands::verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (name, code) = classify(&err);
            let detail = format!("{err:#}").replace('\n', " ");
            eprintln!("error={name} detail={detail}");
            ExitCode::from(code)
        }
    }
}
