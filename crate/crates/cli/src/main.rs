//! `qkit`: benchmarks and experiments over the qkit toolkit.
//!
//! Exit codes: 0 on success, 1 for usage or input errors, 2 when the
//! computation itself refuses the request (e.g. a base sharing a factor with
//! the modulus, or a register over the qubit guard).

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qkit_core::sim::MAX_STATEVECTOR_QUBITS;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qkit",
    version,
    about = "Circuit compilation, simulation and mitigation experiments"
)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent. A `<out>.manifest.json` is written beside it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest statevector register allowed.
    #[arg(long, global = true, default_value_t = MAX_STATEVECTOR_QUBITS)]
    pub max_qubits: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gate counts and fidelity of the QFT and approximate QFT as CSV.
    QftBench(QftBenchArgs),
    /// Quantum order finding for x mod N, as a JSON report.
    OrderFind(OrderFindArgs),
    /// Map a circuit onto a coupling map and basis.
    Transpile(TranspileArgs),
    /// Error mitigation and suppression techniques.
    Mitigate {
        #[command(subcommand)]
        technique: Mitigate,
    },
    /// Mirror-circuit survival over a ladder of random layered circuits.
    Mirror(MirrorSweepArgs),
}

#[derive(Args, Debug)]
pub struct QftBenchArgs {
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 13)]
    pub n_max: usize,
    /// Cutoffs: `full`, `default` (⌈log₂ n⌉) or a number. Numbers above n are skipped.
    #[arg(long, value_delimiter = ',', default_value = "full,default")]
    pub cutoffs: Vec<String>,
    /// Random product states per fidelity estimate (n ≤ 12 only).
    #[arg(long, default_value_t = 64)]
    pub trials: usize,
}

#[derive(Args, Debug)]
pub struct OrderFindArgs {
    /// N.
    #[arg(long)]
    pub modulus: u64,
    /// x.
    #[arg(long)]
    pub base: u64,
    /// t; defaults to 2⌈log₂ N⌉ + 1.
    #[arg(long)]
    pub arg_qubits: Option<usize>,
    #[arg(long)]
    pub aqft: bool,
    /// AQFT rotation cutoff m; defaults to ⌈log₂ t⌉.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Apply the inverse transform instead of the forward one.
    #[arg(long)]
    pub inverse: bool,
    #[arg(long, default_value_t = 1024)]
    pub shots: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum LayoutArg {
    Trivial,
    DegreeGreedy,
}

#[derive(Args, Debug)]
pub struct TranspileArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub coupling: PathBuf,
    #[arg(long, default_value = "cx,rz,sx,x")]
    pub basis: String,
    #[arg(long, value_enum, default_value_t = LayoutArg::Trivial)]
    pub layout: LayoutArg,
    /// JSON report with per-stage metrics, layouts and schedule.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Mitigate {
    /// Zero-noise extrapolation of a Z-parity expectation.
    Zne(ZneArgs),
    /// Survival probability of `C · C†`.
    Mirror(MirrorArgs),
    /// Pauli twirling of every CX.
    Twirl(InputArg),
    /// Dynamical decoupling in scheduled idle windows.
    Dd(DdArgs),
}

#[derive(Args, Debug)]
pub struct InputArg {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FitArg {
    Linear,
    Quadratic,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FoldArg {
    Global,
    PerGate,
}

#[derive(Args, Debug)]
pub struct ZneArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Noise model JSON; noiseless when absent.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    #[arg(long, value_delimiter = ',', default_value = "1,3,5")]
    pub scale_factors: Vec<u64>,
    #[arg(long, value_enum, default_value_t = FitArg::Linear)]
    pub fit: FitArg,
    #[arg(long, value_enum, default_value_t = FoldArg::Global)]
    pub fold: FoldArg,
    /// Qubits of the Z-product observable; all qubits when absent.
    #[arg(long, value_delimiter = ',')]
    pub observable: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct MirrorArgs {
    /// Measurement-free base circuit.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub noise: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SequenceArg {
    Xx,
    Xyxy,
}

#[derive(Args, Debug)]
pub struct DdArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = SequenceArg::Xx)]
    pub sequence: SequenceArg,
    /// Shortest idle window filled, in time units.
    #[arg(long, default_value_t = 2)]
    pub min_window: u64,
    /// JSON report listing the inserted pulses.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MirrorSweepArgs {
    #[arg(long, default_value_t = 4)]
    pub qubits: usize,
    /// Layer counts of the random circuits.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub layers: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    /// Noise model JSON; overrides `--p-cx`.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    /// Depolarizing probability per CX.
    #[arg(long, default_value_t = 0.005)]
    pub p_cx: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(&cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
