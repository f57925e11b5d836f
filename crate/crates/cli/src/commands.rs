use std::io::Write;
use std::path::Path;

use serde::Serialize;

use qkit_core::fourier::{self, AqftConfig, Cutoff};
use qkit_core::mitigation::{self as mit, DdSequence, Extrapolator, FoldMode, ZneConfig};
use qkit_core::order::{self, OrderError, OrderFindingConfig, Transform};
use qkit_core::sim::{NoiseModel, SimError};
use qkit_core::text::{parse_circuit, render_circuit};
use qkit_core::transpiler::{self as tp, BasisGateSet, CouplingMap, LayoutStrategy};
use qkit_core::{Circuit, GateKind};

use crate::manifest::RunManifest;
use crate::*;

pub fn run(cli: &Cli, argv: Vec<String>) -> Result<(), CliError> {
    let mut manifest = RunManifest::start(argv, cli.seed);
    if let Some(out) = &cli.out {
        manifest.add_output(out);
    }
    match &cli.command {
        Command::QftBench(args) => qft_bench(cli, args, manifest),
        Command::OrderFind(args) => order_find(cli, args, manifest),
        Command::Transpile(args) => transpile(cli, args, manifest),
        Command::Mitigate { technique } => match technique {
            Mitigate::Zne(args) => zne(cli, args, manifest),
            Mitigate::Mirror(args) => mirror(cli, args, manifest),
            Mitigate::Twirl(args) => twirl(cli, args, manifest),
            Mitigate::Dd(args) => dd(cli, args, manifest),
        },
        Command::Mirror(args) => mirror_sweep(cli, args, manifest),
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// Writes `text` to `--out` (plus the manifest sidecar) or to stdout.
fn emit(cli: &Cli, text: &str, manifest: RunManifest) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            write_file(path, text)?;
            manifest.finish(path)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Input(format!("stdout: {e}")))?;
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn read_circuit(manifest: &mut RunManifest, path: &Path) -> Result<Circuit, CliError> {
    let text = manifest.read_input(path)?;
    parse_circuit(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_noise(manifest: &mut RunManifest, path: Option<&Path>) -> Result<NoiseModel, CliError> {
    match path {
        None => Ok(NoiseModel::noiseless()),
        Some(p) => {
            let text = manifest.read_input(p)?;
            NoiseModel::from_json(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        }
    }
}

fn sim_error(e: SimError) -> CliError {
    match e {
        SimError::InvalidNoise(_) => CliError::Input(e.to_string()),
        _ => domain(e),
    }
}

const QFT_HEADER: &str = "n,m,hadamards,rotations,swaps,recursive_calls,fidelity\n";

fn qft_bench(cli: &Cli, args: &QftBenchArgs, manifest: RunManifest) -> Result<(), CliError> {
    let mut csv = format!(
        "# manifest_digest {}\n{QFT_HEADER}",
        manifest.stable_digest()
    );
    for n in args.n_min.max(1)..=args.n_max {
        for spec in &args.cutoffs {
            let cutoff = match spec.as_str() {
                "full" => Cutoff::Full,
                "default" => Cutoff::Index(fourier::default_cutoff(n)),
                other => Cutoff::Index(
                    other
                        .parse()
                        .map_err(|_| CliError::Input(format!("invalid cutoff `{other}`")))?,
                ),
            };
            if matches!(cutoff, Cutoff::Index(m) if m > n || m == 0) {
                continue;
            }
            let (_, report) = fourier::build_aqft(&AqftConfig { n, cutoff }).map_err(domain)?;
            let fidelity = if n <= fourier::MAX_FIDELITY_QUBITS {
                fourier::aqft_fidelity(n, cutoff, args.trials, cli.seed)
                    .map_err(domain)?
                    .to_string()
            } else {
                String::new()
            };
            csv.push_str(&format!(
                "{n},{cutoff},{},{},{},{},{fidelity}\n",
                report.hadamard_count,
                report.rotation_count,
                report.swap_count,
                report.recursive_calls
            ));
        }
    }
    emit(cli, &csv, manifest)
}

#[derive(Serialize)]
struct OrderReport<'a> {
    manifest_digest: String,
    modulus: u64,
    base: u64,
    arg_qubits: usize,
    function_qubits: usize,
    total_qubits: usize,
    transform: Transform,
    use_aqft: bool,
    cutoff: Option<usize>,
    shots: u64,
    seed: u64,
    order_verified: bool,
    #[serde(flatten)]
    result: &'a order::OrderResult,
}

fn order_find(cli: &Cli, args: &OrderFindArgs, manifest: RunManifest) -> Result<(), CliError> {
    let mut cfg = OrderFindingConfig::new(args.modulus, args.base);
    if let Some(t) = args.arg_qubits {
        cfg.arg_qubits = t;
    }
    cfg.use_aqft = args.aqft || args.cutoff.is_some();
    cfg.cutoff = args.cutoff;
    cfg.transform = if args.inverse {
        Transform::Inverse
    } else {
        Transform::Forward
    };
    cfg.shots = args.shots;
    cfg.seed = cli.seed;
    cfg.max_qubits = cli.max_qubits;

    let result = order::find_order(&cfg).map_err(|e| match e {
        OrderError::NotCoprime { base, modulus, gcd } => CliError::Domain(format!(
            "gcd({base}, {modulus}) = {gcd}: {gcd} is a nontrivial factor of {modulus}, found classically"
        )),
        OrderError::InvalidModulus(_) | OrderError::InvalidBase { .. } | OrderError::ZeroShots => {
            CliError::Input(e.to_string())
        }
        other => domain(other),
    })?;
    let report = OrderReport {
        manifest_digest: manifest.stable_digest(),
        modulus: cfg.modulus,
        base: cfg.base,
        arg_qubits: cfg.arg_qubits,
        function_qubits: cfg.function_qubits(),
        total_qubits: cfg.total_qubits(),
        transform: cfg.transform,
        use_aqft: cfg.use_aqft,
        cutoff: match cfg.transform_config().cutoff {
            Cutoff::Full => None,
            Cutoff::Index(m) => Some(m),
        },
        shots: cfg.shots,
        seed: cfg.seed,
        order_verified: result
            .order
            .is_some_and(|r| order::pow_mod(cfg.base, r, cfg.modulus) == 1),
        result: &result,
    };
    emit(cli, &json(&report), manifest)
}

#[derive(Serialize)]
struct TranspileJson<'a> {
    manifest_digest: String,
    basis: Vec<GateKind>,
    layout_strategy: LayoutStrategy,
    #[serde(flatten)]
    report: &'a tp::TranspileReport,
}

fn transpile(cli: &Cli, args: &TranspileArgs, mut manifest: RunManifest) -> Result<(), CliError> {
    let circuit = read_circuit(&mut manifest, &args.input)?;
    let coupling_text = manifest.read_input(&args.coupling)?;
    let coupling = CouplingMap::parse(&coupling_text)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.coupling.display())))?;
    let basis = BasisGateSet::parse(&args.basis).map_err(|e| CliError::Input(e.to_string()))?;
    let strategy = match args.layout {
        LayoutArg::Trivial => LayoutStrategy::Trivial,
        LayoutArg::DegreeGreedy => LayoutStrategy::DegreeGreedy,
    };
    let options = tp::TranspileOptions {
        layout: strategy,
        ..Default::default()
    };
    if let Some(r) = &args.report {
        manifest.add_output(r);
    }
    let (out, report) = tp::transpile(&circuit, &coupling, &basis, &options).map_err(domain)?;
    if let Some(r) = &args.report {
        let body = TranspileJson {
            manifest_digest: manifest.stable_digest(),
            basis: basis.kinds().collect(),
            layout_strategy: strategy,
            report: &report,
        };
        write_file(r, &json(&body))?;
        if cli.out.is_none() {
            manifest.clone().finish(r)?;
        }
    }
    emit(cli, &render_circuit(&out), manifest)
}

#[derive(Serialize)]
struct ZneReport<'a> {
    manifest_digest: String,
    shots: u64,
    seed: u64,
    config: &'a ZneConfig,
    noise: &'a NoiseModel,
    #[serde(flatten)]
    result: &'a mit::ZneResult,
}

fn zne(cli: &Cli, args: &ZneArgs, mut manifest: RunManifest) -> Result<(), CliError> {
    let circuit = read_circuit(&mut manifest, &args.input)?;
    let noise = read_noise(&mut manifest, args.noise.as_deref())?;
    let observable = if args.observable.is_empty() {
        (0..circuit.num_qubits()).collect()
    } else {
        args.observable.clone()
    };
    let config = ZneConfig {
        scale_factors: args.scale_factors.clone(),
        fold_mode: match args.fold {
            FoldArg::Global => FoldMode::Global,
            FoldArg::PerGate => FoldMode::PerGate,
        },
        extrapolator: match args.fit {
            FitArg::Linear => Extrapolator::Linear,
            FitArg::Quadratic => Extrapolator::Quadratic,
        },
        observable,
    };
    config
        .validate()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let result = mit::zne_estimate(&circuit, &config, &noise, args.shots, cli.seed).map_err(
        |e| match e {
            mit::MitigationError::Observable(_) => CliError::Input(e.to_string()),
            mit::MitigationError::Sim(s) => sim_error(s),
            other => domain(other),
        },
    )?;
    let report = ZneReport {
        manifest_digest: manifest.stable_digest(),
        shots: args.shots,
        seed: cli.seed,
        config: &config,
        noise: &noise,
        result: &result,
    };
    emit(cli, &json(&report), manifest)
}

#[derive(Serialize)]
struct MirrorJson<'a> {
    manifest_digest: String,
    noise: &'a NoiseModel,
    #[serde(flatten)]
    report: &'a mit::MirrorReport,
}

fn mirror(cli: &Cli, args: &MirrorArgs, mut manifest: RunManifest) -> Result<(), CliError> {
    let circuit = read_circuit(&mut manifest, &args.input)?;
    let noise = read_noise(&mut manifest, args.noise.as_deref())?;
    let report =
        mit::mirror_benchmark(&circuit, args.shots, cli.seed, Some(&noise)).map_err(domain)?;
    let body = MirrorJson {
        manifest_digest: manifest.stable_digest(),
        noise: &noise,
        report: &report,
    };
    emit(cli, &json(&body), manifest)
}

fn twirl(cli: &Cli, args: &InputArg, mut manifest: RunManifest) -> Result<(), CliError> {
    let circuit = read_circuit(&mut manifest, &args.input)?;
    let out = mit::pauli_twirl(&circuit, cli.seed).map_err(domain)?;
    emit(cli, &render_circuit(&out), manifest)
}

#[derive(Serialize)]
struct DdJson<'a> {
    manifest_digest: String,
    sequence: DdSequence,
    min_window: u64,
    #[serde(flatten)]
    outcome: &'a mit::DdOutcome,
}

fn dd(cli: &Cli, args: &DdArgs, mut manifest: RunManifest) -> Result<(), CliError> {
    let circuit = read_circuit(&mut manifest, &args.input)?;
    let durations = tp::Durations::default();
    let schedule = tp::schedule(&circuit, &durations).map_err(domain)?;
    let sequence = match args.sequence {
        SequenceArg::Xx => DdSequence::Xx,
        SequenceArg::Xyxy => DdSequence::Xyxy,
    };
    let outcome = mit::insert_dd(&circuit, &schedule, args.min_window, sequence, &durations)
        .map_err(domain)?;
    if let Some(r) = &args.report {
        manifest.add_output(r);
        let body = DdJson {
            manifest_digest: manifest.stable_digest(),
            sequence,
            min_window: args.min_window,
            outcome: &outcome,
        };
        write_file(r, &json(&body))?;
    }
    emit(cli, &render_circuit(&outcome.circuit), manifest)
}

#[derive(Serialize)]
struct LadderPoint {
    layers: usize,
    #[serde(flatten)]
    report: mit::MirrorReport,
}

#[derive(Serialize)]
struct LadderReport<'a> {
    manifest_digest: String,
    qubits: usize,
    shots: u64,
    seed: u64,
    noise: &'a NoiseModel,
    points: Vec<LadderPoint>,
    strictly_decreasing: bool,
}

fn mirror_sweep(
    cli: &Cli,
    args: &MirrorSweepArgs,
    mut manifest: RunManifest,
) -> Result<(), CliError> {
    if args.qubits == 0 {
        return Err(CliError::Input("--qubits must be positive".into()));
    }
    let noise = match &args.noise {
        Some(p) => read_noise(&mut manifest, Some(p))?,
        None => NoiseModel::depolarizing(GateKind::CX, args.p_cx)
            .map_err(|e| CliError::Input(e.to_string()))?,
    };
    let mut points = Vec::with_capacity(args.layers.len());
    for &layers in &args.layers {
        let circuit = mit::random_layered_circuit(args.qubits, layers, cli.seed);
        let report =
            mit::mirror_benchmark(&circuit, args.shots, cli.seed, Some(&noise)).map_err(domain)?;
        points.push(LadderPoint { layers, report });
    }
    let strictly_decreasing = points
        .windows(2)
        .all(|w| w[1].report.survival_probability < w[0].report.survival_probability);
    let body = LadderReport {
        manifest_digest: manifest.stable_digest(),
        qubits: args.qubits,
        shots: args.shots,
        seed: cli.seed,
        noise: &noise,
        points,
        strictly_decreasing,
    };
    emit(cli, &json(&body), manifest)
}
