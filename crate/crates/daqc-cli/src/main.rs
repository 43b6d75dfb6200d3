//! Command-line front end: generate, compile, simulate, sweep, durations,
//! fit and tradeoff subcommands. CSV is the tabular output contract; every
//! subcommand is deterministic under a fixed seed.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use daqc_core::algorithms::{lookup, GenerateParams};
use daqc_core::analysis::{
    fit_duration_power, fit_fidelity_signomial, total_fidelity_tradeoff, tradeoff_fits,
};
use daqc_core::circuit::{Circuit, DurationModel, Paradigm};
use daqc_core::compiler::{compile_target, CompileOptions, Protocol};
use daqc_core::hamiltonian::HamiltonianDoc;
use daqc_core::noise::{calibrate_model, NoiseConfig, NoiseModel};
use daqc_core::report::{
    daqc_duration_slope, duration_of, rows_to_csv, rows_to_json, run_durations, run_sweep,
    ExperimentConfig,
};
use daqc_core::simulator::{simulate_state, simulate_unitary};
use daqc_core::DaqcError;

/// Exit codes: 0 ok, 2 configuration error, 3 compile diagnostic,
/// 4 numerical failure.
const EXIT_CONFIG: u8 = 2;
const EXIT_COMPILE: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

#[derive(Parser)]
#[command(name = "daqc", about = "Digital-analog quantum computation compiler and simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DeviceArgs {
    /// Resource coupling coefficient, MHz.
    #[arg(long, default_value_t = 10.0)]
    gbar_mhz: f64,
    /// Single-qubit gate time, ns.
    #[arg(long, default_value_t = 5.0)]
    sqg_ns: f64,
    /// Two-qubit gate time, ns.
    #[arg(long, default_value_t = 50.0)]
    tqg_ns: f64,
}

impl DeviceArgs {
    fn params(&self) -> GenerateParams {
        GenerateParams {
            gbar: daqc_core::hamiltonian::mhz_to_rad_per_s(self.gbar_mhz),
            sqg_time_s: self.sqg_ns * 1e-9,
        }
    }
    fn duration_model(&self) -> DurationModel {
        DurationModel {
            sqg_time_s: self.sqg_ns * 1e-9,
            tqg_time_s: self.tqg_ns * 1e-9,
            rz_virtual: true,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit an algorithm circuit as JSON.
    Generate {
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "dqc")]
        paradigm: String,
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print a wire diagram to stderr.
        #[arg(long)]
        diagram: bool,
    },
    /// Compile a target Hamiltonian JSON against a resource Hamiltonian JSON.
    Compile {
        /// Resource Hamiltonian document (role "resource").
        #[arg(long)]
        resource: PathBuf,
        /// Target Hamiltonian document.
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value = "general")]
        protocol: String,
        #[arg(long, default_value = "sdaqc")]
        paradigm: String,
        /// Target evolution time, seconds.
        #[arg(long)]
        tf: f64,
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a circuit JSON: ideal unitary/state or a noisy Monte-Carlo mean.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        /// Noise configuration JSON; omit for an ideal run.
        #[arg(long)]
        noise: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report state fidelity instead of average unitary fidelity.
        #[arg(long)]
        state: bool,
        /// Dump the ideal operator/state to this JSON file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Monte-Carlo fidelity sweep over N and paradigms; emits CSV.
    Sweep {
        /// Experiment configuration JSON; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        algorithm: Option<String>,
        /// Qubit range, e.g. 2..8 (inclusive).
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        paradigms: Option<String>,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Mirror the CSV structurally as JSON.
        #[arg(long)]
        json: bool,
        /// Noise configuration JSON; defaults to the standard calibrated model.
        #[arg(long)]
        noise: Option<PathBuf>,
    },
    /// Scheduling-only duration sweep (no simulation); emits CSV.
    Durations {
        /// Experiment configuration JSON; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        algorithm: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        paradigms: Option<String>,
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Fit a duration or fidelity series from a sweep CSV.
    Fit {
        /// CSV produced by `sweep` or `durations`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        paradigm: String,
        /// "duration" (a·N^b + c) or "fidelity" (f^{a·N^b} + c).
        #[arg(long, default_value = "duration")]
        form: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Control-vs-decoherence trade-off study; emits CSV and crossovers.
    Tradeoff {
        /// T1 values, microseconds (comma-separated).
        #[arg(long, default_value = "50,500")]
        t1_us: String,
        /// TQG times, nanoseconds (comma-separated).
        #[arg(long, default_value = "50,150,300")]
        t_tqg_ns: String,
        #[arg(long, default_value = "3")]
        n_min: usize,
        #[arg(long, default_value = "30")]
        n_max: usize,
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &DaqcError) -> u8 {
    match e {
        DaqcError::InvalidInput(_) | DaqcError::ConnectivityMismatch => EXIT_CONFIG,
        DaqcError::SingularSignMatrix { .. }
        | DaqcError::NegativeBangedTime { .. }
        | DaqcError::NegativeBlockTime { .. }
        | DaqcError::TooFewBlocksForBang { .. }
        | DaqcError::UnsupportedProtocol(_) => EXIT_COMPILE,
        DaqcError::DimensionCap { .. }
        | DaqcError::DimensionMismatch { .. }
        | DaqcError::NoConvergence(_) => EXIT_NUMERIC,
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), DaqcError> {
    let parts: Vec<&str> = s.split("..").collect();
    let bad = || DaqcError::InvalidInput(format!("bad range '{s}', expected e.g. 2..8"));
    match parts.as_slice() {
        [one] => {
            let n = one.parse().map_err(|_| bad())?;
            Ok((n, n))
        }
        [a, b] => Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn parse_paradigms(s: &str) -> Result<Vec<Paradigm>, DaqcError> {
    s.split(',').map(|p| Paradigm::from_str(p.trim())).collect()
}

fn parse_list(s: &str) -> Result<Vec<f64>, DaqcError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| DaqcError::InvalidInput(format!("bad number '{x}'")))
        })
        .collect()
}

fn write_out(path: &Option<PathBuf>, contents: &str) -> Result<(), DaqcError> {
    match path {
        Some(p) => fs::write(p, contents)
            .map_err(|e| DaqcError::InvalidInput(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, DaqcError> {
    fs::read_to_string(path)
        .map_err(|e| DaqcError::InvalidInput(format!("reading {}: {e}", path.display())))
}

fn calibrated_model(noise_path: &Option<PathBuf>, seed: u64, trials: usize) -> Result<NoiseModel, DaqcError> {
    let mut config: NoiseConfig = match noise_path {
        Some(p) => serde_json::from_str(&read_file(p)?)
            .map_err(|e| DaqcError::InvalidInput(format!("noise config: {e}")))?,
        None => NoiseConfig::default(),
    };
    if noise_path.is_none() {
        config.seed = seed;
    }
    calibrate_model(&config, trials)
}

/// Build an experiment configuration from an optional JSON file plus
/// command-line overrides.
fn load_config(
    path: &Option<PathBuf>,
    algorithm: &Option<String>,
    n: &Option<String>,
    paradigms: &Option<String>,
    device: &DeviceArgs,
) -> Result<ExperimentConfig, DaqcError> {
    let mut config = match path {
        Some(p) => serde_json::from_str(&read_file(p)?)
            .map_err(|e| DaqcError::InvalidInput(format!("config: {e}")))?,
        None => {
            let algorithm = algorithm.as_deref().ok_or_else(|| {
                DaqcError::InvalidInput("--algorithm (or --config) is required".into())
            })?;
            let n = n.as_deref().ok_or_else(|| {
                DaqcError::InvalidInput("--n (or --config) is required".into())
            })?;
            let (n_min, n_max) = parse_range(n)?;
            ExperimentConfig::new(
                algorithm,
                parse_paradigms(paradigms.as_deref().unwrap_or("dqc,sdaqc"))?,
                n_min,
                n_max,
            )
        }
    };
    if path.is_some() {
        if let Some(a) = algorithm {
            config.algorithm = a.clone();
        }
        if let Some(n) = n {
            let (n_min, n_max) = parse_range(n)?;
            config.n_min = n_min;
            config.n_max = n_max;
        }
        if let Some(p) = paradigms {
            config.paradigms = parse_paradigms(p)?;
        }
    }
    config.gbar_mhz = device.gbar_mhz;
    config.sqg_time_ns = device.sqg_ns;
    config.tqg_time_ns = device.tqg_ns;
    Ok(config)
}

fn run(cli: Cli) -> Result<(), DaqcError> {
    match cli.command {
        Command::Generate { algorithm, n, paradigm, device, out, diagram } => {
            let alg = lookup(&algorithm)?;
            let circuit = alg.generate(n, Paradigm::from_str(&paradigm)?, &device.params())?;
            if diagram {
                eprintln!("{}", circuit.diagram());
            }
            write_out(&out, &circuit.to_json())
        }
        Command::Compile { resource, target, protocol, paradigm, tf, device, out } => {
            let res_doc: HamiltonianDoc = serde_json::from_str(&read_file(&resource)?)
                .map_err(|e| DaqcError::InvalidInput(format!("resource: {e}")))?;
            let tgt_doc: HamiltonianDoc = serde_json::from_str(&read_file(&target)?)
                .map_err(|e| DaqcError::InvalidInput(format!("target: {e}")))?;
            let res = res_doc.into_hamiltonian()?;
            let tgt = tgt_doc.into_hamiltonian()?;
            let mut options =
                CompileOptions::new(Protocol::from_str(&protocol)?, Paradigm::from_str(&paradigm)?);
            options.sqg_time_s = device.sqg_ns * 1e-9;
            let (circuit, diags) = compile_target(&tgt, &res, tf, &options)?;
            eprintln!(
                "diagnostics: negative_times={} dropped_zero_blocks={} x_pre_peephole={}",
                diags.negative_times, diags.dropped_zero_blocks, diags.x_count_pre_peephole
            );
            write_out(&out, &circuit.to_json())
        }
        Command::Simulate { circuit, noise, iterations, seed, state, dump } => {
            let c = Circuit::from_json(&read_file(&circuit)?)?;
            if let Some(noise) = noise {
                let model = calibrated_model(&Some(noise), seed, 10_000)?;
                let kind = if state {
                    daqc_core::algorithms::FidelityKind::State
                } else {
                    daqc_core::algorithms::FidelityKind::Unitary
                };
                let mc = daqc_core::analysis::run_monte_carlo(&c, kind, &model, iterations)?;
                println!(
                    "mean_fidelity={:.12} std_err={:.6e} iterations={}",
                    mc.mean_fidelity, mc.std_err, mc.iterations
                );
                return Ok(());
            }
            if state {
                let v = simulate_state(&c)?;
                let dumped: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
                let text = serde_json::to_string(&dumped).unwrap();
                if let Some(d) = dump {
                    fs::write(&d, &text)
                        .map_err(|e| DaqcError::InvalidInput(format!("writing dump: {e}")))?;
                } else {
                    println!("{text}");
                }
            } else {
                let u = simulate_unitary(&c)?;
                println!("unitarity_defect={:.3e} dim={}", u.unitarity_defect(), u.dim);
                if let Some(d) = dump {
                    let dumped: Vec<Vec<[f64; 2]>> = (0..u.dim)
                        .map(|i| (0..u.dim).map(|j| [u.get(i, j).re, u.get(i, j).im]).collect())
                        .collect();
                    fs::write(&d, serde_json::to_string(&dumped).unwrap())
                        .map_err(|e| DaqcError::InvalidInput(format!("writing dump: {e}")))?;
                }
            }
            Ok(())
        }
        Command::Sweep { config, algorithm, n, paradigms, iterations, seed, device, out, json, noise } => {
            let mut config =
                load_config(&config, &algorithm, &n, &paradigms, &device)?;
            if let Some(iterations) = iterations {
                config.iterations = iterations;
            }
            config.noise.seed = seed;
            let model = calibrated_model(&noise, seed, config.calibration_trials)?;
            let rows = run_sweep(&config, &model)?;
            let text = if json { rows_to_json(&rows) } else { rows_to_csv(&rows) };
            write_out(&out, &text)
        }
        Command::Durations { config, algorithm, n, paradigms, device, out, json } => {
            let config = load_config(&config, &algorithm, &n, &paradigms, &device)?;
            let rows = run_durations(&config)?;
            let text = if json { rows_to_json(&rows) } else { rows_to_csv(&rows) };
            write_out(&out, &text)
        }
        Command::Fit { input, algorithm, paradigm, form, out } => {
            let text = read_file(&input)?;
            let paradigm = Paradigm::from_str(&paradigm)?;
            let mut ns = Vec::new();
            let mut fids = Vec::new();
            let mut durs = Vec::new();
            for line in text.lines().skip(1) {
                let cols: Vec<&str> = line.split(',').collect();
                if cols.len() < 9 || cols[0] != algorithm || cols[1] != paradigm.as_str() {
                    continue;
                }
                if let (Ok(n), Ok(d)) = (cols[2].parse::<f64>(), cols[5].parse::<f64>()) {
                    ns.push(n);
                    durs.push(d);
                    fids.push(cols[3].parse::<f64>().unwrap_or(f64::NAN));
                }
            }
            let result = match form.as_str() {
                "duration" => {
                    let fit = fit_duration_power(&ns, &durs)?;
                    serde_json::json!({
                        "form": "duration",
                        "amplitude": fit.amplitude,
                        "exponent": fit.exponent,
                        "offset": fit.offset,
                        "residual": fit.residual,
                        "points": ns.len(),
                    })
                }
                "fidelity" => {
                    if fids.iter().any(|f| f.is_nan()) {
                        return Err(DaqcError::InvalidInput(
                            "fidelity fit needs a sweep CSV with mean_fidelity values".into(),
                        ));
                    }
                    let fit = fit_fidelity_signomial(&ns, &fids, 0.999)?;
                    serde_json::json!({
                        "form": "fidelity",
                        "f": fit.f, "a": fit.a, "b": fit.b, "c": fit.c,
                        "residual": fit.residual,
                        "points": ns.len(),
                    })
                }
                other => {
                    return Err(DaqcError::InvalidInput(format!("unknown fit form '{other}'")))
                }
            };
            write_out(&out, &format!("{}\n", serde_json::to_string_pretty(&result).unwrap()))
        }
        Command::Tradeoff { t1_us, t_tqg_ns, n_min, n_max, device, out } => {
            let alg = lookup("star-qft")?;
            let params = device.params();
            let base_dm = device.duration_model();
            // O(N) model for the digital-analog side, fit in the asymptotic range
            let slope = daqc_duration_slope(alg, 25..=50, &params, &base_dm)?;
            let ns: Vec<usize> = (n_min..=n_max).collect();
            let mut text = String::from(
                "t1_us,t_tqg_ns,n,f_total_dqc,f_total_sdaqc,f_total_bdaqc\n",
            );
            let mut summary = String::from("crossovers (smallest N where DAQC exceeds DQC):\n");
            for &t1 in &parse_list(&t1_us)? {
                for &tqg in &parse_list(&t_tqg_ns)? {
                    let mut dm = base_dm;
                    dm.tqg_time_s = tqg * 1e-9;
                    let dqc_durations: std::collections::HashMap<usize, f64> = ns
                        .iter()
                        .map(|&n| {
                            (n, duration_of(alg, Paradigm::Dqc, n, &params, &dm).unwrap_or(f64::NAN))
                        })
                        .collect();
                    let durations = |n: usize| (dqc_durations[&n], slope * n as f64);
                    let fits = (&tradeoff_fits::DQC, &tradeoff_fits::SDAQC, &tradeoff_fits::BDAQC);
                    let res = total_fidelity_tradeoff(fits, &ns, &durations, Some(t1 * 1e-6));
                    for p in &res.points {
                        text.push_str(&format!(
                            "{},{},{},{:.9},{:.9},{:.9}\n",
                            t1, tqg, p.n, p.f_dqc, p.f_sdaqc, p.f_bdaqc
                        ));
                    }
                    summary.push_str(&format!(
                        "  T1={t1}us t_TQG={tqg}ns: daqc={:?} sdaqc={:?} bdaqc={:?}\n",
                        res.crossover_daqc, res.crossover_sdaqc, res.crossover_bdaqc
                    ));
                }
            }
            eprint!("{summary}");
            write_out(&out, &text)
        }
    }
}
