//! Command-line front end.
//!
//! Every subcommand accepts `--config <file.toml>` whose keys mirror the long
//! flags (`reuse-force = true`, `qubits = 4`, ...). Flags win over the file.
//! Exit codes: 0 success, 1 usage error, 2 runtime or divergence failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use super::{
    compare, exact_ground_energy, format_summary_table, header_qubits, load_hamiltonian,
    run_experiment, write_summary_csv, ExperimentConfig, RunReport, RunSummary, CHEMICAL_ACCURACY,
};
use crate::ansatz::Ansatz;
use crate::error::Error;
use crate::objective::Objective;
use crate::optimizers::{Method, OptimizerConfig, RunStatus};

pub const DEFAULT_DEPTH: usize = 4;
pub const DEFAULT_ITERS: usize = 40;
pub const DEFAULT_SEED: u64 = 18;
pub const DEFAULT_FD_STEP: f64 = 1e-4;
pub const DEFAULT_GRADCHECK_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_COMPARE: &str = "verlet,lbfgs,heavy_ball,nelder_mead";

#[derive(Debug, Parser)]
#[command(name = "vqe-verlet", version, about = "Velocity-Verlet VQE workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one optimizer and write its convergence CSV.
    Run(RunArgs),
    /// Run several optimizers from the same start point and tabulate them.
    Compare(CompareArgs),
    /// Print the exact ground-state energy of a Hamiltonian file.
    Exact(ExactArgs),
    /// Compare parameter-shift gradients with central finite differences.
    Gradcheck(GradcheckArgs),
}

/// Flags shared by `run` and `compare`.
#[derive(Debug, Default, Clone, Args)]
pub struct ProblemArgs {
    /// Hamiltonian file in the `.ham` text format.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Qubit count (defaults to the file's `# qubits:` header).
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Ansatz depth [default: 4].
    #[arg(long)]
    pub depth: Option<usize>,
    /// Outer-loop iteration budget [default: 40].
    #[arg(long)]
    pub iters: Option<usize>,
    /// Seed of the initial parameters [default: 18].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reference energy in Hartree (defaults to the file's `# reference_energy:` header).
    #[arg(long, allow_negative_numbers = true)]
    pub reference: Option<f64>,
    /// Chemical-accuracy threshold in Hartree [default: 1.6e-3].
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Write zero elapsed times so repeated runs give identical CSVs.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Default, Clone, Args)]
pub struct RunArgs {
    /// TOML file whose keys mirror these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// One of verlet, leapfrog, heavy_ball, lbfgs, nelder_mead.
    #[arg(long)]
    pub optimizer: Option<String>,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub damping: Option<f64>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub momentum: Option<f64>,
    /// Reuse the end-of-step force in the next Verlet step.
    #[arg(long)]
    pub reuse_force: bool,
}

#[derive(Debug, Default, Clone, Args)]
pub struct CompareArgs {
    /// TOML file whose keys mirror these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated optimizer list [default: verlet,lbfgs,heavy_ball,nelder_mead].
    #[arg(long)]
    pub optimizers: Option<String>,
    /// Output directory for per-method CSVs and summary.csv.
    #[arg(long)]
    pub outdir: Option<PathBuf>,
    /// Per-method hyperparameter, e.g. `--set verlet.mass=1.9` (repeatable).
    #[arg(long = "set", value_name = "METHOD.KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Default, Clone, Args)]
pub struct ExactArgs {
    /// TOML file whose keys mirror these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Hamiltonian file in the `.ham` text format.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Qubit count (defaults to the file's `# qubits:` header).
    #[arg(long)]
    pub qubits: Option<usize>,
}

#[derive(Debug, Default, Clone, Args)]
pub struct GradcheckArgs {
    /// TOML file whose keys mirror these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Hamiltonian file in the `.ham` text format.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Qubit count (defaults to the file's `# qubits:` header).
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Finite-difference step [default: 1e-4].
    #[arg(long)]
    pub h: Option<f64>,
    /// Largest accepted per-component discrepancy [default: 1e-6].
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Runtime(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::ParamLength { .. } | Error::TooManyQubits { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

macro_rules! fill {
    ($dst:expr, $src:expr; $($field:ident),* $(,)?) => {
        $( if $dst.$field.is_none() { $dst.$field = $src.$field.clone(); } )*
    };
}

/// Contents of a `--config` TOML file. Keys are the long flag names; keys
/// that a subcommand has no flag for are ignored by it.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub hamiltonian: Option<PathBuf>,
    pub qubits: Option<usize>,
    pub depth: Option<usize>,
    pub iters: Option<usize>,
    pub seed: Option<u64>,
    pub reference: Option<f64>,
    pub threshold: Option<f64>,
    pub no_timing: bool,
    pub optimizer: Option<String>,
    pub out: Option<PathBuf>,
    pub dt: Option<f64>,
    pub mass: Option<f64>,
    pub damping: Option<f64>,
    pub lr: Option<f64>,
    pub momentum: Option<f64>,
    pub reuse_force: bool,
    pub optimizers: Option<String>,
    pub outdir: Option<PathBuf>,
    pub set: Vec<String>,
    pub h: Option<f64>,
    pub tolerance: Option<f64>,
}

impl FileConfig {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    fn load(path: &Option<PathBuf>) -> Result<Option<Self>, CliError> {
        path.as_deref().map(Self::read).transpose()
    }
}

impl ProblemArgs {
    fn fill_from(&mut self, file: &FileConfig) {
        fill!(self, file; hamiltonian, qubits, depth, iters, seed, reference, threshold);
        self.no_timing |= file.no_timing;
    }
}

impl RunArgs {
    /// Fills flags left unset from the `--config` file, if one was given.
    pub fn resolved(mut self) -> Result<Self, CliError> {
        if let Some(file) = FileConfig::load(&self.config)? {
            self.problem.fill_from(&file);
            fill!(self, file; optimizer, out, dt, mass, damping, lr, momentum);
            self.reuse_force |= file.reuse_force;
        }
        Ok(self)
    }
}

impl CompareArgs {
    pub fn resolved(mut self) -> Result<Self, CliError> {
        if let Some(file) = FileConfig::load(&self.config)? {
            self.problem.fill_from(&file);
            fill!(self, file; optimizers, outdir);
            // File settings first so flags applied later override them.
            let mut set = file.set;
            set.append(&mut self.set);
            self.set = set;
        }
        Ok(self)
    }
}

impl ExactArgs {
    pub fn resolved(mut self) -> Result<Self, CliError> {
        if let Some(file) = FileConfig::load(&self.config)? {
            fill!(self, file; hamiltonian, qubits);
        }
        Ok(self)
    }
}

impl GradcheckArgs {
    pub fn resolved(mut self) -> Result<Self, CliError> {
        if let Some(file) = FileConfig::load(&self.config)? {
            fill!(self, file; hamiltonian, qubits, depth, seed, h, tolerance);
        }
        Ok(self)
    }
}

fn hamiltonian_and_qubits(
    hamiltonian: &Option<PathBuf>,
    qubits: Option<usize>,
) -> Result<(PathBuf, usize), CliError> {
    let path = hamiltonian
        .clone()
        .ok_or_else(|| usage("--hamiltonian is required"))?;
    let n = match qubits {
        Some(n) => n,
        None => header_qubits(&path)?
            .ok_or_else(|| usage("--qubits is required (no `# qubits:` header in the file)"))?,
    };
    Ok((path, n))
}

/// A fully specified experiment minus the optimizer choice.
struct Problem {
    hamiltonian: PathBuf,
    n_qubits: usize,
    depth: usize,
    iters: usize,
    seed: u64,
    reference: f64,
    threshold: f64,
    timing: bool,
}

impl ProblemArgs {
    fn resolve(&self) -> Result<Problem, CliError> {
        let (hamiltonian, n_qubits) = hamiltonian_and_qubits(&self.hamiltonian, self.qubits)?;
        let reference = match self.reference {
            Some(r) => r,
            None => load_hamiltonian(&hamiltonian, n_qubits)?
                .header_reference
                .ok_or_else(|| {
                    usage("--reference is required (no `# reference_energy:` header in the file)")
                })?,
        };
        Ok(Problem {
            hamiltonian,
            n_qubits,
            depth: self.depth.unwrap_or(DEFAULT_DEPTH),
            iters: self.iters.unwrap_or(DEFAULT_ITERS),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            reference,
            threshold: self.threshold.unwrap_or(CHEMICAL_ACCURACY),
            timing: !self.no_timing,
        })
    }
}

impl Problem {
    fn experiment(&self, method: Method, output_path: Option<PathBuf>) -> ExperimentConfig {
        ExperimentConfig {
            hamiltonian_path: self.hamiltonian.clone(),
            n_qubits: self.n_qubits,
            depth: self.depth,
            optimizer: OptimizerConfig::new(method, self.iters),
            seed: self.seed,
            reference_energy: self.reference,
            output_path,
            threshold: self.threshold,
            timing: self.timing,
        }
    }
}

/// Turns resolved `run` flags into an experiment configuration.
pub fn run_config(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let problem = args.problem.resolve()?;
    let name = args
        .optimizer
        .as_deref()
        .ok_or_else(|| usage("--optimizer is required"))?;
    let mut method = Method::from_name(name)?;
    let hyper = [
        ("dt", args.dt),
        ("mass", args.mass),
        ("damping", args.damping),
        ("lr", args.lr),
        ("momentum", args.momentum),
    ];
    for (key, value) in hyper {
        if let Some(v) = value {
            method.set(key, &v.to_string())?;
        }
    }
    if args.reuse_force {
        method.set("reuse_force", "true")?;
    }
    let out = args.out.clone().ok_or_else(|| usage("--out is required"))?;
    let config = problem.experiment(method, Some(out));
    config.validate()?;
    Ok(config)
}

/// Turns resolved `compare` flags into one experiment per listed optimizer.
pub fn compare_configs(args: &CompareArgs) -> Result<(Vec<ExperimentConfig>, PathBuf), CliError> {
    let problem = args.problem.resolve()?;
    let outdir = args.outdir.clone().ok_or_else(|| usage("--outdir is required"))?;
    let list = args.optimizers.as_deref().unwrap_or(DEFAULT_COMPARE);
    let mut methods: Vec<Method> = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if methods.iter().any(|m| m.name() == name) {
            return Err(usage(format!("optimizer {name} listed twice")));
        }
        methods.push(Method::from_name(name)?);
    }
    if methods.is_empty() {
        return Err(usage("--optimizers is empty"));
    }
    for setting in &args.set {
        let (target, value) = setting
            .split_once('=')
            .ok_or_else(|| usage(format!("--set {setting:?}: expected METHOD.KEY=VALUE")))?;
        let (name, key) = target
            .split_once('.')
            .ok_or_else(|| usage(format!("--set {setting:?}: expected METHOD.KEY=VALUE")))?;
        let method = methods
            .iter_mut()
            .find(|m| m.name() == name)
            .ok_or_else(|| usage(format!("--set {setting:?}: {name} is not being compared")))?;
        method.set(key, value)?;
    }
    let configs: Vec<ExperimentConfig> = methods
        .into_iter()
        .map(|m| {
            let path = outdir.join(format!("{}.csv", m.name()));
            problem.experiment(m, Some(path))
        })
        .collect();
    for c in &configs {
        c.validate()?;
    }
    Ok((configs, outdir))
}

fn diverged(summary: &RunSummary) -> bool {
    matches!(summary.status, RunStatus::Diverged(_))
}

fn execute_run(args: RunArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let config = run_config(&args.resolved()?)?;
    let RunReport { summary, .. } = run_experiment(&config)?;
    write!(out, "{}", format_summary_table(std::slice::from_ref(&summary))).map_err(io_err)?;
    if diverged(&summary) {
        return Err(CliError::Runtime(format!("{}: {}", summary.method, summary.status)));
    }
    Ok(())
}

fn execute_compare(args: CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (configs, outdir) = compare_configs(&args.resolved()?)?;
    let results = compare(&configs)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (config, result) in configs.iter().zip(results) {
        match result {
            Ok(report) => {
                if diverged(&report.summary) {
                    failures.push(format!("{}: {}", report.summary.method, report.summary.status));
                }
                rows.push(report.summary);
            }
            Err(e) => failures.push(format!("{}: {e}", config.optimizer.method.name())),
        }
    }
    write_summary_csv(&outdir.join("summary.csv"), &rows)?;
    write!(out, "{}", format_summary_table(&rows)).map_err(io_err)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Runtime(failures.join("; ")))
    }
}

fn execute_exact(args: ExactArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let args = args.resolved()?;
    let (path, n) = hamiltonian_and_qubits(&args.hamiltonian, args.qubits)?;
    let loaded = load_hamiltonian(&path, n)?;
    let e0 = exact_ground_energy(&loaded.operator)?;
    writeln!(out, "{e0:.10}").map_err(io_err)?;
    Ok(())
}

/// Central differences of the energy, `[E(θ + h e_i) − E(θ − h e_i)] / 2h`.
pub fn finite_difference_gradient(
    objective: &mut Objective<'_>,
    params: &[f64],
    h: f64,
) -> crate::error::Result<Vec<f64>> {
    let mut shifted = params.to_vec();
    (0..params.len())
        .map(|i| {
            shifted[i] = params[i] + h;
            let plus = objective.energy(&shifted)?;
            shifted[i] = params[i] - h;
            let minus = objective.energy(&shifted)?;
            shifted[i] = params[i];
            Ok((plus - minus) / (2.0 * h))
        })
        .collect()
}

fn execute_gradcheck(args: GradcheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let args = args.resolved()?;
    let (path, n) = hamiltonian_and_qubits(&args.hamiltonian, args.qubits)?;
    let h = args.h.unwrap_or(DEFAULT_FD_STEP);
    if h.is_nan() || h <= 0.0 {
        return Err(usage("--h must be positive"));
    }
    let tolerance = args.tolerance.unwrap_or(DEFAULT_GRADCHECK_TOLERANCE);
    let loaded = load_hamiltonian(&path, n)?;
    let ansatz = Ansatz::hardware_efficient(n, args.depth.unwrap_or(DEFAULT_DEPTH))?;
    let params = ansatz.init_params(args.seed.unwrap_or(DEFAULT_SEED));
    let mut objective = Objective::new(&loaded.operator, &ansatz)?;
    let shift = objective.gradient(&params)?;
    let fd = finite_difference_gradient(&mut objective, &params, h)?;
    let (worst, max_diff) = shift
        .iter()
        .zip(&fd)
        .map(|(a, b)| (a - b).abs())
        .enumerate()
        .fold((0, 0.0), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    writeln!(out, "parameters: {}", params.len()).map_err(io_err)?;
    writeln!(out, "max |shift - fd|: {max_diff:.3e} (parameter {worst}, h = {h:e})").map_err(io_err)?;
    if max_diff <= tolerance {
        writeln!(out, "ok (tolerance {tolerance:e})").map_err(io_err)?;
        Ok(())
    } else {
        Err(CliError::Runtime(format!(
            "gradient mismatch {max_diff:e} exceeds tolerance {tolerance:e}"
        )))
    }
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => execute_run(args, out),
        Command::Compare(args) => execute_compare(args, out),
        Command::Exact(args) => execute_exact(args, out),
        Command::Gradcheck(args) => execute_gradcheck(args, out),
    }
}

/// Parses `args`, runs the command, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    match execute(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
