//! Experiment harness: loads Hamiltonians, runs optimizers from a shared
//! seeded start, writes convergence CSVs and summary tables, and computes
//! exact reference energies.

pub mod cli;
mod output;

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;

pub use output::{format_summary_table, read_csv, write_csv, write_summary_csv, CSV_HEADER};

use crate::ansatz::Ansatz;
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::optimizers::{optimize, ConvergenceRecord, OptimizerConfig, Recorder, RunStatus};
use crate::pauli::{header_value, QubitOperator};

/// Chemical accuracy in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.6e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub hamiltonian_path: PathBuf,
    pub n_qubits: usize,
    pub depth: usize,
    pub optimizer: OptimizerConfig,
    pub seed: u64,
    pub reference_energy: f64,
    /// Where the convergence CSV goes; `None` skips writing.
    pub output_path: Option<PathBuf>,
    pub threshold: f64,
    /// Record wall-clock time in the log. Off makes CSVs bitwise reproducible.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.reference_energy.is_finite() {
            return Err(Error::Config("reference energy must be finite".into()));
        }
        if self.threshold.is_nan() || self.threshold < 0.0 {
            return Err(Error::Config("accuracy threshold must be non-negative".into()));
        }
        self.optimizer.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub method: String,
    pub final_energy: f64,
    pub final_error: f64,
    pub total_evals: u64,
    pub elapsed: f64,
    pub evals_to_chemical_accuracy: Option<u64>,
    pub status: RunStatus,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub records: Vec<ConvergenceRecord>,
    pub summary: RunSummary,
    pub final_params: Vec<f64>,
}

/// A Hamiltonian file plus the reference energy from its header, if any.
#[derive(Debug, Clone)]
pub struct LoadedHamiltonian {
    pub operator: QubitOperator,
    pub header_reference: Option<f64>,
}

/// Reads a `.ham` file. A `# reference_energy: <value>` header line is picked up.
pub fn load_hamiltonian(path: &Path, n_qubits: usize) -> Result<LoadedHamiltonian> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let operator = QubitOperator::parse(&text, n_qubits)?;
    let header_reference = header_value(&text, "reference_energy").and_then(|v| v.parse().ok());
    Ok(LoadedHamiltonian {
        operator,
        header_reference,
    })
}

/// Qubit count declared in a `.ham` header (`# qubits: <n>`).
pub fn header_qubits(path: &Path) -> Result<Option<usize>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(header_value(&text, "qubits").and_then(|v| v.parse().ok()))
}

/// Cumulative evaluation count of the first record within `threshold` of the reference.
pub fn evals_to_accuracy(records: &[ConvergenceRecord], reference: f64, threshold: f64) -> Option<u64> {
    records
        .iter()
        .find(|r| (r.energy - reference).abs() <= threshold)
        .map(|r| r.cumulative_evals)
}

/// Smallest eigenvalue of the operator's dense matrix.
pub fn exact_ground_energy(op: &QubitOperator) -> Result<f64> {
    let m = op.to_dense_matrix()?;
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    if m.iter().all(|z| z.im == 0.0) {
        let real: DMatrix<f64> = m.map(|z| z.re);
        Ok(min(real.symmetric_eigenvalues().as_slice()))
    } else {
        Ok(min(m.symmetric_eigenvalues().as_slice()))
    }
}

/// Runs one optimizer from `theta0` on an already-loaded Hamiltonian.
pub fn run_from(
    hamiltonian: &QubitOperator,
    ansatz: &Ansatz,
    theta0: &[f64],
    optimizer: &OptimizerConfig,
    reference: f64,
    threshold: f64,
    timing: bool,
) -> Result<RunReport> {
    let mut objective = Objective::new(hamiltonian, ansatz)?;
    let mut recorder = Recorder::new(reference, timing);
    let outcome = optimize(&mut objective, theta0, optimizer, &mut recorder)?;
    let last = *outcome
        .records
        .last()
        .expect("the start point is always recorded");
    let summary = RunSummary {
        method: optimizer.method.name().to_string(),
        final_energy: last.energy,
        final_error: last.abs_error,
        total_evals: outcome.counter.energy_evals,
        elapsed: last.elapsed,
        evals_to_chemical_accuracy: evals_to_accuracy(&outcome.records, reference, threshold),
        status: outcome.status,
    };
    Ok(RunReport {
        records: outcome.records,
        summary,
        final_params: outcome.final_params,
    })
}

/// Loads the Hamiltonian, seeds the start point, runs, and writes the CSV.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let loaded = load_hamiltonian(&config.hamiltonian_path, config.n_qubits)?;
    let ansatz = Ansatz::hardware_efficient(config.n_qubits, config.depth)?;
    let theta0 = ansatz.init_params(config.seed);
    let report = run_from(
        &loaded.operator,
        &ansatz,
        &theta0,
        &config.optimizer,
        config.reference_energy,
        config.threshold,
        config.timing,
    )?;
    if let Some(path) = &config.output_path {
        write_csv(path, &report.records)?;
    }
    Ok(report)
}

/// Runs every config from one shared start point, concurrently, keeping rows
/// in the given order. A failing row does not abort the others.
pub fn compare(configs: &[ExperimentConfig]) -> Result<Vec<Result<RunReport>>> {
    let Some(first) = configs.first() else {
        return Ok(Vec::new());
    };
    for c in configs {
        let shared = c.hamiltonian_path == first.hamiltonian_path
            && c.n_qubits == first.n_qubits
            && c.depth == first.depth
            && c.seed == first.seed
            && c.optimizer.max_iters == first.optimizer.max_iters;
        if !shared {
            return Err(Error::Config(
                "compared runs must share Hamiltonian, qubits, depth, seed and iteration budget".into(),
            ));
        }
    }
    let loaded = load_hamiltonian(&first.hamiltonian_path, first.n_qubits)?;
    let ansatz = Ansatz::hardware_efficient(first.n_qubits, first.depth)?;
    let theta0 = ansatz.init_params(first.seed);
    let operator = &loaded.operator;
    let (ansatz, theta0) = (&ansatz, &theta0);
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|config| {
                scope.spawn(move || -> Result<RunReport> {
                    config.validate()?;
                    let report = run_from(
                        operator,
                        ansatz,
                        theta0,
                        &config.optimizer,
                        config.reference_energy,
                        config.threshold,
                        config.timing,
                    )?;
                    if let Some(path) = &config.output_path {
                        write_csv(path, &report.records)?;
                    }
                    Ok(report)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("optimizer thread panicked"))
            .collect()
    });
    Ok(results)
}
