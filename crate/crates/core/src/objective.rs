//! The VQE energy objective, its parameter-shift gradient, and the ledger
//! of circuit-energy evaluations spent on them.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::ansatz::Ansatz;
use crate::error::{Error, Result};
use crate::pauli::QubitOperator;
use crate::statevector::CompiledObservable;

/// Quantum-cost ledger. Every circuit-energy evaluation is counted once,
/// including each of the `2 · n_params` shifted evaluations of a gradient.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounter {
    pub energy_evals: u64,
    pub gradient_calls: u64,
}

/// `E(θ) = ⟨0|U†(θ) H U(θ)|0⟩` over a fixed Hamiltonian and ansatz.
#[derive(Debug, Clone)]
pub struct Objective<'a> {
    hamiltonian: &'a QubitOperator,
    observable: CompiledObservable,
    ansatz: &'a Ansatz,
    counter: EvalCounter,
}

impl<'a> Objective<'a> {
    pub fn new(hamiltonian: &'a QubitOperator, ansatz: &'a Ansatz) -> Result<Self> {
        if hamiltonian.n_qubits() != ansatz.n_qubits() {
            return Err(Error::QubitMismatch {
                state: ansatz.n_qubits(),
                operator: hamiltonian.n_qubits(),
            });
        }
        Ok(Self {
            hamiltonian,
            observable: CompiledObservable::new(hamiltonian)?,
            ansatz,
            counter: EvalCounter::default(),
        })
    }

    pub fn hamiltonian(&self) -> &'a QubitOperator {
        self.hamiltonian
    }

    pub fn ansatz(&self) -> &'a Ansatz {
        self.ansatz
    }

    pub fn n_params(&self) -> usize {
        self.ansatz.n_params()
    }

    pub fn counter(&self) -> EvalCounter {
        self.counter
    }

    fn evaluate(&self, params: &[f64]) -> Result<f64> {
        self.observable.expectation(&self.ansatz.prepare_state(params)?)
    }

    /// One counted energy evaluation.
    pub fn energy(&mut self, params: &[f64]) -> Result<f64> {
        let e = self.evaluate(params)?;
        self.counter.energy_evals += 1;
        Ok(e)
    }

    /// Parameter-shift gradient: `∂E/∂θ_i = [E(θ_i + π/2) − E(θ_i − π/2)] / 2`.
    ///
    /// Costs exactly `2 · n_params` energy evaluations and never evaluates the
    /// unshifted point. Components are computed in parallel; each one is an
    /// independent deterministic quantity, so the result does not depend on
    /// thread scheduling.
    pub fn gradient(&mut self, params: &[f64]) -> Result<Vec<f64>> {
        self.ansatz.check_params(params)?;
        let grad = (0..params.len())
            .into_par_iter()
            .map(|i| {
                let mut shifted = params.to_vec();
                shifted[i] = params[i] + FRAC_PI_2;
                let plus = self.evaluate(&shifted)?;
                shifted[i] = params[i] - FRAC_PI_2;
                let minus = self.evaluate(&shifted)?;
                Ok((plus - minus) / 2.0)
            })
            .collect::<Result<Vec<f64>>>()?;
        self.counter.energy_evals += 2 * params.len() as u64;
        self.counter.gradient_calls += 1;
        Ok(grad)
    }
}

/// Anything an optimizer can minimize while keeping an evaluation ledger.
///
/// Implementations must count gradients as `2 · n_params` energy evaluations,
/// mirroring the parameter-shift cost.
pub trait CostFunction {
    fn n_params(&self) -> usize;
    fn energy(&mut self, params: &[f64]) -> Result<f64>;
    fn gradient(&mut self, params: &[f64]) -> Result<Vec<f64>>;
    fn counter(&self) -> EvalCounter;
}

impl CostFunction for Objective<'_> {
    fn n_params(&self) -> usize {
        Objective::n_params(self)
    }

    fn energy(&mut self, params: &[f64]) -> Result<f64> {
        Objective::energy(self, params)
    }

    fn gradient(&mut self, params: &[f64]) -> Result<Vec<f64>> {
        Objective::gradient(self, params)
    }

    fn counter(&self) -> EvalCounter {
        Objective::counter(self)
    }
}

/// Separable quadratic `E(θ) = ½ Σ k_i θ_i²` with an analytic gradient and
/// the same ledger rules as [`Objective`].
#[derive(Debug, Clone)]
pub struct Quadratic {
    stiffness: Vec<f64>,
    counter: EvalCounter,
}

impl Quadratic {
    pub fn new(stiffness: Vec<f64>) -> Self {
        Self {
            stiffness,
            counter: EvalCounter::default(),
        }
    }

    /// The isotropic bowl `½|θ|²`.
    pub fn isotropic(n: usize) -> Self {
        Self::new(vec![1.0; n])
    }

    pub fn value(&self, params: &[f64]) -> f64 {
        0.5 * self
            .stiffness
            .iter()
            .zip(params)
            .map(|(k, x)| k * x * x)
            .sum::<f64>()
    }

    fn check(&self, params: &[f64]) -> Result<()> {
        if params.len() == self.stiffness.len() {
            Ok(())
        } else {
            Err(Error::ParamLength {
                expected: self.stiffness.len(),
                got: params.len(),
            })
        }
    }
}

impl CostFunction for Quadratic {
    fn n_params(&self) -> usize {
        self.stiffness.len()
    }

    fn energy(&mut self, params: &[f64]) -> Result<f64> {
        self.check(params)?;
        self.counter.energy_evals += 1;
        Ok(self.value(params))
    }

    fn gradient(&mut self, params: &[f64]) -> Result<Vec<f64>> {
        self.check(params)?;
        self.counter.energy_evals += 2 * params.len() as u64;
        self.counter.gradient_calls += 1;
        Ok(self.stiffness.iter().zip(params).map(|(k, x)| k * x).collect())
    }

    fn counter(&self) -> EvalCounter {
        self.counter
    }
}

/// Circuit evaluations per optimizer iteration: one logged energy plus
/// `forces_per_iter` parameter-shift gradients.
pub fn evals_per_iteration(n_params: usize, forces_per_iter: usize) -> u64 {
    1 + (forces_per_iter * 2 * n_params) as u64
}
