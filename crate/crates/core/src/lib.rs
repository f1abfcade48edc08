//! Damped velocity-Verlet optimization for variational quantum eigensolvers.
//!
//! The crate is a small, exact workbench: Pauli-sum Hamiltonians are read
//! from `.ham` text files, trial states come from a hardware-efficient
//! ansatz simulated on a dense statevector, gradients use the parameter-shift
//! rule, and every circuit-energy evaluation is counted.
//!
//! Module map:
//! - [`pauli`]: Pauli strings, qubit operators, the `.ham` format, dense matrices
//! - [`statevector`]: RY/RZ/CZ simulation and expectation values
//! - [`ansatz`]: hardware-efficient layout and seeded initialization
//! - [`objective`]: energy, parameter-shift gradient, evaluation ledger
//! - [`optimizers`]: damped Verlet, leapfrog, heavy ball, L-BFGS, Nelder–Mead
//! - [`harness`]: experiments, comparisons, CSV output, and the CLI

pub mod ansatz;
pub mod error;
pub mod harness;
pub mod objective;
pub mod optimizers;
pub mod pauli;
pub mod rng;
pub mod statevector;

pub use error::{Error, Result};
