//! Hardware-efficient ansatz: alternating RY/RZ rotation sublayers and a
//! nearest-neighbour CZ ladder, closed by a final rotation sublayer.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::statevector::{Gate, Statevector, STATE_QUBIT_LIMIT};

/// Upper end of the half-open initialization interval `[0, INIT_SCALE)`.
pub const INIT_SCALE: f64 = 0.1;

/// A gate whose angle, if any, is read from a parameter slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateTemplate {
    Ry { target: usize, slot: usize },
    Rz { target: usize, slot: usize },
    Cz(usize, usize),
}

impl GateTemplate {
    fn bind(self, params: &[f64]) -> Gate {
        match self {
            GateTemplate::Ry { target, slot } => Gate::Ry {
                target,
                angle: params[slot],
            },
            GateTemplate::Rz { target, slot } => Gate::Rz {
                target,
                angle: params[slot],
            },
            GateTemplate::Cz(a, b) => Gate::Cz(a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ansatz {
    n_qubits: usize,
    depth: usize,
    n_params: usize,
    layout: Vec<GateTemplate>,
}

impl Ansatz {
    /// Builds the depth-`depth` layout; slots are numbered in gate order.
    pub fn hardware_efficient(n_qubits: usize, depth: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Config("ansatz needs at least one qubit".into()));
        }
        if n_qubits > STATE_QUBIT_LIMIT {
            return Err(Error::TooManyQubits {
                what: "ansatz",
                n_qubits,
                limit: STATE_QUBIT_LIMIT,
            });
        }
        let mut layout = Vec::new();
        let mut slot = 0;
        let mut rotations = |layout: &mut Vec<GateTemplate>| {
            for target in 0..n_qubits {
                layout.push(GateTemplate::Ry { target, slot });
                layout.push(GateTemplate::Rz {
                    target,
                    slot: slot + 1,
                });
                slot += 2;
            }
        };
        for _ in 0..depth {
            rotations(&mut layout);
            layout.extend((0..n_qubits.saturating_sub(1)).map(|q| GateTemplate::Cz(q, q + 1)));
        }
        rotations(&mut layout);
        Ok(Self {
            n_qubits,
            depth,
            n_params: 2 * n_qubits * (depth + 1),
            layout,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn layout(&self) -> &[GateTemplate] {
        &self.layout
    }

    pub fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() == self.n_params {
            Ok(())
        } else {
            Err(Error::ParamLength {
                expected: self.n_params,
                got: params.len(),
            })
        }
    }

    /// `U(θ)|0…0⟩`.
    pub fn prepare_state(&self, params: &[f64]) -> Result<Statevector> {
        self.check_params(params)?;
        let mut state = Statevector::zero(self.n_qubits)?;
        for template in &self.layout {
            state.apply(template.bind(params))?;
        }
        Ok(state)
    }

    /// `n_params` SplitMix64 draws scaled onto `[0, 0.1)`.
    pub fn init_params(&self, seed: u64) -> Vec<f64> {
        let mut rng = SplitMix64::new(seed);
        (0..self.n_params)
            .map(|_| rng.next_f64() * INIT_SCALE)
            .collect()
    }
}

pub fn build_hea(n_qubits: usize, depth: usize) -> Result<Ansatz> {
    Ansatz::hardware_efficient(n_qubits, depth)
}
