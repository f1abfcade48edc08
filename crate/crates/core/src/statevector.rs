//! Dense noiseless statevector simulation over the gate set {RY, RZ, CZ}.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{PauliMasks, QubitOperator};

pub const STATE_QUBIT_LIMIT: usize = 24;

/// Registers at least this large evaluate Pauli terms in parallel.
const PARALLEL_TERMS_MIN_DIM: usize = 1 << 10;

/// Leaf size of the pairwise term-sum reduction.
const REDUCTION_LEAF: usize = 8;

/// Rotations follow `R_G(θ) = exp(-iθG/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Ry { target: usize, angle: f64 },
    Rz { target: usize, angle: f64 },
    Cz(usize, usize),
}

impl Gate {
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |index: usize| {
            if index < n_qubits {
                Ok(())
            } else {
                Err(Error::QubitOutOfRange { index, n_qubits })
            }
        };
        match *self {
            Gate::Ry { target, .. } | Gate::Rz { target, .. } => check(target),
            Gate::Cz(a, b) => {
                check(a)?;
                check(b)?;
                if a == b {
                    Err(Error::DegenerateCz(a))
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Config("a register needs at least one qubit".into()));
        }
        if n_qubits > STATE_QUBIT_LIMIT {
            return Err(Error::TooManyQubits {
                what: "statevector",
                n_qubits,
                limit: STATE_QUBIT_LIMIT,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes; the length must be a power of two. No normalization is applied.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Config(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > STATE_QUBIT_LIMIT {
            return Err(Error::TooManyQubits {
                what: "statevector",
                n_qubits,
                limit: STATE_QUBIT_LIMIT,
            });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match gate {
            Gate::Ry { target, angle } => {
                let (s, c) = (angle / 2.0).sin_cos();
                self.for_each_pair(target, |a0, a1| {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = x0 * c - x1 * s;
                    *a1 = x0 * s + x1 * c;
                });
            }
            Gate::Rz { target, angle } => {
                let (s, c) = (angle / 2.0).sin_cos();
                let lower = Complex64::new(c, -s);
                let upper = Complex64::new(c, s);
                self.for_each_pair(target, |a0, a1| {
                    *a0 *= lower;
                    *a1 *= upper;
                });
            }
            Gate::Cz(a, b) => {
                let mask = (1usize << a) | (1usize << b);
                for (i, amp) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
        }
        Ok(())
    }

    fn for_each_pair(&mut self, target: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
        let stride = 1usize << target;
        for block in self.amplitudes.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                f(a0, a1);
            }
        }
    }

    /// `⟨ψ|P|ψ⟩` for a single Pauli string, without its coefficient.
    pub fn pauli_expectation(&self, masks: PauliMasks) -> Complex64 {
        let flip = masks.flip as usize;
        let phase = masks.phase as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, amp) in self.amplitudes.iter().enumerate() {
            let term = self.amplitudes[i ^ flip].conj() * amp;
            if (i & phase).count_ones() % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        match masks.n_y % 4 {
            0 => acc,
            1 => Complex64::new(-acc.im, acc.re),
            2 => -acc,
            _ => Complex64::new(acc.im, -acc.re),
        }
    }

    /// `⟨ψ|H|ψ⟩`, summed term by term in operator order with a fixed pairwise reduction.
    pub fn expectation(&self, op: &QubitOperator) -> Result<f64> {
        if op.n_qubits() != self.n_qubits {
            return Err(Error::QubitMismatch {
                state: self.n_qubits,
                operator: op.n_qubits(),
            });
        }
        let contribution = |term: &crate::pauli::PauliTerm| {
            self.pauli_expectation(term.masks()) * term.coefficient()
        };
        let parts: Vec<Complex64> = if self.amplitudes.len() >= PARALLEL_TERMS_MIN_DIM {
            op.terms().par_iter().map(contribution).collect()
        } else {
            op.terms().iter().map(contribution).collect()
        };
        let re: Vec<f64> = parts.iter().map(|z| z.re).collect();
        let im: Vec<f64> = parts.iter().map(|z| z.im).collect();
        let imag = pairwise_sum(&im);
        debug_assert!(
            imag.abs() <= 1e-10 * self.norm_sqr().max(1.0),
            "non-Hermitian residual {imag}"
        );
        Ok(pairwise_sum(&re))
    }
}

/// A Hamiltonian regrouped for repeated evaluation: terms sharing a flip
/// mask are folded into one diagonal, so each group costs one pass over the
/// register instead of one pass per term.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledObservable {
    n_qubits: usize,
    /// `(flip, d)` with `H = Σ_f Σ_b d_f[b] |b ⊕ f⟩⟨b|`.
    groups: Vec<(usize, Vec<Complex64>)>,
}

impl CompiledObservable {
    pub fn new(op: &QubitOperator) -> Result<Self> {
        let n_qubits = op.n_qubits();
        if n_qubits > STATE_QUBIT_LIMIT {
            return Err(Error::TooManyQubits {
                what: "statevector",
                n_qubits,
                limit: STATE_QUBIT_LIMIT,
            });
        }
        let dim = 1usize << n_qubits;
        let mut by_flip: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
        for term in op.terms() {
            let masks = term.masks();
            let phase = masks.phase as usize;
            let unit = match masks.n_y % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            } * term.coefficient();
            let diag = by_flip
                .entry(masks.flip as usize)
                .or_insert_with(|| vec![Complex64::new(0.0, 0.0); dim]);
            for (b, d) in diag.iter_mut().enumerate() {
                if (b & phase).count_ones() % 2 == 1 {
                    *d -= unit;
                } else {
                    *d += unit;
                }
            }
        }
        Ok(Self {
            n_qubits,
            groups: by_flip.into_iter().collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    /// `Re ⟨ψ|H|ψ⟩`, reduced over groups in flip-mask order.
    pub fn expectation(&self, state: &Statevector) -> Result<f64> {
        if state.n_qubits != self.n_qubits {
            return Err(Error::QubitMismatch {
                state: state.n_qubits,
                operator: self.n_qubits,
            });
        }
        let amps = &state.amplitudes;
        let group = |(flip, diag): &(usize, Vec<Complex64>)| {
            amps.iter()
                .zip(diag)
                .enumerate()
                .map(|(b, (amp, d))| {
                    let t = d * amp;
                    let a = amps[b ^ flip];
                    a.re * t.re + a.im * t.im
                })
                .sum::<f64>()
        };
        let parts: Vec<f64> = if amps.len() >= PARALLEL_TERMS_MIN_DIM {
            self.groups.par_iter().map(group).collect()
        } else {
            self.groups.iter().map(group).collect()
        };
        Ok(pairwise_sum(&parts))
    }
}

/// Tree reduction with fan-in two over leaves of [`REDUCTION_LEAF`] values.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= REDUCTION_LEAF {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

pub fn zero_state(n_qubits: usize) -> Result<Statevector> {
    Statevector::zero(n_qubits)
}

pub fn apply_gate(state: &mut Statevector, gate: Gate) -> Result<()> {
    state.apply(gate)
}

pub fn expectation(state: &Statevector, op: &QubitOperator) -> Result<f64> {
    state.expectation(op)
}
