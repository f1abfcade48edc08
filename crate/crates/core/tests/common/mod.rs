//! Independent dense-matrix oracles shared by the integration tests.
//!
//! Nothing here goes through the crate's simulator: operators are built by
//! Kronecker products of 2×2 matrices, circuits by full 2^n × 2^n gate
//! matrices, gradients by the analytic derivative of each rotation.

#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use vqe_verlet::pauli::{Axis, QubitOperator};
use vqe_verlet::rng::SplitMix64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const H2_REFERENCE: f64 = -1.1059333523;
pub const LIH_REFERENCE: f64 = -7.8823869936;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn h2_path() -> PathBuf {
    data_path("h2_sto3g_0.977.ham")
}

pub fn lih_path() -> PathBuf {
    data_path("lih_sto3g_1.596.ham")
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_2x2(axis: Option<Axis>) -> CMat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match axis {
        None => CMat::from_row_slice(2, 2, &[o, z, z, o]),
        Some(Axis::X) => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        Some(Axis::Y) => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        Some(Axis::Z) => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// `A_{n-1} ⊗ … ⊗ A_0`, so qubit 0 is the least significant index bit.
pub fn kron_qubits(per_qubit: &[CMat]) -> CMat {
    per_qubit
        .iter()
        .fold(CMat::identity(1, 1), |acc, m| m.kronecker(&acc))
}

pub fn dense_operator(op: &QubitOperator) -> CMat {
    let n = op.n_qubits();
    let dim = 1 << n;
    let mut h = CMat::zeros(dim, dim);
    for term in op.terms() {
        let mut factors: Vec<CMat> = (0..n).map(|_| pauli_2x2(None)).collect();
        for &(q, axis) in term.factors() {
            factors[q] = pauli_2x2(Some(axis));
        }
        h += kron_qubits(&factors) * c(term.coefficient(), 0.0);
    }
    h
}

pub fn quadratic_form(h: &CMat, psi: &CVec) -> Complex64 {
    (psi.adjoint() * h * psi)[(0, 0)]
}

fn single_qubit_gate(n: usize, q: usize, g: CMat) -> CMat {
    let mut factors: Vec<CMat> = (0..n).map(|_| pauli_2x2(None)).collect();
    factors[q] = g;
    kron_qubits(&factors)
}

/// `exp(−iθP/2)` for a Pauli axis, written out in closed form.
pub fn rotation(axis: Axis, theta: f64) -> CMat {
    let (s, co) = (theta / 2.0).sin_cos();
    pauli_2x2(None) * c(co, 0.0) - pauli_2x2(Some(axis)) * c(0.0, s)
}

pub fn cz_matrix(n: usize, a: usize, b: usize) -> CMat {
    let dim = 1 << n;
    let mut m = CMat::identity(dim, dim);
    for k in 0..dim {
        if (k >> a) & 1 == 1 && (k >> b) & 1 == 1 {
            m[(k, k)] = c(-1.0, 0.0);
        }
    }
    m
}

/// One gate of the hardware-efficient circuit, as a full-register matrix plus
/// the generator `G` of its parameter (if any): `∂U/∂θ = −i/2 · G · U`.
pub struct OracleGate {
    pub matrix: CMat,
    pub generator: Option<(usize, CMat)>,
}

/// Layer `l` rotates every qubit with RY then RZ (parameters `2n·l + 2q` and
/// `2n·l + 2q + 1`), then applies the CZ ladder; the final layer has no CZs.
pub fn hea_gates(n: usize, depth: usize, params: &[f64]) -> Vec<OracleGate> {
    assert_eq!(params.len(), 2 * n * (depth + 1));
    let mut gates = Vec::new();
    for layer in 0..=depth {
        for q in 0..n {
            for (k, axis) in [(0, Axis::Y), (1, Axis::Z)] {
                let index = 2 * n * layer + 2 * q + k;
                gates.push(OracleGate {
                    matrix: single_qubit_gate(n, q, rotation(axis, params[index])),
                    generator: Some((index, single_qubit_gate(n, q, pauli_2x2(Some(axis))))),
                });
            }
        }
        if layer < depth {
            for q in 0..n.saturating_sub(1) {
                gates.push(OracleGate {
                    matrix: cz_matrix(n, q, q + 1),
                    generator: None,
                });
            }
        }
    }
    gates
}

pub fn zero_ket(n: usize) -> CVec {
    let mut v = CVec::zeros(1 << n);
    v[0] = c(1.0, 0.0);
    v
}

pub fn oracle_state(n: usize, depth: usize, params: &[f64]) -> CVec {
    hea_gates(n, depth, params)
        .iter()
        .fold(zero_ket(n), |psi, g| &g.matrix * psi)
}

pub fn oracle_energy(h: &CMat, n: usize, depth: usize, params: &[f64]) -> f64 {
    quadratic_form(h, &oracle_state(n, depth, params)).re
}

/// `∂E/∂θ_k = 2 Re ⟨ψ|H|∂_k ψ⟩` with `|∂_k ψ⟩` from differentiating gate `k` in place.
pub fn oracle_gradient(h: &CMat, n: usize, depth: usize, params: &[f64]) -> Vec<f64> {
    let gates = hea_gates(n, depth, params);
    let psi = oracle_state(n, depth, params);
    let h_psi = h * &psi;
    let mut grad = vec![0.0; params.len()];
    for (pos, gate) in gates.iter().enumerate() {
        let Some((index, generator)) = &gate.generator else {
            continue;
        };
        let mut d = gates[..=pos].iter().fold(zero_ket(n), |v, g| &g.matrix * v);
        d = generator * d * c(0.0, -0.5);
        for g in &gates[pos + 1..] {
            d = &g.matrix * d;
        }
        grad[*index] = 2.0 * h_psi.dotc(&d).re;
    }
    grad
}

/// Normalized state with i.i.d. Gaussian-ish amplitudes from a seeded stream.
pub fn random_state(n: usize, rng: &mut SplitMix64) -> Vec<Complex64> {
    let mut amps: Vec<Complex64> = (0..1 << n)
        .map(|_| c(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    amps
}

/// `.ham` text for a random operator: up to `max_terms` terms, each acting on
/// a random subset of qubits with random axes and a coefficient in (−1, 1).
pub fn random_operator_text(n: usize, max_terms: usize, rng: &mut SplitMix64) -> String {
    let n_terms = 1 + (rng.next_u64() as usize) % max_terms;
    let mut out = String::new();
    for _ in 0..n_terms {
        let coefficient = 2.0 * rng.next_f64() - 1.0;
        out.push_str(&format!("{coefficient:.17e}"));
        for q in 0..n {
            match rng.next_u64() % 4 {
                1 => out.push_str(&format!(" X{q}")),
                2 => out.push_str(&format!(" Y{q}")),
                3 => out.push_str(&format!(" Z{q}")),
                _ => {}
            }
        }
        out.push('\n');
    }
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
