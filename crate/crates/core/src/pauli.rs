//! Qubit operators as real-weighted sums of Pauli strings.
//!
//! Qubit 0 is the least-significant bit of a computational-basis index
//! everywhere in this crate. Operators are immutable once built: duplicate
//! Pauli strings are merged, near-zero terms dropped, and terms kept in
//! lexicographic factor order.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, ParseErrorKind, Result};

/// Largest register a dense matrix is built for (2^14 × 2^14 complex entries).
pub const DENSE_QUBIT_LIMIT: usize = 14;

/// Operators index qubits with 64-bit masks.
pub const OPERATOR_QUBIT_LIMIT: usize = 64;

/// Merged terms with smaller magnitude are dropped.
pub const DROP_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        match c {
            'X' => Some(Axis::X),
            'Y' => Some(Axis::Y),
            'Z' => Some(Axis::Z),
            _ => None,
        }
    }

    /// Explicit 2×2 matrix, row-major.
    fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Axis::X => [[o, one], [one, o]],
            Axis::Y => [[o, -i], [i, o]],
            Axis::Z => [[one, o], [o, -one]],
        }
    }
}

/// One weighted Pauli string. An empty factor list is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    coefficient: f64,
    factors: Vec<(usize, Axis)>,
}

impl PauliTerm {
    /// Factors must be strictly ascending in qubit index and the coefficient finite.
    pub fn new(coefficient: f64, factors: Vec<(usize, Axis)>) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::Config(format!(
                "term coefficient {coefficient} is not finite"
            )));
        }
        check_ascending(&factors).map_err(|kind| Error::Config(kind.to_string()))?;
        Ok(Self {
            coefficient,
            factors,
        })
    }

    pub fn identity(coefficient: f64) -> Result<Self> {
        Self::new(coefficient, Vec::new())
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn factors(&self) -> &[(usize, Axis)] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Bit masks of the string: qubits flipped (X or Y), qubits phased (Z or Y),
    /// and the number of Y factors.
    pub fn masks(&self) -> PauliMasks {
        let mut m = PauliMasks::default();
        for &(q, axis) in &self.factors {
            let bit = 1u64 << q;
            match axis {
                Axis::X => m.flip |= bit,
                Axis::Z => m.phase |= bit,
                Axis::Y => {
                    m.flip |= bit;
                    m.phase |= bit;
                    m.n_y += 1;
                }
            }
        }
        m
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e}", self.coefficient)?;
        for &(q, axis) in &self.factors {
            write!(f, " {}{}", axis.letter(), q)?;
        }
        Ok(())
    }
}

/// Symplectic form of a Pauli string: `P|b⟩ = i^n_y (-1)^popcount(b & phase) |b ^ flip⟩`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PauliMasks {
    pub flip: u64,
    pub phase: u64,
    pub n_y: u32,
}

fn check_ascending(factors: &[(usize, Axis)]) -> std::result::Result<(), ParseErrorKind> {
    for pair in factors.windows(2) {
        let (prev, next) = (pair[0].0, pair[1].0);
        if prev == next {
            return Err(ParseErrorKind::DuplicateQubit(prev));
        }
        if prev > next {
            return Err(ParseErrorKind::NonAscending { prev, next });
        }
    }
    Ok(())
}

/// A Hermitian qubit operator `Σ_k c_k P_k` with real `c_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitOperator {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl QubitOperator {
    /// Builds an operator, merging identical strings (coefficients summed in
    /// encounter order) and dropping merged terms below [`DROP_TOLERANCE`].
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Config("operator needs at least one qubit".into()));
        }
        if n_qubits > OPERATOR_QUBIT_LIMIT {
            return Err(Error::TooManyQubits {
                what: "qubit operator",
                n_qubits,
                limit: OPERATOR_QUBIT_LIMIT,
            });
        }
        let mut merged: BTreeMap<Vec<(usize, Axis)>, f64> = BTreeMap::new();
        for term in terms {
            if let Some(&(index, _)) = term.factors.last() {
                if index >= n_qubits {
                    return Err(Error::QubitOutOfRange { index, n_qubits });
                }
            }
            *merged.entry(term.factors).or_insert(0.0) += term.coefficient;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| c.abs() >= DROP_TOLERANCE)
            .map(|(factors, coefficient)| PauliTerm {
                coefficient,
                factors,
            })
            .collect();
        Ok(Self { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parses the `.ham` interchange text.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self> {
        let mut terms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let term = parse_term(line, n_qubits).map_err(|kind| Error::Parse {
                line: lineno + 1,
                kind,
            })?;
            terms.push(term);
        }
        Self::new(n_qubits, terms)
    }

    /// One line per term, in lexicographic factor order, 17 significant digits.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for term in &self.terms {
            writeln!(out, "{term}").expect("writing to a String cannot fail");
        }
        out
    }

    /// Dense `2^n × 2^n` matrix built from the explicit single-qubit Pauli
    /// matrices (row index = output basis state, qubit 0 least significant).
    pub fn to_dense_matrix(&self) -> Result<DMatrix<Complex64>> {
        let n = self.n_qubits;
        if n > DENSE_QUBIT_LIMIT {
            return Err(Error::TooManyQubits {
                what: "dense matrix",
                n_qubits: n,
                limit: DENSE_QUBIT_LIMIT,
            });
        }
        let dim = 1usize << n;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for term in &self.terms {
            let mut axes = vec![None; n];
            for &(q, axis) in &term.factors {
                axes[q] = Some(axis.matrix());
            }
            for col in 0..dim {
                let mut row = 0usize;
                let mut value = Complex64::new(term.coefficient, 0.0);
                for (q, mat) in axes.iter().enumerate() {
                    let bit = (col >> q) & 1;
                    let out_bit = match mat {
                        None => bit,
                        Some(mat) => {
                            // Every Pauli column has exactly one nonzero entry.
                            let r = if mat[0][bit].norm_sqr() > 0.0 { 0 } else { 1 };
                            value *= mat[r][bit];
                            r
                        }
                    };
                    row |= out_bit << q;
                }
                m[(row, col)] += value;
            }
        }
        Ok(m)
    }
}

impl FromStr for Axis {
    type Err = ParseErrorKind;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next().and_then(Axis::from_letter), chars.next()) {
            (Some(axis), None) => Ok(axis),
            _ => Err(ParseErrorKind::UnknownAxis(s.to_string())),
        }
    }
}

fn parse_coefficient(token: &str) -> std::result::Result<f64, ParseErrorKind> {
    match token.parse::<f64>() {
        Ok(c) if c.is_finite() => Ok(c),
        Ok(_) => Err(ParseErrorKind::NonFinite(token.to_string())),
        Err(_) => {
            let lower = token.to_ascii_lowercase();
            if lower.ends_with('j') || lower.ends_with('i') || lower.contains("j)") {
                Err(ParseErrorKind::Imaginary(token.to_string()))
            } else {
                Err(ParseErrorKind::Coefficient(token.to_string()))
            }
        }
    }
}

fn parse_factor(token: &str, n_qubits: usize) -> std::result::Result<(usize, Axis), ParseErrorKind> {
    let mut chars = token.chars();
    let axis = chars
        .next()
        .and_then(Axis::from_letter)
        .ok_or_else(|| ParseErrorKind::UnknownAxis(token.to_string()))?;
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseErrorKind::Index(token.to_string()));
    }
    let index: usize = digits
        .parse()
        .map_err(|_| ParseErrorKind::Index(token.to_string()))?;
    if index >= n_qubits {
        return Err(ParseErrorKind::IndexOutOfRange { index, n_qubits });
    }
    Ok((index, axis))
}

fn parse_term(line: &str, n_qubits: usize) -> std::result::Result<PauliTerm, ParseErrorKind> {
    let mut tokens = line.split_whitespace();
    let coefficient = parse_coefficient(tokens.next().unwrap_or_default())?;
    let factors = tokens
        .map(|t| parse_factor(t, n_qubits))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    check_ascending(&factors)?;
    Ok(PauliTerm {
        coefficient,
        factors,
    })
}

/// Parses the `.ham` interchange text into an operator on `n_qubits` qubits.
pub fn parse_operator(text: &str, n_qubits: usize) -> Result<QubitOperator> {
    QubitOperator::parse(text, n_qubits)
}

pub fn serialize_operator(op: &QubitOperator) -> String {
    op.serialize()
}

/// Reads the `# key: value` header comment of a `.ham` file, if present.
pub fn header_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .map(str::trim)
        .take_while(|l| l.is_empty() || l.starts_with('#'))
        .filter_map(|l| l.trim_start_matches('#').trim().split_once(':'))
        .find(|(k, _)| k.trim() == key)
        .map(|(_, v)| v.trim())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn parses_single_factor() {
        let op = parse_operator("-0.5 Z0", 2).unwrap();
        assert_eq!(op.len(), 1);
        assert_eq!(op.terms()[0].coefficient(), -0.5);
        assert_eq!(op.terms()[0].factors(), &[(0, Axis::Z)]);
    }

    #[test]
    fn merges_duplicate_identity() {
        let op = parse_operator("0.25\n0.25", 1).unwrap();
        assert_eq!(op.len(), 1);
        assert!(op.terms()[0].is_identity());
        assert_eq!(op.terms()[0].coefficient(), 0.5);
    }

    #[test]
    fn parses_multi_factor() {
        let op = parse_operator("0.1 X0 Z1 X2", 4).unwrap();
        assert_eq!(
            op.terms()[0].factors(),
            &[(0, Axis::X), (1, Axis::Z), (2, Axis::X)]
        );
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let op = parse_operator("# header\n\n  1.5e-1 Y1  \n# tail\n", 2).unwrap();
        assert_eq!(op.len(), 1);
        assert_eq!(op.terms()[0].coefficient(), 0.15);
    }

    #[test]
    fn rejects_bad_input() {
        let kind = |text: &str, n| match parse_operator(text, n) {
            Err(Error::Parse { kind, .. }) => kind,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(
            kind("0.1 Z1 X0", 2),
            ParseErrorKind::NonAscending { prev: 1, next: 0 }
        );
        assert_eq!(kind("0.1 Z1 X1", 2), ParseErrorKind::DuplicateQubit(1));
        assert_eq!(
            kind("0.1 Z2", 2),
            ParseErrorKind::IndexOutOfRange {
                index: 2,
                n_qubits: 2
            }
        );
        assert!(matches!(kind("0.1 W0", 2), ParseErrorKind::UnknownAxis(_)));
        assert!(matches!(kind("0.1 x0", 2), ParseErrorKind::UnknownAxis(_)));
        assert!(matches!(kind("abc Z0", 2), ParseErrorKind::Coefficient(_)));
        assert!(matches!(kind("0.5j Z0", 2), ParseErrorKind::Imaginary(_)));
        assert!(matches!(kind("(0.5+0j) Z0", 2), ParseErrorKind::Imaginary(_)));
        assert!(matches!(kind("nan Z0", 2), ParseErrorKind::NonFinite(_)));
        assert!(matches!(kind("0.1 Z", 2), ParseErrorKind::Index(_)));
        assert!(matches!(kind("0.1 Z-1", 2), ParseErrorKind::Index(_)));
    }

    #[test]
    fn parse_error_reports_line_number() {
        match parse_operator("# c\n1.0 Z0\n1.0 Q0\n", 1) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn drops_cancelled_terms() {
        let op = parse_operator("0.3 Z0\n-0.3 Z0\n1.0 X0", 1).unwrap();
        assert_eq!(op.len(), 1);
        assert_eq!(op.terms()[0].factors(), &[(0, Axis::X)]);
    }

    #[test]
    fn serializes_identity() {
        let op = parse_operator("1.0", 1).unwrap();
        assert_eq!(serialize_operator(&op), "1.0000000000000000e0\n");
    }

    #[test]
    fn serialization_orders_terms_lexicographically() {
        let op = parse_operator("1.0 Z0\n2.0 X0 X1", 2).unwrap();
        let text = serialize_operator(&op);
        let lines: Vec<_> = text.lines().collect();
        assert!(lines[0].ends_with("X0 X1"), "{text}");
        assert!(lines[1].ends_with("Z0"), "{text}");
    }

    #[test]
    fn dense_single_qubit_paulis() {
        let z = parse_operator("1 Z0", 1).unwrap().to_dense_matrix().unwrap();
        assert_eq!(z, DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]));
        let x = parse_operator("1 X0", 1).unwrap().to_dense_matrix().unwrap();
        assert_eq!(x, DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]));
        let y = parse_operator("1 Y0", 1).unwrap().to_dense_matrix().unwrap();
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(y, DMatrix::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]));
    }

    #[test]
    fn dense_uses_little_endian_qubits() {
        // Z1 on two qubits is diag(1, 1, -1, -1) with qubit 0 least significant.
        let m = parse_operator("1 Z1", 2).unwrap().to_dense_matrix().unwrap();
        let diag: Vec<f64> = (0..4).map(|k| m[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
        // X0 maps |00⟩ to |01⟩ (index 1).
        let m = parse_operator("1 X0", 2).unwrap().to_dense_matrix().unwrap();
        assert_eq!(m[(1, 0)], c(1.0));
    }

    #[test]
    fn dense_guard() {
        let op = parse_operator("1 Z14", 15).unwrap();
        assert!(matches!(
            op.to_dense_matrix(),
            Err(Error::TooManyQubits { .. })
        ));
    }

    #[test]
    fn masks_match_factors() {
        let op = parse_operator("1 X0 Y2 Z3", 4).unwrap();
        let m = op.terms()[0].masks();
        assert_eq!(m.flip, 0b0101);
        assert_eq!(m.phase, 0b1100);
        assert_eq!(m.n_y, 1);
    }

    #[test]
    fn reads_header_values() {
        let text = "# qubits: 4\n# reference_energy: -1.5\n1.0 Z0\n# reference_energy: 9\n";
        assert_eq!(header_value(text, "reference_energy"), Some("-1.5"));
        assert_eq!(header_value(text, "qubits"), Some("4"));
        assert_eq!(header_value(text, "basis"), None);
    }
}
