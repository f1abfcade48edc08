mod common;

use common::{dense_operator, kron_qubits, pauli_2x2};
use proptest::prelude::*;
use vqe_verlet::pauli::{parse_operator, serialize_operator, Axis, QubitOperator};
use vqe_verlet::Error;

fn axis() -> impl Strategy<Value = Option<Axis>> {
    prop_oneof![
        Just(None),
        Just(Some(Axis::X)),
        Just(Some(Axis::Y)),
        Just(Some(Axis::Z)),
    ]
}

/// A coefficient plus one optional axis per qubit.
type Line = (f64, Vec<Option<Axis>>);

fn operator_lines() -> impl Strategy<Value = (usize, Vec<Line>)> {
    (1usize..=6).prop_flat_map(|n| {
        let term = (-2.0f64..2.0, prop::collection::vec(axis(), n));
        (Just(n), prop::collection::vec(term, 0..12))
    })
}

fn render(lines: &[Line]) -> String {
    let mut text = String::new();
    for (coefficient, axes) in lines {
        text.push_str(&format!("{coefficient:e}"));
        for (q, a) in axes.iter().enumerate() {
            if let Some(a) = a {
                text.push_str(&format!(" {}{q}", a.letter()));
            }
        }
        text.push('\n');
    }
    text
}

fn max_entry_diff(a: &common::CMat, b: &common::CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity((n, lines) in operator_lines()) {
        let op = parse_operator(&render(&lines), n).unwrap();
        let text = serialize_operator(&op);
        let again = parse_operator(&text, n).unwrap();
        prop_assert_eq!(&again, &op);
        prop_assert_eq!(serialize_operator(&again), text);
    }

    #[test]
    fn dense_matrix_is_hermitian((n, lines) in operator_lines()) {
        let op = parse_operator(&render(&lines), n).unwrap();
        let h = op.to_dense_matrix().unwrap();
        prop_assert!(max_entry_diff(&h, &h.adjoint()) < 1e-14);
    }

    #[test]
    fn dense_matrix_matches_kronecker_oracle((n, lines) in operator_lines()) {
        let op = parse_operator(&render(&lines), n).unwrap();
        let h = op.to_dense_matrix().unwrap();
        prop_assert!(max_entry_diff(&h, &dense_operator(&op)) < 1e-12);
    }

    #[test]
    fn duplicated_input_doubles_every_term((n, lines) in operator_lines()) {
        let text = render(&lines);
        let once = parse_operator(&text, n).unwrap();
        let twice = parse_operator(&format!("{text}{text}"), n).unwrap();
        let h1 = once.to_dense_matrix().unwrap();
        let h2 = twice.to_dense_matrix().unwrap();
        prop_assert!(max_entry_diff(&(h1 * num_complex::Complex64::new(2.0, 0.0)), &h2) < 1e-12);
    }

    #[test]
    fn negated_copy_cancels((n, lines) in operator_lines()) {
        let negated: Vec<_> = lines.iter().map(|(c, a)| (-c, a.clone())).collect();
        let text = format!("{}{}", render(&lines), render(&negated));
        let op = parse_operator(&text, n).unwrap();
        let h = op.to_dense_matrix().unwrap();
        prop_assert!(h.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn line_order_does_not_change_the_operator((n, lines) in operator_lines()) {
        let forward = parse_operator(&render(&lines), n).unwrap();
        let mut reversed = lines.clone();
        reversed.reverse();
        let backward = parse_operator(&render(&reversed), n).unwrap();
        let hf = forward.to_dense_matrix().unwrap();
        let hb = backward.to_dense_matrix().unwrap();
        prop_assert!(max_entry_diff(&hf, &hb) < 1e-12);
        let strings = |op: &QubitOperator| -> Vec<Vec<(usize, Axis)>> {
            op.terms().iter().map(|t| t.factors().to_vec()).collect()
        };
        // Surviving strings agree unless a coefficient sits at the drop threshold.
        if forward.len() == backward.len() {
            prop_assert_eq!(strings(&forward), strings(&backward));
        }
    }
}

#[test]
fn pauli_products_follow_the_algebra() {
    // XY = iZ on one qubit, checked through the parsed operators' matrices.
    let x = parse_operator("1 X0", 1).unwrap().to_dense_matrix().unwrap();
    let y = parse_operator("1 Y0", 1).unwrap().to_dense_matrix().unwrap();
    let z = parse_operator("1 Z0", 1).unwrap().to_dense_matrix().unwrap();
    let i = num_complex::Complex64::new(0.0, 1.0);
    assert!(max_entry_diff(&(&x * &y), &(&z * i)) < 1e-15);
    assert!(max_entry_diff(&(&x * &x), &pauli_2x2(None)) < 1e-15);
}

#[test]
fn qubit_zero_is_least_significant() {
    let h = parse_operator("1 X0", 2).unwrap().to_dense_matrix().unwrap();
    let expected = kron_qubits(&[pauli_2x2(Some(Axis::X)), pauli_2x2(None)]);
    assert!(max_entry_diff(&h, &expected) == 0.0);
    // X0 maps |00⟩ (index 0) to |01⟩ (index 1).
    assert_eq!(h[(1, 0)].re, 1.0);
}

#[test]
fn malformed_lines_are_rejected_with_line_numbers() {
    let cases = [
        "0.5 X0\nabc Z1",
        "0.5 X0\n1 Q1",
        "0.5 X0\n1 X1 Z1",
        "0.5 X0\n1 Z1 X0",
        "0.5 X0\n1 X7",
        "0.5 X0\n1+2j Z0",
        "0.5 X0\nnan Z0",
    ];
    for text in cases {
        match parse_operator(text, 2) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2, "{text:?}"),
            other => panic!("{text:?} gave {other:?}"),
        }
    }
}
