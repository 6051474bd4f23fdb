#![allow(dead_code)]

use proptest::prelude::*;
use spinprobe::model::{Axis, PauliString, SpinModel, Term};

/// Random Z-only models: up to `max_terms` strings on `1..=max_qubits` qubits,
/// coefficients in [-2, 2], shift in [0, 3].
pub fn diagonal_model(max_qubits: usize, max_terms: usize) -> impl Strategy<Value = SpinModel> {
    (1..=max_qubits).prop_flat_map(move |n| {
        let term = (
            -2.0f64..2.0,
            proptest::collection::btree_set(0..n, 1..=n),
        );
        (
            Just(n),
            proptest::collection::vec(term, 0..=max_terms),
            0.0f64..3.0,
        )
            .prop_map(|(n, terms, shift)| {
                let terms = terms
                    .into_iter()
                    .map(|(a, qs)| {
                        let qs: Vec<usize> = qs.into_iter().collect();
                        Term::new(a, PauliString::z_on(&qs).unwrap())
                    })
                    .collect();
                SpinModel::new(n, terms, shift).unwrap()
            })
    })
}

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)]
}

/// Random models with arbitrary Pauli axes.
pub fn pauli_model(max_qubits: usize, max_terms: usize) -> impl Strategy<Value = SpinModel> {
    (1..=max_qubits).prop_flat_map(move |n| {
        let term = (
            -2.0f64..2.0,
            proptest::collection::btree_map(0..n, axis(), 0..=n),
        );
        (
            Just(n),
            proptest::collection::vec(term, 0..=max_terms),
            0.0f64..3.0,
        )
            .prop_map(|(n, terms, shift)| {
                let terms = terms
                    .into_iter()
                    .map(|(a, ops)| Term::new(a, PauliString::from_ops(ops).unwrap()))
                    .collect();
                SpinModel::new(n, terms, shift).unwrap()
            })
    })
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}
