mod common;

use common::{diagonal_model, pauli_model, sorted};
use proptest::prelude::*;
use spinprobe::exact::{
    g_coefficients, pauli_to_dense, plus_state, propagate, series_dense, series_diagonal,
};
use spinprobe::model::{lift_total, model_energies, parse_model, Axis, PauliString, PauliSum, SpinModel, Term};
use spinprobe::Complex64;

fn probe_op(n_total: usize, axis: Axis) -> spinprobe::DenseHermitian {
    let m = SpinModel::new(
        n_total,
        vec![Term::new(1.0, PauliString::from_ops([(0, axis)]).unwrap())],
        0.0,
    )
    .unwrap();
    pauli_to_dense(&m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn total_spectrum_is_shifted_inner_mirrored(model in diagonal_model(8, 6)) {
        let total = lift_total(&model);
        let got = sorted(model_energies(&total.as_model(), false).unwrap());
        let inner = model_energies(&model, true).unwrap();
        let expected = sorted(inner.iter().flat_map(|&e| [e, -e]).collect());
        prop_assert_eq!(got.len(), expected.len());
        for (a, b) in got.iter().zip(&expected) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        // mirror symmetry of the multiset
        let negated = sorted(got.iter().map(|v| -v).collect());
        for (a, b) in got.iter().zip(&negated) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lifting_is_reversible(model in pauli_model(5, 6)) {
        let total = lift_total(&model);
        prop_assert!(total.terms().iter().all(|t| t.string.axis(0) == Some(Axis::Z)));
        prop_assert_eq!(total.strip_probe(), model.terms().to_vec());
    }

    #[test]
    fn probe_x_and_y_anticommute(model in pauli_model(4, 6)) {
        let total = lift_total(&model);
        let h = pauli_to_dense(&total).unwrap();
        for axis in [Axis::X, Axis::Y] {
            let p = probe_op(total.n_qubits(), axis);
            let anti = p.matrix() * h.matrix() + h.matrix() * p.matrix();
            let worst = anti.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
            prop_assert!(worst <= 1e-12, "{worst}");
        }
    }

    #[test]
    fn document_round_trip(model in pauli_model(6, 6)) {
        prop_assert_eq!(parse_model(&model.to_document()).unwrap(), model);
    }

    #[test]
    fn series_is_even(model in diagonal_model(6, 6), t in -20.0f64..20.0) {
        let total = lift_total(&model);
        let a = series_diagonal(&total, &[t, -t]).unwrap();
        prop_assert!((a[0] - a[1]).abs() < 1e-10);
    }

    #[test]
    fn dense_total_eigenvalues_match_enumeration(model in diagonal_model(5, 5)) {
        let total = lift_total(&model);
        let eig = pauli_to_dense(&total).unwrap().eigenvalues();
        let inner = model_energies(&model, true).unwrap();
        let expected = sorted(inner.iter().flat_map(|&e| [e, -e]).collect());
        for (a, b) in eig.iter().zip(&expected) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn g_reconstructs_dense_series(
        model in pauli_model(3, 4),
        times in proptest::collection::vec(-6.0f64..6.0, 50),
        phases in proptest::collection::vec(0.0f64..std::f64::consts::TAU, 16),
    ) {
        let total = lift_total(&model);
        let h = pauli_to_dense(&total).unwrap();
        // a generic normalized initial state
        let dim = h.dim();
        let raw: Vec<Complex64> = (0..dim)
            .map(|k| Complex64::from_polar(1.0 + 0.1 * k as f64, phases[k % phases.len()]))
            .collect();
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi = spinprobe::StateVector::new(total.n_qubits(), raw.iter().map(|z| z / norm).collect()).unwrap();
        let g = g_coefficients(&h, &psi).unwrap();
        let a = series_dense(&h, &psi, &times).unwrap();
        for (t, v) in times.iter().zip(&a) {
            let r = g.evaluate(*t);
            prop_assert!((r.re - v).abs() < 1e-10);
            prop_assert!(r.im.abs() < 1e-10);
        }
        let a0 = series_dense(&h, &psi, &[0.0]).unwrap()[0];
        prop_assert!((g.total_weight().re - a0).abs() < 1e-10);
    }

    #[test]
    fn propagation_is_unitary(model in pauli_model(4, 5), t in -10.0f64..10.0) {
        let total = lift_total(&model);
        let h = pauli_to_dense(&total).unwrap();
        let psi = propagate(&h, &plus_state(total.n_qubits()), t).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn ising_weights_follow_multiplicity() {
    // all-pairs Ising on 4 spins: g per level = multiplicity / 2^5
    let mut terms = Vec::new();
    let couplings = [0.3, -0.7, 0.5, 0.9, -0.2, 0.4];
    let mut c = couplings.iter();
    for i in 0..4 {
        for j in (i + 1)..4 {
            terms.push(Term::new(*c.next().unwrap(), PauliString::z_on(&[i, j]).unwrap()));
        }
    }
    let model = SpinModel::new(4, terms, 3.5).unwrap();
    let total = lift_total(&model);
    let g = g_coefficients(&pauli_to_dense(&total).unwrap(), &plus_state(5)).unwrap();
    let energies = model_energies(&total.as_model(), false).unwrap();
    for line in &g.lines {
        let mult = energies.iter().filter(|&&e| (e - line.omega).abs() < 1e-9).count();
        assert!((line.g.re - mult as f64 / 32.0).abs() < 1e-12);
        assert!(line.g.im.abs() < 1e-12);
    }
}
