mod common;

use std::f64::consts::PI;

use common::{diagonal_model, sorted};
use proptest::prelude::*;
use spinprobe::exact::{g_coefficients, pauli_to_dense, plus_state, SpectralCoefficients, SpectralLine};
use spinprobe::model::{lift_total, model_energies, spectral_bound, PauliString, PauliSum, SpinModel, Term};
use spinprobe::oracle::{brute_energies, compare};
use spinprobe::spectro::{
    default_omega_grid, detect, dft_samples, dft_spectrum, kernel_closed_form, omega_grid, sample_series,
    DetectOptions, Detection,
};
use spinprobe::{Complex64, Engine, TimeSeries};

fn coefficients() -> impl Strategy<Value = SpectralCoefficients> {
    // Σ|g| ≤ 1 holds for any probe signal
    proptest::collection::vec((-6.0f64..6.0, 0.01f64..1.0, 0.0f64..2.0 * PI), 1..=8).prop_map(|lines| {
        let total: f64 = lines.iter().map(|l| l.1).sum();
        SpectralCoefficients::new(
            lines
                .into_iter()
                .map(|(omega, mag, phase)| SpectralLine {
                    omega,
                    g: Complex64::from_polar(mag / total, phase),
                })
                .collect(),
        )
    })
}

/// Z-only models whose coefficients and shift sit on a 1/8 lattice, so
/// distinct levels are at least 1/8 apart.
fn lattice_model(max_qubits: usize, max_terms: usize, shift_above_bound: bool) -> impl Strategy<Value = SpinModel> {
    (1..=max_qubits).prop_flat_map(move |n| {
        let term = (-12i32..=12, proptest::collection::btree_set(0..n, 1..=n.min(3)));
        (proptest::collection::vec(term, 1..=max_terms), 0i32..=16).prop_map(move |(terms, c)| {
            let terms: Vec<Term> = terms
                .into_iter()
                .filter(|(a, _)| *a != 0)
                .map(|(a, qs)| {
                    let qs: Vec<usize> = qs.into_iter().collect();
                    Term::new(a as f64 / 8.0, PauliString::z_on(&qs).unwrap())
                })
                .collect();
            let bound: f64 = terms.iter().map(|t| t.coefficient.abs()).sum();
            let shift = if shift_above_bound { bound + 0.25 + c as f64 / 8.0 } else { c as f64 / 8.0 };
            SpinModel::new(n, terms, shift).unwrap()
        })
    })
}

struct Resolved {
    detection: Detection,
    /// distinct `2E` over the total spectrum
    lines: Vec<(f64, f64)>,
    half_bin: f64,
    total_time: f64,
    tau: f64,
}

/// Exact-engine run with `τ` alias-free and `T` chosen so the closest pair
/// of total levels is `4π/T` apart. At least 64 samples per side keep the
/// Nyquist margin wider than a few kernel lobes.
fn resolved_run(model: &SpinModel) -> Resolved {
    let total = lift_total(model);
    let g = g_coefficients(&pauli_to_dense(&total).unwrap(), &plus_state(total.n_qubits())).unwrap();
    let lines: Vec<(f64, f64)> = g
        .lines
        .iter()
        .filter(|l| l.g.norm() > 1e-12)
        .map(|l| (2.0 * l.omega, l.g.re))
        .collect();
    let max_e = spectral_bound(model).max(0.125);
    let min_gap = lines
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0))
        .fold(f64::INFINITY, f64::min)
        .min(1.0);
    let total_time = 4.0 * PI / min_gap;
    let tau = (0.99 * 0.9 * PI / (2.0 * max_e)).min(total_time / 64.0);
    let n_max = (total_time / tau).ceil() as usize;
    let series = sample_series(Engine::Exact, &total, tau, n_max, true).unwrap();
    let grid = default_omega_grid(tau, series.total_time(), false).unwrap();
    let half_bin = 0.5 * (grid[1] - grid[0]);
    let detection = detect(&series, &total, &grid, DetectOptions::default()).unwrap();
    Resolved {
        detection,
        lines,
        half_bin,
        total_time: series.total_time(),
        tau,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn estimator_is_kernel_on_exponentials(g in coefficients(), tau in 0.05f64..0.5, n_max in 1usize..200) {
        let samples: Vec<Complex64> = (-(n_max as i64)..=n_max as i64)
            .map(|n| g.evaluate(n as f64 * tau))
            .collect();
        let grid = omega_grid(-PI / tau, PI / tau, PI / tau / 250.0).unwrap();
        let got = dft_samples(tau, n_max, &samples, &grid).unwrap();
        for (w, z) in grid.iter().zip(&got) {
            let want = kernel_closed_form(&g, *w, tau, n_max);
            prop_assert!((z - want).norm() <= 1e-12, "ω={w}: {z} vs {want}");
        }
    }

    #[test]
    fn estimator_is_periodic(model in diagonal_model(4, 5), tau in 0.05f64..0.5, n_max in 1usize..150) {
        let total = lift_total(&model);
        let series = sample_series(Engine::Exact, &total, tau, n_max, false).unwrap();
        let grid = omega_grid(-PI / tau, PI / tau, PI / tau / 100.0).unwrap();
        let shifted: Vec<f64> = grid.iter().map(|w| w + 2.0 * PI / tau).collect();
        let a = dft_spectrum(&series, &grid).unwrap();
        let b = dft_spectrum(&series, &shifted).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).norm() <= 1e-12);
        }
    }

    #[test]
    fn estimator_is_linear(
        a in proptest::collection::vec(-1.0f64..1.0, 81),
        b in proptest::collection::vec(-1.0f64..1.0, 81),
        alpha in -1.0f64..1.0,
        beta in -1.0f64..1.0,
    ) {
        let tau = 0.3;
        let combined: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (alpha * x + beta * y)).collect();
        let sa = dft_spectrum(&TimeSeries::new(tau, 40, a, None).unwrap(), &omega_grid(-10.0, 10.0, 0.05).unwrap()).unwrap();
        let sb = dft_spectrum(&TimeSeries::new(tau, 40, b, None).unwrap(), &omega_grid(-10.0, 10.0, 0.05).unwrap()).unwrap();
        let sc = dft_spectrum(&TimeSeries::new(tau, 40, combined, None).unwrap(), &omega_grid(-10.0, 10.0, 0.05).unwrap()).unwrap();
        for ((x, y), z) in sa.values.iter().zip(&sb.values).zip(&sc.values) {
            prop_assert!((0.5 * (alpha * x + beta * y) - z).norm() <= 1e-12);
        }
    }

    #[test]
    fn brute_matches_dense(model in diagonal_model(6, 6)) {
        let levels = brute_energies(&model).unwrap();
        let expanded: Vec<f64> = levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.energy, l.multiplicity))
            .collect();
        let dense = pauli_to_dense(&model).unwrap().eigenvalues();
        prop_assert_eq!(expanded.len(), dense.len());
        for (a, b) in expanded.iter().zip(&dense) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn peaks_are_sound(model in lattice_model(5, 6, false)) {
        let run = resolved_run(&model);
        let tol = run.half_bin + 0.02;
        let peaks = &run.detection.report.peaks;
        for (w, _) in &run.lines {
            prop_assert!(
                peaks.iter().any(|p| (p.omega_center - w).abs() <= tol),
                "line {w} not detected in {peaks:?}"
            );
        }
        for p in peaks {
            prop_assert!(
                run.lines.iter().any(|(w, _)| (p.omega_center - w).abs() <= tol),
                "peak {p:?} matches no line in {:?}", run.lines
            );
        }
    }

    #[test]
    fn peaks_are_mirrored(model in lattice_model(5, 6, false)) {
        let run = resolved_run(&model);
        let peaks = &run.detection.report.peaks;
        let bin = 2.0 * run.half_bin;
        for p in peaks {
            prop_assert!(peaks.iter().any(|q| (q.omega_center + p.omega_center).abs() <= bin), "{peaks:?}");
        }
    }

    #[test]
    fn isolated_amplitudes_follow_weights(model in lattice_model(5, 6, false)) {
        let run = resolved_run(&model);
        let t = run.total_time;
        for &(w, g) in &run.lines {
            // cross-talk from every other line is at most g'·τ/(2π|sin(Δτ/2)|)
            let leak: f64 = run
                .lines
                .iter()
                .filter(|l| l.0 != w)
                .map(|l| l.1.abs() * run.tau / (2.0 * PI * (0.5 * (l.0 - w) * run.tau).sin().abs()))
                .sum();
            let expected = g * t / PI;
            if leak > 0.05 * expected {
                continue;
            }
            let p = run
                .detection
                .report
                .peaks
                .iter()
                .find(|p| (p.omega_center - w).abs() <= run.half_bin + 0.02)
                .unwrap();
            prop_assert!((p.amplitude - expected).abs() <= 0.1 * expected, "{} vs {expected}", p.amplitude);
        }
    }

    #[test]
    fn recovered_levels_match_oracle(model in lattice_model(5, 6, true)) {
        let run = resolved_run(&model);
        let oracle: Vec<f64> = brute_energies(&model).unwrap().iter().map(|l| l.energy).collect();
        let report = compare(&run.detection.report.energies_inner, &oracle, 0.05);
        prop_assert!(report.is_clean(), "{report:?}");
        prop_assert!(run.detection.report.warnings.is_empty(), "{:?}", run.detection.report.warnings);
    }
}

#[test]
fn spin_in_field_lines_carry_quarter_weight() {
    let model = SpinModel::new(1, vec![Term::new(1.0, PauliString::z_on(&[0]).unwrap())], 2.0).unwrap();
    let run = resolved_run(&model);
    let energies = sorted(model_energies(&lift_total(&model).as_model(), false).unwrap());
    assert_eq!(run.lines.len(), energies.len());
    for (w, g) in &run.lines {
        assert!((g - 0.25).abs() < 1e-12, "{w}");
    }
    assert!(spectral_bound(&model) == 3.0);
}
