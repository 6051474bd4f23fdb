//! Exact evaluation of the probe signal `A(t) = <σ0x(t)>`.
//!
//! Two engines: a diagonal fast path for Z-only totals started from
//! `|+...+>`, and a dense path (Hermitian eigendecomposition) for arbitrary
//! Pauli models and initial states.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{diagonal_energies, PauliSum, TotalModel};

/// Largest register the dense engine accepts by default (dim 4096).
pub const MAX_DENSE_QUBITS: usize = 12;

/// Levels closer than this are merged into one spectral line.
pub const LEVEL_MERGE_TOL: f64 = 1e-9;

const NORM_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;
const CROSS_CHECK_TOL: f64 = 1e-10;

/// Pure state of `n_qubits` qubits; qubit 0 is the least significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                actual: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn to_dvector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.amplitudes)
    }
}

/// `|+>^{⊗n}`: every amplitude is `2^{-n/2}`.
pub fn plus_state(n: usize) -> StateVector {
    let dim = 1usize << n;
    let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
    StateVector::from_raw(n, vec![amp; dim])
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseHermitian {
    n_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DenseHermitian {
    pub fn new(n_qubits: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        let mut dev = 0.0f64;
        for c in 0..dim {
            for r in 0..=c {
                dev = dev.max((matrix[(r, c)] - matrix[(c, r)].conj()).norm());
            }
        }
        if dev > HERMITIAN_TOL {
            return Err(Error::NonHermitian(dev));
        }
        Ok(Self { n_qubits, matrix })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        values
    }
}

/// Assembles `Σ a ⊗_i P_i` as a dense matrix.
pub fn pauli_to_dense<M: PauliSum + ?Sized>(model: &M) -> Result<DenseHermitian> {
    pauli_to_dense_capped(model, MAX_DENSE_QUBITS)
}

pub fn pauli_to_dense_capped<M: PauliSum + ?Sized>(model: &M, cap: usize) -> Result<DenseHermitian> {
    let n = model.n_qubits();
    if n > cap {
        return Err(Error::DimensionCap { n_qubits: n, cap });
    }
    let dim = 1usize << n;
    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for term in model.terms() {
        let flip = term.string.flip_mask();
        let sign = term.string.sign_mask();
        // Y = i X Z, so each Y contributes a factor i on top of the sign.
        let base = match term.string.y_count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        } * term.coefficient;
        for col in 0..dim {
            let value = if (col & sign).count_ones() % 2 == 0 {
                base
            } else {
                -base
            };
            matrix[(col ^ flip, col)] += value;
        }
    }
    Ok(DenseHermitian { n_qubits: n, matrix })
}

/// `A(t) = 2^{-(N+1)} Σ_k cos(2 E_k t)` over the diagonal energies of `H_T`.
///
/// Valid for a Z-only total started from `|+...+>`.
pub fn series_diagonal(total: &TotalModel, times: &[f64]) -> Result<Vec<f64>> {
    let levels = DiagonalLevels::new(total)?;
    Ok(times.par_iter().map(|&t| levels.expectation(t)).collect())
}

/// Distinct diagonal energies with their weights `multiplicity / 2^{N+1}`.
#[derive(Clone, Debug)]
pub(crate) struct DiagonalLevels {
    levels: Vec<(f64, f64)>,
}

impl DiagonalLevels {
    pub(crate) fn new(total: &TotalModel) -> Result<Self> {
        let mut energies = diagonal_energies(total, None)?;
        let weight = (energies.len() as f64).recip();
        energies.sort_by(f64::total_cmp);
        let mut levels: Vec<(f64, f64)> = Vec::new();
        for e in energies {
            match levels.last_mut() {
                Some((last, w)) if *last == e => *w += weight,
                _ => levels.push((e, weight)),
            }
        }
        Ok(Self { levels })
    }

    pub(crate) fn expectation(&self, t: f64) -> f64 {
        self.levels
            .iter()
            .map(|&(e, w)| w * (2.0 * e * t).cos())
            .sum()
    }
}

/// Eigensystem of a dense `H_T`, shared by the dense series and `g_j`.
struct Eigensystem {
    energies: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl Eigensystem {
    fn new(h: &DenseHermitian) -> Self {
        let eig = SymmetricEigen::new(h.matrix.clone());
        Self {
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }

    /// `<E_j|v>` for every eigenvector.
    fn project(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        self.vectors.adjoint() * v
    }
}

/// Flips bit 0: the action of `σ0x` on a state vector.
fn apply_probe_x(v: &DVector<Complex64>) -> DVector<Complex64> {
    DVector::from_fn(v.len(), |k, _| v[k ^ 1])
}

fn check_dims(h: &DenseHermitian, psi0: &StateVector) -> Result<()> {
    if h.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: psi0.dim(),
        });
    }
    Ok(())
}

/// `exp(-i H t) ψ` by a Taylor series on sub-steps with `‖H‖ dt ≤ 1/2`.
///
/// Independent of the eigendecomposition, so it can cross-check it.
pub fn propagate(h: &DenseHermitian, psi: &StateVector, t: f64) -> Result<StateVector> {
    check_dims(h, psi)?;
    let out = propagate_vec(&h.matrix, &psi.to_dvector(), t);
    Ok(StateVector::from_raw(psi.n_qubits, out.iter().copied().collect()))
}

fn propagate_vec(h: &DMatrix<Complex64>, psi: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
    let norm1 = (0..h.ncols())
        .map(|c| h.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let steps = ((t.abs() * norm1) / 0.5).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let mut state = psi.clone();
    for _ in 0..steps {
        let mut term = state.clone();
        let mut acc = state.clone();
        for k in 1..64 {
            term = (h * &term) * Complex64::new(0.0, -dt / k as f64);
            acc += &term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        state = acc;
    }
    state
}

/// `<σ0x(t)>` for an arbitrary Hermitian `H_T` and initial state.
///
/// Evaluated as `<ψ0|σ0x exp(-2iH_T t)|ψ0>` from the eigendecomposition and
/// cross-checked against `<ψ(t)|σ0x|ψ(t)>` with a Taylor-propagated `ψ(t)`.
/// The two agree only when `σ0x` anticommutes with `H_T`.
pub fn series_dense(h: &DenseHermitian, psi0: &StateVector, times: &[f64]) -> Result<Vec<f64>> {
    check_dims(h, psi0)?;
    let eig = Eigensystem::new(h);
    let psi = psi0.to_dvector();
    let c = eig.project(&psi);
    let d = eig.project(&apply_probe_x(&psi));
    // <ψ0|σx|E_j> = conj(<E_j|σx ψ0>)
    let weights: Vec<Complex64> = c.iter().zip(d.iter()).map(|(c, d)| d.conj() * c).collect();

    times
        .par_iter()
        .map(|&t| {
            let eigen: Complex64 = weights
                .iter()
                .zip(&eig.energies)
                .map(|(w, &e)| w * Complex64::from_polar(1.0, -2.0 * e * t))
                .sum();
            let evolved = propagate_vec(&h.matrix, &psi, t);
            let flipped = apply_probe_x(&evolved);
            let propagated = evolved.dotc(&flipped).re;
            if (eigen.re - propagated).abs() > CROSS_CHECK_TOL || eigen.im.abs() > CROSS_CHECK_TOL {
                return Err(Error::CrossCheck {
                    t,
                    eigen: eigen.re,
                    propagated,
                });
            }
            Ok(eigen.re)
        })
        .collect()
}

/// One spectral line of the probe signal: frequency `omega` (an eigenvalue
/// of `H_T`) carrying complex weight `g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralLine {
    pub omega: f64,
    pub g: Complex64,
}

/// `A(t) = Σ_j g_j exp(-2i ω_j t)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpectralCoefficients {
    pub lines: Vec<SpectralLine>,
}

impl SpectralCoefficients {
    pub fn new(lines: Vec<SpectralLine>) -> Self {
        Self { lines }
    }

    pub fn evaluate(&self, t: f64) -> Complex64 {
        self.lines
            .iter()
            .map(|l| l.g * Complex64::from_polar(1.0, -2.0 * l.omega * t))
            .sum()
    }

    /// Value of the series at `t = 0`.
    pub fn total_weight(&self) -> Complex64 {
        self.lines.iter().map(|l| l.g).sum()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// `g_j = Σ_i c_i* <E_i|σ0x|E_j> c_j` with `c_i = <E_i|ψ0>`, merging
/// eigenvalues within [`LEVEL_MERGE_TOL`] into one line.
pub fn g_coefficients(h: &DenseHermitian, psi0: &StateVector) -> Result<SpectralCoefficients> {
    check_dims(h, psi0)?;
    let eig = Eigensystem::new(h);
    let psi = psi0.to_dvector();
    let c = eig.project(&psi);
    let d = eig.project(&apply_probe_x(&psi));

    let mut raw: Vec<(f64, Complex64)> = eig
        .energies
        .iter()
        .enumerate()
        .map(|(j, &e)| (e, d[j].conj() * c[j]))
        .collect();
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut lines: Vec<SpectralLine> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for (e, g) in raw {
        match lines.last_mut() {
            Some(line) if e - prev <= LEVEL_MERGE_TOL => line.g += g,
            _ => lines.push(SpectralLine { omega: e, g }),
        }
        prev = e;
    }
    Ok(SpectralCoefficients { lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{field_chain, lift_total, spin_in_field, Axis, PauliString, SpinModel, Term};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn dense_single_z() {
        let m = SpinModel::new(1, vec![Term::new(1.0, PauliString::z_on(&[0]).unwrap())], 0.0)
            .unwrap();
        let d = pauli_to_dense(&m).unwrap();
        assert_eq!(d.matrix(), &DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]));
    }

    #[test]
    fn dense_spin_in_field_total() {
        // H_T = Z0 Z1 + 2 Z0 with qubit 0 as the low bit: diag(3, -3, 1, -1)
        let d = pauli_to_dense(&lift_total(&spin_in_field(1.0, 2.0).unwrap())).unwrap();
        let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![c(3.0), c(-3.0), c(1.0), c(-1.0)]));
        assert_eq!(d.matrix(), &expected);
    }

    #[test]
    fn dense_empty_is_zero() {
        let d = pauli_to_dense(&SpinModel::new(2, vec![], 0.0).unwrap()).unwrap();
        assert!(d.matrix().iter().all(|z| *z == c(0.0)));
    }

    #[test]
    fn dense_y_matrix() {
        let m = SpinModel::new(1, vec![Term::new(1.0, PauliString::from_ops([(0, Axis::Y)]).unwrap())], 0.0)
            .unwrap();
        let d = pauli_to_dense(&m).unwrap();
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(d.matrix()[(1, 0)], i);
        assert_eq!(d.matrix()[(0, 1)], -i);
    }

    #[test]
    fn dense_cap() {
        let m = SpinModel::new(5, vec![], 0.0).unwrap();
        assert!(matches!(
            pauli_to_dense_capped(&m, 4),
            Err(Error::DimensionCap { n_qubits: 5, cap: 4 })
        ));
    }

    #[test]
    fn plus_states() {
        let p1 = plus_state(1);
        assert!(p1.amplitudes().iter().all(|a| (a.re - FRAC_1_SQRT_2).abs() < 1e-15));
        assert!(plus_state(2).amplitudes().iter().all(|a| *a == c(0.5)));
        let p4 = plus_state(4);
        assert_eq!(p4.dim(), 16);
        assert!(p4.amplitudes().iter().all(|a| *a == c(0.25)));
    }

    #[test]
    fn diagonal_series_spin_in_field() {
        let total = lift_total(&spin_in_field(1.0, 2.0).unwrap());
        let a = series_diagonal(&total, &[0.0, PI / 2.0, 0.3]).unwrap();
        assert!((a[0] - 1.0).abs() < 1e-15);
        assert!((a[1] + 1.0).abs() < 1e-14);
        let expected = 0.5 * ((0.6f64).cos() + (1.8f64).cos());
        assert!((a[2] - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_hamiltonian_is_constant() {
        let total = lift_total(&SpinModel::new(2, vec![], 0.0).unwrap());
        let a = series_diagonal(&total, &[-3.0, 0.0, 1.7, 100.0]).unwrap();
        assert!(a.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn dense_matches_diagonal() {
        let total = lift_total(&field_chain(0.7, 4.0).unwrap());
        let times: Vec<f64> = (-10..=10).map(|n| n as f64 * 0.37).collect();
        let fast = series_diagonal(&total, &times).unwrap();
        let h = pauli_to_dense(&total).unwrap();
        let dense = series_dense(&h, &plus_state(4), &times).unwrap();
        for (a, b) in fast.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn dense_at_zero_is_probe_x() {
        let total = lift_total(&spin_in_field(1.0, 2.0).unwrap());
        let h = pauli_to_dense(&total).unwrap();
        let psi = StateVector::new(
            2,
            vec![c(0.6), c(0.0), Complex64::new(0.0, 0.8), c(0.0)],
        )
        .unwrap();
        // σ0x couples 0<->1 and 2<->3, both pairs have a zero partner
        let a = series_dense(&h, &psi, &[0.0]).unwrap();
        assert!(a[0].abs() < 1e-15);
        let a = series_dense(&h, &plus_state(2), &[0.0]).unwrap();
        assert!((a[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenstate_signal_is_flat() {
        // |E> = |00> has <E|σ0x|E> = 0, so A(t) = 0 and every g vanishes
        let total = lift_total(&spin_in_field(1.0, 2.0).unwrap());
        let h = pauli_to_dense(&total).unwrap();
        let psi = StateVector::basis(2, 0);
        let g = g_coefficients(&h, &psi).unwrap();
        let a = series_dense(&h, &psi, &[0.0, 0.4, 2.0]).unwrap();
        for (i, &t) in [0.0, 0.4, 2.0].iter().enumerate() {
            assert!(a[i].abs() < 1e-12);
            assert!((g.evaluate(t).re - a[i]).abs() < 1e-12);
        }
        assert!(g.total_weight().norm() < 1e-12);
    }

    #[test]
    fn g_for_spin_in_field() {
        let total = lift_total(&spin_in_field(1.0, 2.0).unwrap());
        let g = g_coefficients(&pauli_to_dense(&total).unwrap(), &plus_state(2)).unwrap();
        let omegas: Vec<f64> = g.lines.iter().map(|l| l.omega).collect();
        let expected = [-3.0, -1.0, 1.0, 3.0];
        assert_eq!(g.len(), 4);
        for (o, e) in omegas.iter().zip(expected) {
            assert!((o - e).abs() < 1e-12);
        }
        for l in &g.lines {
            assert!((l.g - c(0.25)).norm() < 1e-12);
        }
    }

    #[test]
    fn g_for_chain_follows_multiplicity() {
        let total = lift_total(&field_chain(1.0, 4.0).unwrap());
        let g = g_coefficients(&pauli_to_dense(&total).unwrap(), &plus_state(4)).unwrap();
        // H + 4 levels: 1 (x1), 3 (x4), 5 (x2), 9 (x1); mirrored by -(.)
        let expected = [(-9.0, 1.0), (-5.0, 2.0), (-3.0, 4.0), (-1.0, 1.0), (1.0, 1.0), (3.0, 4.0), (5.0, 2.0), (9.0, 1.0)];
        assert_eq!(g.len(), expected.len());
        for (l, (e, m)) in g.lines.iter().zip(expected) {
            assert!((l.omega - e).abs() < 1e-9);
            assert!((l.g - c(m / 16.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn g_at_basis_state_sums_to_zero() {
        let total = lift_total(&spin_in_field(1.0, 2.0).unwrap());
        let g = g_coefficients(&pauli_to_dense(&total).unwrap(), &StateVector::zero(2)).unwrap();
        assert!(g.total_weight().norm() < 1e-12);
    }

    #[test]
    fn dense_rejects_mismatch_and_non_hermitian() {
        let h = pauli_to_dense(&lift_total(&spin_in_field(1.0, 2.0).unwrap())).unwrap();
        assert!(matches!(
            series_dense(&h, &plus_state(3), &[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 1)] = c(1.0);
        assert!(matches!(DenseHermitian::new(1, m), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn cross_check_catches_non_anticommuting_h() {
        // X0 commutes with σ0x, so the two evaluation routes disagree
        let m = SpinModel::new(1, vec![Term::new(1.0, PauliString::from_ops([(0, Axis::X)]).unwrap())], 0.0)
            .unwrap();
        let h = pauli_to_dense(&m).unwrap();
        assert!(matches!(
            series_dense(&h, &StateVector::zero(1), &[0.7]),
            Err(Error::CrossCheck { .. })
        ));
    }
}
