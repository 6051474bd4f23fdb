//! Gate-level realization of the probe protocol for diagonal totals.
//!
//! Conventions: `RZ(θ) = exp(-iθZ/2)`, `RY(θ) = exp(-iθY/2)`, qubit 0 is the
//! least significant bit of the statevector index.
//!
//! The protocol is a Hadamard wall, then `exp(-i H_T t)` built from one CNOT
//! ladder + RZ per commuting Z-string, then `RY(-π/2)` on the probe so that
//! `<Z0>` after the rotation equals `<σ0x>` before it.

use std::f64::consts::FRAC_1_SQRT_2;
use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::exact::StateVector;
use crate::io::fmt_real;
use crate::model::{PauliSum, Term, TotalModel};

/// Angle of the probe basis change: `exp(+iπσy/4)` maps `σx` onto `σz`.
pub const PROBE_ROTATION: f64 = -FRAC_PI_2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    Ry(usize, f64),
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
}

impl Gate {
    fn max_qubit(&self) -> usize {
        match *self {
            Gate::H(q) | Gate::Ry(q, _) | Gate::Rz(q, _) => q,
            Gate::Cnot { control, target } => control.max(target),
        }
    }

    fn apply(&self, amps: &mut [Complex64]) {
        match *self {
            Gate::H(q) => {
                let s = FRAC_1_SQRT_2;
                for_pairs(amps, q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * s;
                    *b = (x - y) * s;
                });
            }
            Gate::Ry(q, theta) => {
                let (sin, cos) = (theta / 2.0).sin_cos();
                for_pairs(amps, q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = x * cos - y * sin;
                    *b = x * sin + y * cos;
                });
            }
            Gate::Rz(q, theta) => {
                let lo = Complex64::from_polar(1.0, -theta / 2.0);
                let hi = lo.conj();
                for_pairs(amps, q, |a, b| {
                    *a *= lo;
                    *b *= hi;
                });
            }
            Gate::Cnot { control, target } => {
                let cmask = 1 << control;
                let tmask = 1 << target;
                for k in 0..amps.len() {
                    if k & cmask != 0 && k & tmask == 0 {
                        amps.swap(k, k | tmask);
                    }
                }
            }
        }
    }
}

/// Calls `f(|..0_q..>, |..1_q..>)` for every amplitude pair differing in bit `q`.
fn for_pairs<F: FnMut(&mut Complex64, &mut Complex64)>(amps: &mut [Complex64], q: usize, mut f: F) {
    let stride = 1 << q;
    for block in amps.chunks_mut(stride << 1) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            f(a, b);
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::Ry(q, a) => write!(f, "RY {q},{}", fmt_real(a)),
            Gate::Rz(q, a) => write!(f, "RZ {q},{}", fmt_real(a)),
            Gate::Cnot { control, target } => write!(f, "CNOT {control},{target}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    measured_qubit: usize,
}

impl Circuit {
    pub fn new(width: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            if g.max_qubit() >= width {
                return Err(Error::InvalidGate(format!("{g} exceeds width {width}")));
            }
            if let Gate::Cnot { control, target } = *g {
                if control == target {
                    return Err(Error::InvalidGate(format!("{g}: control equals target")));
                }
            }
        }
        Ok(Self {
            width,
            gates,
            measured_qubit: 0,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn measured_qubit(&self) -> usize {
        self.measured_qubit
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count()
    }
}

/// One gate per line: `KIND q[,q2][,angle]`.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Total terms in canonical order: by sorted qubit tuple, then coefficient.
fn canonical_terms(total: &TotalModel) -> Result<Vec<&Term>> {
    if !total.is_diagonal() {
        return Err(Error::NonDiagonal);
    }
    let mut terms: Vec<&Term> = total.terms().iter().collect();
    terms.sort_by(|a, b| {
        a.string
            .qubits()
            .cmp(&b.string.qubits())
            .then(a.coefficient.total_cmp(&b.coefficient))
    });
    Ok(terms)
}

/// `exp(-i H_T t)` as CNOT ladders and RZ rotations. All terms commute, so
/// the product is exact.
pub fn compile_evolution(total: &TotalModel, t: f64) -> Result<Circuit> {
    let mut gates = Vec::new();
    for term in canonical_terms(total)? {
        let qubits = term.string.qubits();
        let Some((&last, _)) = qubits.split_last() else {
            continue;
        };
        let ladder: Vec<Gate> = qubits
            .windows(2)
            .map(|w| Gate::Cnot {
                control: w[0],
                target: w[1],
            })
            .collect();
        gates.extend(ladder.iter().copied());
        gates.push(Gate::Rz(last, 2.0 * term.coefficient * t));
        gates.extend(ladder.iter().rev().copied());
    }
    Circuit::new(total.n_qubits(), gates)
}

/// Hadamard wall, evolution for time `t`, probe basis change.
pub fn compile_protocol(total: &TotalModel, t: f64) -> Result<Circuit> {
    let width = total.n_qubits();
    let evolution = compile_evolution(total, t)?;
    let mut gates: Vec<Gate> = (0..width).map(Gate::H).collect();
    gates.extend(evolution.gates);
    gates.push(Gate::Ry(0, PROBE_ROTATION));
    Circuit::new(width, gates)
}

/// Applies the gates in order to `initial`, or to `|0...0>` when `None`.
pub fn run_statevector(circuit: &Circuit, initial: Option<&StateVector>) -> Result<StateVector> {
    let mut state = match initial {
        Some(s) if s.n_qubits() != circuit.width => {
            return Err(Error::DimensionMismatch {
                expected: circuit.width,
                actual: s.n_qubits(),
            })
        }
        Some(s) => s.clone(),
        None => StateVector::zero(circuit.width),
    };
    let amps = state.amplitudes_mut();
    for g in &circuit.gates {
        g.apply(amps);
    }
    Ok(state)
}

/// Probability that qubit 0 reads 0.
pub fn probe_zero_probability(state: &StateVector) -> f64 {
    state
        .amplitudes()
        .iter()
        .step_by(2)
        .map(|a| a.norm_sqr())
        .sum()
}

/// `<Z0> = P(0) - P(1)` on the probe.
pub fn expectation_z0(state: &StateVector) -> f64 {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, a)| if k & 1 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
        .sum()
}

/// Exact protocol readout at time `t`.
pub fn protocol_expectation(total: &TotalModel, t: f64) -> Result<f64> {
    let circuit = compile_protocol(total, t)?;
    Ok(expectation_z0(&run_statevector(&circuit, None)?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShotResult {
    pub shots: u64,
    pub count0: u64,
    pub estimate: f64,
    pub stderr: f64,
}

impl ShotResult {
    pub fn from_counts(shots: u64, count0: u64) -> Self {
        let estimate = 2.0 * count0 as f64 / shots as f64 - 1.0;
        let stderr = ((1.0 - estimate * estimate).max(0.0) / shots as f64).sqrt();
        Self {
            shots,
            count0,
            estimate,
            stderr,
        }
    }
}

/// Draws the probe-0 count from `Binomial(shots, P(0))` with a seeded generator.
pub fn sample_shots(state: &StateVector, shots: u64, seed: u64) -> Result<ShotResult> {
    if shots == 0 {
        return Err(Error::InvalidValue("shots must be at least 1".into()));
    }
    let p0 = probe_zero_probability(state).clamp(0.0, 1.0);
    sample_probability(p0, shots, seed)
}

pub(crate) fn sample_probability(p0: f64, shots: u64, seed: u64) -> Result<ShotResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Binomial::new(shots, p0).map_err(|e| Error::InvalidValue(e.to_string()))?;
    Ok(ShotResult::from_counts(shots, dist.sample(&mut rng)))
}
