//! Weighted Pauli-string Hamiltonians and the probe-extended total model.
//!
//! All coefficients are angular frequencies (ħ = 1). Qubit 0 of a
//! [`TotalModel`] is the probe; inner qubit `i` sits at total index `i + 1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::io::fmt_real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        })
    }
}

/// Tensor product of single-qubit Paulis; absent qubits carry identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PauliString {
    axes: BTreeMap<usize, Axis>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a string from `(qubit, axis)` pairs. Fails on a repeated qubit.
    pub fn from_ops<I: IntoIterator<Item = (usize, Axis)>>(ops: I) -> Result<Self> {
        let mut axes = BTreeMap::new();
        for (qubit, axis) in ops {
            if axes.insert(qubit, axis).is_some() {
                return Err(Error::DuplicateQubit { term: 0, qubit });
            }
        }
        Ok(Self { axes })
    }

    /// Z on every listed qubit.
    pub fn z_on(qubits: &[usize]) -> Result<Self> {
        Self::from_ops(qubits.iter().map(|&q| (q, Axis::Z)))
    }

    pub fn is_identity(&self) -> bool {
        self.axes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }

    pub fn axis(&self, qubit: usize) -> Option<Axis> {
        self.axes.get(&qubit).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Axis)> + '_ {
        self.axes.iter().map(|(&q, &a)| (q, a))
    }

    /// Qubits touched by the string, ascending.
    pub fn qubits(&self) -> Vec<usize> {
        self.axes.keys().copied().collect()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.axes.keys().next_back().copied()
    }

    pub fn is_diagonal(&self) -> bool {
        self.axes.values().all(|&a| a == Axis::Z)
    }

    /// Bits flipped by the string (X and Y positions).
    pub fn flip_mask(&self) -> usize {
        self.iter()
            .filter(|(_, a)| *a != Axis::Z)
            .fold(0, |m, (q, _)| m | (1 << q))
    }

    /// Bits contributing a `(-1)^bit` sign (Y and Z positions).
    pub fn sign_mask(&self) -> usize {
        self.iter()
            .filter(|(_, a)| *a != Axis::X)
            .fold(0, |m, (q, _)| m | (1 << q))
    }

    pub fn y_count(&self) -> usize {
        self.axes.values().filter(|&&a| a == Axis::Y).count()
    }

    fn shifted(&self, by: usize) -> Self {
        Self {
            axes: self.axes.iter().map(|(&q, &a)| (q + by, a)).collect(),
        }
    }

    fn with(&self, qubit: usize, axis: Axis) -> Self {
        let mut axes = self.axes.clone();
        axes.insert(qubit, axis);
        Self { axes }
    }

    fn without(&self, qubit: usize) -> Self {
        let mut axes = self.axes.clone();
        axes.remove(&qubit);
        Self { axes }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        for (i, (q, a)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}{q}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coefficient: f64,
    pub string: PauliString,
}

impl Term {
    pub fn new(coefficient: f64, string: PauliString) -> Self {
        Self {
            coefficient,
            string,
        }
    }
}

/// Anything that can be read as a sum of weighted Pauli strings.
pub trait PauliSum {
    fn n_qubits(&self) -> usize;
    fn terms(&self) -> &[Term];

    fn is_diagonal(&self) -> bool {
        self.terms().iter().all(|t| t.string.is_diagonal())
    }
}

/// A Hamiltonian `H` on `n_qubits` qubits plus the energy shift `C`.
///
/// The shift is not part of [`PauliSum::terms`]; it only enters through
/// [`lift_total`] and the `include_shift` flag of [`diagonal_energies`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpinModel {
    n_qubits: usize,
    terms: Vec<Term>,
    shift: f64,
}

impl SpinModel {
    pub fn new(n_qubits: usize, terms: Vec<Term>, shift: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidQubitCount(0));
        }
        if !shift.is_finite() || shift < 0.0 {
            return Err(Error::InvalidValue(format!(
                "shift must be finite and non-negative, got {shift}"
            )));
        }
        for (i, term) in terms.iter().enumerate() {
            if !term.coefficient.is_finite() {
                return Err(Error::InvalidValue(format!(
                    "term {i}: coefficient is not finite"
                )));
            }
            if let Some(q) = term.string.max_qubit() {
                if q >= n_qubits {
                    return Err(Error::IndexOutOfRange {
                        term: i,
                        qubit: q as i64,
                        n_qubits,
                    });
                }
            }
        }
        Ok(Self {
            n_qubits,
            terms,
            shift,
        })
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn with_shift(&self, shift: f64) -> Result<Self> {
        Self::new(self.n_qubits, self.terms.clone(), shift)
    }

    /// Serializes to the TOML model format; reals carry 17 significant digits.
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("qubits = {}\n", self.n_qubits));
        out.push_str(&format!("shift = {}\n", fmt_real(self.shift)));
        for term in &self.terms {
            out.push_str("\n[[terms]]\n");
            out.push_str(&format!("coeff = {}\n", fmt_real(term.coefficient)));
            let ops: Vec<String> = term
                .string
                .iter()
                .map(|(q, a)| format!("{{ qubit = {q}, axis = \"{a}\" }}"))
                .collect();
            out.push_str(&format!("ops = [{}]\n", ops.join(", ")));
        }
        out
    }
}

impl PauliSum for SpinModel {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn terms(&self) -> &[Term] {
        &self.terms
    }
}

/// `H_T = Z_0 (H + C)` on `N + 1` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalModel {
    inner: SpinModel,
    terms: Vec<Term>,
}

impl TotalModel {
    pub fn inner(&self) -> &SpinModel {
        &self.inner
    }

    pub fn shift(&self) -> f64 {
        self.inner.shift
    }

    /// Recovers the inner terms by stripping `Z_0` and dropping the shift term.
    pub fn strip_probe(&self) -> Vec<Term> {
        let skip_shift = usize::from(self.inner.shift != 0.0);
        self.terms[..self.terms.len() - skip_shift]
            .iter()
            .map(|t| {
                let rest = t.string.without(0);
                let axes = rest.axes.iter().map(|(&q, &a)| (q - 1, a)).collect();
                Term::new(t.coefficient, PauliString { axes })
            })
            .collect()
    }

    /// The total as a plain shift-free model on `N + 1` qubits.
    pub fn as_model(&self) -> SpinModel {
        SpinModel {
            n_qubits: self.n_qubits(),
            terms: self.terms.clone(),
            shift: 0.0,
        }
    }
}

impl PauliSum for TotalModel {
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits + 1
    }

    fn terms(&self) -> &[Term] {
        &self.terms
    }
}

/// Each inner term `(a, P)` becomes `(a, Z_0 ⊗ P)` with inner indices
/// moved up by one; a non-zero shift adds `(C, Z_0)` last.
pub fn lift_total(model: &SpinModel) -> TotalModel {
    let mut terms: Vec<Term> = model
        .terms
        .iter()
        .map(|t| Term::new(t.coefficient, t.string.shifted(1).with(0, Axis::Z)))
        .collect();
    if model.shift != 0.0 {
        terms.push(Term::new(
            model.shift,
            PauliString::identity().with(0, Axis::Z),
        ));
    }
    TotalModel {
        inner: model.clone(),
        terms,
    }
}

/// Computational-basis energies for a Z-only model, indexed by basis state.
///
/// Entry `k` sums `a * prod(s_i)` with `s_i = +1` when bit `i` of `k` is 0.
/// Qubit 0 is the least significant bit.
pub fn diagonal_energies<M: PauliSum + ?Sized>(model: &M, shift: Option<f64>) -> Result<Vec<f64>> {
    if !model.is_diagonal() {
        return Err(Error::NonDiagonal);
    }
    let masks: Vec<(f64, usize)> = model
        .terms()
        .iter()
        .map(|t| (t.coefficient, t.string.sign_mask()))
        .collect();
    let offset = shift.unwrap_or(0.0);
    let dim = 1usize << model.n_qubits();
    Ok((0..dim)
        .map(|k| {
            masks.iter().fold(offset, |acc, &(a, m)| {
                if (k & m).count_ones() % 2 == 0 {
                    acc + a
                } else {
                    acc - a
                }
            })
        })
        .collect())
}

/// Diagonal energies of `H`, optionally with the model's own shift added.
pub fn model_energies(model: &SpinModel, include_shift: bool) -> Result<Vec<f64>> {
    diagonal_energies(model, include_shift.then_some(model.shift))
}

/// `Σ|a| + C`, an upper bound on the largest `|eigenvalue|` of `H_T`.
pub fn spectral_bound(model: &SpinModel) -> f64 {
    model.terms.iter().map(|t| t.coefficient.abs()).sum::<f64>() + model.shift
}

/// A shift that makes every level of `H + C` strictly positive.
pub fn suggest_shift(model: &SpinModel, margin: f64) -> f64 {
    model.terms.iter().map(|t| t.coefficient.abs()).sum::<f64>() + margin
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    qubits: i64,
    #[serde(default)]
    shift: Option<Real>,
    #[serde(default)]
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coeff: Real,
    #[serde(default)]
    ops: Vec<RawOp>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOp {
    qubit: i64,
    axis: Axis,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Real {
    Int(i64),
    Float(f64),
}

impl Real {
    fn value(&self) -> f64 {
        match *self {
            Real::Int(i) => i as f64,
            Real::Float(f) => f,
        }
    }
}

fn line_col(document: &str, offset: usize) -> (usize, usize) {
    let prefix = &document[..offset.min(document.len())];
    let line = prefix.matches('\n').count() + 1;
    let column = prefix.len() - prefix.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

/// Parses and validates a TOML model description.
pub fn parse_model(document: &str) -> Result<SpinModel> {
    let raw: RawModel = toml::from_str(document).map_err(|e| {
        let (line, column) = e
            .span()
            .map_or((0, 0), |span| line_col(document, span.start));
        Error::Syntax {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    if raw.qubits < 1 {
        return Err(Error::InvalidQubitCount(raw.qubits));
    }
    let n_qubits = raw.qubits as usize;
    let mut terms = Vec::with_capacity(raw.terms.len());
    for (i, rt) in raw.terms.iter().enumerate() {
        let mut ops = Vec::with_capacity(rt.ops.len());
        for op in &rt.ops {
            if op.qubit < 0 || op.qubit as usize >= n_qubits {
                return Err(Error::IndexOutOfRange {
                    term: i,
                    qubit: op.qubit,
                    n_qubits,
                });
            }
            ops.push((op.qubit as usize, op.axis));
        }
        let string = PauliString::from_ops(ops).map_err(|e| match e {
            Error::DuplicateQubit { qubit, .. } => Error::DuplicateQubit { term: i, qubit },
            other => other,
        })?;
        terms.push(Term::new(rt.coeff.value(), string));
    }
    SpinModel::new(
        n_qubits,
        terms,
        raw.shift.as_ref().map_or(0.0, Real::value),
    )
}

/// The single spin in a field, `H = ω Z_1`.
pub fn spin_in_field(omega: f64, shift: f64) -> Result<SpinModel> {
    SpinModel::new(1, vec![Term::new(omega, PauliString::z_on(&[0])?)], shift)
}

/// Three-spin open chain in a longitudinal field with equal couplings:
/// `J(Z1Z2 + Z2Z3 + Z1 + Z2 + Z3)`.
pub fn field_chain(j: f64, shift: f64) -> Result<SpinModel> {
    let strings: [&[usize]; 5] = [&[0, 1], &[1, 2], &[0], &[1], &[2]];
    let terms = strings
        .iter()
        .map(|qs| PauliString::z_on(qs).map(|s| Term::new(j, s)))
        .collect::<Result<Vec<_>>>()?;
    SpinModel::new(3, terms, shift)
}

/// Ising couplings given as a full symmetric matrix under the
/// `½ Σ_{i,j} J_ij Z_i Z_j` convention; each unordered pair becomes one
/// `Z_i Z_j` term with coefficient `J_ij`, diagonal entries are ignored.
pub fn ising_from_symmetric(couplings: &[Vec<f64>], shift: f64) -> Result<SpinModel> {
    let n = couplings.len();
    let mut terms = Vec::new();
    for (i, row) in couplings.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: row.len(),
            });
        }
        for (j, &jij) in row.iter().enumerate().skip(i + 1) {
            if (jij - couplings[j][i]).abs() > 1e-12 {
                return Err(Error::InvalidValue(format!(
                    "coupling matrix not symmetric at ({i}, {j})"
                )));
            }
            if jij != 0.0 {
                terms.push(Term::new(0.5 * (jij + couplings[j][i]), PauliString::z_on(&[i, j])?));
            }
        }
    }
    SpinModel::new(n.max(1), terms, shift)
}
