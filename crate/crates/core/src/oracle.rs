//! Brute-force ground truth and grading of recovered levels.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{pauli_to_dense, LEVEL_MERGE_TOL};
use crate::model::{model_energies, PauliSum, SpinModel};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    pub multiplicity: usize,
}

fn merge(mut values: Vec<f64>) -> Vec<Level> {
    values.sort_by(f64::total_cmp);
    let mut levels: Vec<Level> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for v in values {
        match levels.last_mut() {
            Some(l) if v - prev <= LEVEL_MERGE_TOL => l.multiplicity += 1,
            _ => levels.push(Level {
                energy: v,
                multiplicity: 1,
            }),
        }
        prev = v;
    }
    levels
}

/// Distinct eigenvalues of `H` (shift excluded), ascending, with
/// multiplicities. Z-only models are enumerated, others diagonalized densely.
pub fn brute_energies(model: &SpinModel) -> Result<Vec<Level>> {
    let values = if model.is_diagonal() {
        model_energies(model, false)?
    } else {
        pauli_to_dense(model)?.eigenvalues()
    };
    Ok(merge(values))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Match {
    pub oracle: f64,
    pub recovered: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub matched: Vec<Match>,
    pub missed: Vec<f64>,
    pub spurious: Vec<f64>,
    pub tolerance: f64,
    /// Recovered values explained only as alias images of an already matched level.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alias_images: Vec<Match>,
}

impl ComparisonReport {
    pub fn is_clean(&self) -> bool {
        self.missed.is_empty() && self.spurious.is_empty()
    }
}

/// Greedy one-to-one matching by ascending `|Δ|` within `tol`.
pub fn compare(recovered: &[f64], oracle: &[f64], tol: f64) -> ComparisonReport {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (ri, &r) in recovered.iter().enumerate() {
        for (oi, &o) in oracle.iter().enumerate() {
            let d = (r - o).abs();
            if d <= tol {
                pairs.push((d, oi, ri));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut oracle_used = vec![false; oracle.len()];
    let mut recovered_used = vec![false; recovered.len()];
    let mut matched = Vec::new();
    for (d, oi, ri) in pairs {
        if oracle_used[oi] || recovered_used[ri] {
            continue;
        }
        oracle_used[oi] = true;
        recovered_used[ri] = true;
        matched.push(Match {
            oracle: oracle[oi],
            recovered: recovered[ri],
            delta: d,
        });
    }
    matched.sort_by(|a, b| a.oracle.total_cmp(&b.oracle));
    ComparisonReport {
        matched,
        missed: pick_unused(oracle, &oracle_used),
        spurious: pick_unused(recovered, &recovered_used),
        tolerance: tol,
        alias_images: Vec::new(),
    }
}

fn pick_unused(values: &[f64], used: &[bool]) -> Vec<f64> {
    values
        .iter()
        .zip(used)
        .filter(|(_, &u)| !u)
        .map(|(&v, _)| v)
        .collect()
}

/// Matching when each recovered peak has several possible readings (alias
/// folds). The first pass matches readings one-to-one like [`compare`];
/// a leftover peak whose readings hit an already matched level is an alias
/// image, anything else is spurious.
pub fn compare_aliased(readings: &[Vec<f64>], oracle: &[f64], tol: f64) -> ComparisonReport {
    let mut pairs: Vec<(f64, usize, usize, f64)> = Vec::new();
    for (ri, cands) in readings.iter().enumerate() {
        for &r in cands {
            for (oi, &o) in oracle.iter().enumerate() {
                let d = (r - o).abs();
                if d <= tol {
                    pairs.push((d, oi, ri, r));
                }
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut oracle_used = vec![false; oracle.len()];
    let mut recovered_used = vec![false; readings.len()];
    let mut matched = Vec::new();
    for &(d, oi, ri, r) in &pairs {
        if oracle_used[oi] || recovered_used[ri] {
            continue;
        }
        oracle_used[oi] = true;
        recovered_used[ri] = true;
        matched.push(Match {
            oracle: oracle[oi],
            recovered: r,
            delta: d,
        });
    }
    let mut alias_images = Vec::new();
    for &(d, oi, ri, r) in &pairs {
        if !recovered_used[ri] {
            recovered_used[ri] = true;
            alias_images.push(Match {
                oracle: oracle[oi],
                recovered: r,
                delta: d,
            });
        }
    }
    matched.sort_by(|a, b| a.oracle.total_cmp(&b.oracle));
    alias_images.sort_by(|a, b| a.oracle.total_cmp(&b.oracle));
    let spurious = readings
        .iter()
        .zip(&recovered_used)
        .filter(|(_, &u)| !u)
        .map(|(c, _)| c.first().copied().unwrap_or(f64::NAN))
        .collect();
    ComparisonReport {
        matched,
        missed: pick_unused(oracle, &oracle_used),
        spurious,
        tolerance: tol,
        alias_images,
    }
}
