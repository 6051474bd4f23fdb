//! Sampling the probe signal on a symmetric time grid and turning it into
//! energy levels.

mod fourier;
mod peaks;

pub use fourier::{
    default_omega_grid, dft_samples, dft_spectrum, dft_spectrum_windowed, kernel_closed_form,
    nyquist_check, omega_grid, sinc_spectrum, NyquistStatus, Spectrum, Window,
};
pub use peaks::{
    alias_readings, default_min_separation, default_threshold, find_peaks, peaks_to_energies,
    AliasReading, Peak, PeakReport,
};

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::circuit::{compile_protocol, probe_zero_probability, run_statevector, sample_probability};
use crate::error::{Error, Result};
use crate::exact::{pauli_to_dense, plus_state, series_dense, DiagonalLevels};
use crate::model::{spectral_bound, PauliSum, TotalModel};

/// `A(t_n)` on `t_n = nτ`, `n = -N..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    tau: f64,
    n_max: usize,
    values: Vec<f64>,
    stderr: Option<Vec<f64>>,
}

impl TimeSeries {
    pub fn new(tau: f64, n_max: usize, values: Vec<f64>, stderr: Option<Vec<f64>>) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidValue(format!("tau must be positive, got {tau}")));
        }
        if n_max == 0 {
            return Err(Error::InvalidValue("n_max must be at least 1".into()));
        }
        let len = 2 * n_max + 1;
        if values.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                actual: values.len(),
            });
        }
        if let Some(s) = &stderr {
            if s.len() != len {
                return Err(Error::DimensionMismatch {
                    expected: len,
                    actual: s.len(),
                });
            }
        }
        for (i, &v) in values.iter().enumerate() {
            let slack = stderr.as_ref().map_or(0.0, |s| 3.0 * s[i]);
            if !v.is_finite() || v.abs() > 1.0 + slack + 1e-9 {
                return Err(Error::InvalidValue(format!(
                    "sample {} = {v} is not a valid ±1 expectation",
                    i as i64 - n_max as i64
                )));
            }
        }
        Ok(Self {
            tau,
            n_max,
            values,
            stderr,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `T = N τ`.
    pub fn total_time(&self) -> f64 {
        self.n_max as f64 * self.tau
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn stderr(&self) -> Option<&[f64]> {
        self.stderr.as_deref()
    }

    /// Sample indices `-N..=N`, aligned with [`Self::values`].
    pub fn indices(&self) -> impl Iterator<Item = i64> {
        let n = self.n_max as i64;
        -n..=n
    }

    pub fn time(&self, n: i64) -> f64 {
        n as f64 * self.tau
    }

    pub fn value(&self, n: i64) -> f64 {
        self.values[(n + self.n_max as i64) as usize]
    }
}

/// How `A(t)` is obtained for each grid time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Diagonal enumeration (Z-only models).
    Exact,
    /// Dense eigendecomposition with a propagation cross-check.
    Dense,
    /// Compiled circuit, statevector simulation, binomial shot sampling.
    Shots { shots: u64, seed: u64 },
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Per-sample seed so that each grid time draws from its own stream.
pub fn sample_seed(seed: u64, n: i64) -> u64 {
    splitmix64(seed ^ splitmix64(n as u64))
}

/// Samples `A(nτ)` for `n = -N..=N` from `total` started in `|+...+>`.
///
/// With `mirror`, only `n ≥ 0` is evaluated and reflected, using `A(-t) = A(t)`.
pub fn sample_series(
    engine: Engine,
    total: &TotalModel,
    tau: f64,
    n_max: usize,
    mirror: bool,
) -> Result<TimeSeries> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidValue(format!("tau must be positive, got {tau}")));
    }
    if n_max == 0 {
        return Err(Error::InvalidValue("n_max must be at least 1".into()));
    }
    let n = n_max as i64;
    let indices: Vec<i64> = if mirror { (0..=n).collect() } else { (-n..=n).collect() };
    let times: Vec<f64> = indices.iter().map(|&k| k as f64 * tau).collect();

    let (raw, raw_err): (Vec<f64>, Option<Vec<f64>>) = match engine {
        Engine::Exact => {
            let levels = DiagonalLevels::new(total)?;
            (times.par_iter().map(|&t| levels.expectation(t)).collect(), None)
        }
        Engine::Dense => {
            let h = pauli_to_dense(total)?;
            (series_dense(&h, &plus_state(total.n_qubits()), &times)?, None)
        }
        Engine::Shots { shots, seed } => {
            if shots == 0 {
                return Err(Error::InvalidValue("shots must be at least 1".into()));
            }
            if !total.is_diagonal() {
                return Err(Error::NonDiagonal);
            }
            let results = indices
                .par_iter()
                .zip(times.par_iter())
                .map(|(&k, &t)| {
                    let state = run_statevector(&compile_protocol(total, t)?, None)?;
                    sample_probability(
                        probe_zero_probability(&state).clamp(0.0, 1.0),
                        shots,
                        sample_seed(seed, k),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            (
                results.iter().map(|r| r.estimate).collect(),
                Some(results.iter().map(|r| r.stderr).collect()),
            )
        }
    };

    if mirror {
        let reflect = |half: &[f64]| -> Vec<f64> {
            half.iter().rev().chain(half[1..].iter()).copied().collect()
        };
        TimeSeries::new(tau, n_max, reflect(&raw), raw_err.as_deref().map(reflect))
    } else {
        TimeSeries::new(tau, n_max, raw, raw_err)
    }
}

/// Knobs for [`detect`]; `None` picks the defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DetectOptions {
    pub threshold: Option<f64>,
    pub min_separation: Option<f64>,
    pub window: Window,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Detection {
    pub spectrum: Spectrum,
    pub report: PeakReport,
}

/// Spectrum, peaks and level readout for a series sampled from `total`.
///
/// When the grid step cannot resolve `2·bound` the report gets a warning and
/// every alias reading of each positive peak.
pub fn detect(
    series: &TimeSeries,
    total: &TotalModel,
    omegas: &[f64],
    options: DetectOptions,
) -> Result<Detection> {
    let spectrum = dft_spectrum_windowed(series, omegas, options.window)?;
    let t = series.total_time();
    let threshold = options
        .threshold
        .unwrap_or_else(|| default_threshold(t, total.inner().n_qubits()));
    let min_sep = options.min_separation.unwrap_or_else(|| default_min_separation(t));
    let peaks = find_peaks(&spectrum, threshold, min_sep)?;

    let step = if omegas.len() > 1 { omegas[1] - omegas[0] } else { 0.0 };
    let tolerance = 2.0 * step + 1e-9;
    let shift = total.shift();
    let mut report = peaks_to_energies(&peaks, shift, tolerance);
    report.noise_floor = spectrum.noise_floor;

    let bound = spectral_bound(total.inner());
    if let NyquistStatus::Alias { alias_period } = nyquist_check(bound, series.tau()) {
        report.warnings.push(format!(
            "2·bound = {:.6} reaches past π/τ = {:.6}; peaks alias with period {:.6}",
            2.0 * bound,
            PI / series.tau(),
            alias_period
        ));
        report.alias_readings = alias_readings(&peaks, alias_period, 2.0 * bound, shift, tolerance);
    }
    Ok(Detection { spectrum, report })
}
