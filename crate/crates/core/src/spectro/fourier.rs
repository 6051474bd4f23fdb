use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::TimeSeries;
use crate::error::{Error, Result};
use crate::exact::SpectralCoefficients;

/// Phasor recurrence is re-seeded from `sin_cos` this often.
const REANCHOR: usize = 32;

/// `|sin(Δτ/2)|` below which the Dirichlet bracket switches to its series.
const POLE_EPS: f64 = 1e-8;

/// `σ̂(ω)` on a frequency grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `T = N τ` of the series the spectrum came from.
    pub total_time: f64,
    pub tau: f64,
    /// `(τ/2π) √(Σ stderr²)` when the series carries shot errors.
    pub noise_floor: Option<f64>,
    pub window: Window,
}

impl Spectrum {
    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn n_max(&self) -> usize {
        (self.total_time / self.tau).round() as usize
    }

    /// Response of the estimator to a unit line at offset `delta`, scaled
    /// so that the on-line response is 1.
    pub fn line_shape(&self, delta: f64) -> f64 {
        let n_max = self.n_max();
        match self.window {
            Window::Rectangular => {
                dirichlet_bracket(delta, 0.0, self.tau, n_max) / (2 * n_max + 1) as f64
            }
            Window::Hann => {
                let weights = (0..=n_max).map(|n| self.window.weight(n, n_max));
                let norm: f64 = weights.clone().skip(1).sum::<f64>() * 2.0 + 1.0;
                let sum: f64 = weights
                    .enumerate()
                    .map(|(n, w)| {
                        let f = if n == 0 { 1.0 } else { 2.0 };
                        f * w * (n as f64 * delta * self.tau).cos()
                    })
                    .sum();
                sum / norm
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Window {
    /// Plain Riemann sum, the bare Dirichlet kernel.
    #[default]
    Rectangular,
    /// `cos²(π n / (2(N+1)))` taper.
    Hann,
}

impl Window {
    fn weight(self, n: usize, n_max: usize) -> f64 {
        match self {
            Window::Rectangular => 1.0,
            Window::Hann => (PI * n as f64 / (2.0 * (n_max as f64 + 1.0))).cos().powi(2),
        }
    }
}

/// `ω_i = min + i·step` for every `ω_i ≤ max`.
pub fn omega_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) || !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidValue(format!("bad grid step {step}")));
    }
    if max < min {
        return Err(Error::EmptyGrid);
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

/// `[-π/τ, π/τ]` with step `(π/τ)/2000`, twice as wide with `extend`. For
/// long records the step shrinks to `π/(4T)` so every main lobe spans
/// several grid points.
pub fn default_omega_grid(tau: f64, total_time: f64, extend: bool) -> Result<Vec<f64>> {
    let nyquist = PI / tau;
    let half = if extend { 2.0 * nyquist } else { nyquist };
    let step = (nyquist / 2000.0).min(PI / (4.0 * total_time));
    omega_grid(-half, half, step)
}

/// `σ̂(ω) = (τ/2π) Σ_{n=-N}^{N} A_n e^{iωnτ}` for complex samples
/// ordered `n = -N..=N`.
pub fn dft_samples(tau: f64, n_max: usize, samples: &[Complex64], omegas: &[f64]) -> Result<Vec<Complex64>> {
    dft_weighted(tau, n_max, samples, omegas, Window::Rectangular)
}

fn dft_weighted(
    tau: f64,
    n_max: usize,
    samples: &[Complex64],
    omegas: &[f64],
    window: Window,
) -> Result<Vec<Complex64>> {
    if omegas.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if samples.len() != 2 * n_max + 1 {
        return Err(Error::DimensionMismatch {
            expected: 2 * n_max + 1,
            actual: samples.len(),
        });
    }
    let weights: Vec<f64> = (0..=n_max).map(|n| window.weight(n, n_max)).collect();
    // (A_n, A_{-n}) pairs for n = 1..=N
    let pos = &samples[n_max + 1..];
    let neg: Vec<Complex64> = samples[..n_max].iter().rev().copied().collect();
    let scale = tau / (2.0 * PI);
    Ok(omegas
        .par_iter()
        .map(|&omega| {
            let theta = omega * tau;
            let step = Complex64::from_polar(1.0, theta);
            let mut phasor = Complex64::new(1.0, 0.0);
            let mut acc = samples[n_max] * weights[0];
            for n in 1..=n_max {
                phasor = if n % REANCHOR == 0 {
                    Complex64::from_polar(1.0, theta * n as f64)
                } else {
                    phasor * step
                };
                acc += (pos[n - 1] * phasor + neg[n - 1] * phasor.conj()) * weights[n];
            }
            acc * scale
        })
        .collect())
}

fn as_complex(series: &TimeSeries) -> Vec<Complex64> {
    series.values().iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

fn assemble(series: &TimeSeries, omegas: &[f64], values: Vec<Complex64>, window: Window) -> Spectrum {
    let noise_floor = series.stderr().map(|s| {
        series.tau() / (2.0 * PI) * s.iter().map(|e| e * e).sum::<f64>().sqrt()
    });
    Spectrum {
        omegas: omegas.to_vec(),
        values,
        total_time: series.total_time(),
        tau: series.tau(),
        noise_floor,
        window,
    }
}

/// Riemann-sum Fourier estimator of the series on `omegas`.
pub fn dft_spectrum(series: &TimeSeries, omegas: &[f64]) -> Result<Spectrum> {
    dft_spectrum_windowed(series, omegas, Window::Rectangular)
}

pub fn dft_spectrum_windowed(series: &TimeSeries, omegas: &[f64], window: Window) -> Result<Spectrum> {
    let values = dft_weighted(series.tau(), series.n_max(), &as_complex(series), omegas, window)?;
    Ok(assemble(series, omegas, values, window))
}

/// Low part of `2π` in double-double.
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `(ω - center)·τ` reduced into `[-π, π]`, carried in extra precision so
/// the reduction does not lose the small phase next to a pole.
fn reduced_phase(omega: f64, center: f64, tau: f64) -> f64 {
    let (d, d_err) = two_sum(omega, -center);
    let p = d * tau;
    let p_err = d.mul_add(tau, -p) + d_err * tau;
    let k = (p / (2.0 * PI)).round();
    let kt = k * 2.0 * PI;
    let kt_err = k.mul_add(2.0 * PI, -kt);
    let (hi, e) = two_sum(p, -kt);
    hi + (e + p_err - kt_err - k * TAU_LO)
}

/// `Σ_{n=-N}^{N} cos(nΔτ) = 1 + 2 cos(Δ(T+τ)/2) sin(ΔT/2) / sin(Δτ/2)`
/// with `Δ = ω - center`, evaluated as `sin((N+½)y) / sin(y/2)` on the
/// reduced phase `y`.
fn dirichlet_bracket(omega: f64, center: f64, tau: f64, n_max: usize) -> f64 {
    let n = n_max as f64;
    let y = reduced_phase(omega, center, tau);
    let s = (0.5 * y).sin();
    if s.abs() < POLE_EPS {
        // Σ cos(n y) ≈ (2N+1) - y² N(N+1)(2N+1)/6
        return (2.0 * n + 1.0) - y * y * n * (n + 1.0) * (2.0 * n + 1.0) / 6.0;
    }
    ((n + 0.5) * y).sin() / s
}

/// Closed-form value of the Fourier estimator for a signal with spectral
/// coefficients `g`, sampled with step `tau` for `n = -N..=N`.
pub fn kernel_closed_form(g: &SpectralCoefficients, omega: f64, tau: f64, n_max: usize) -> Complex64 {
    let scale = tau / (2.0 * PI);
    g.lines
        .iter()
        .map(|l| l.g * (scale * dirichlet_bracket(omega, 2.0 * l.omega, tau, n_max)))
        .sum()
}

/// Continuous-time limit: `Σ_j g_j sin((ω-2ω_j)T) / (π(ω-2ω_j))`.
pub fn sinc_spectrum(g: &SpectralCoefficients, omega: f64, total_time: f64) -> Complex64 {
    g.lines
        .iter()
        .map(|l| {
            let delta = omega - 2.0 * l.omega;
            let x = delta * total_time;
            let value = if x.abs() < 1e-6 {
                total_time * (1.0 - x * x / 6.0)
            } else {
                x.sin() / delta
            };
            l.g * (value / PI)
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NyquistStatus {
    Ok,
    /// Peaks beyond `π/τ` fold back with this period.
    Alias { alias_period: f64 },
}

/// The signal holds frequencies up to `2·bound`; it is alias-free iff
/// `2·bound < π/τ`.
pub fn nyquist_check(bound: f64, tau: f64) -> NyquistStatus {
    if 2.0 * bound < PI / tau {
        NyquistStatus::Ok
    } else {
        NyquistStatus::Alias {
            alias_period: 2.0 * PI / tau,
        }
    }
}
