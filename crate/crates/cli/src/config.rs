use std::f64::consts::PI;
use std::path::PathBuf;

use spinprobe::spectro::{default_omega_grid, omega_grid, Window};
use spinprobe::Engine;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum EngineKind {
    Exact,
    Dense,
    Shots,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model_path: PathBuf,
    pub engine: EngineKind,
    pub tau: f64,
    pub n_max: usize,
    pub shots: u64,
    pub seed: u64,
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub omega_step: Option<f64>,
    pub threshold: Option<f64>,
    pub min_separation: Option<f64>,
    pub window: Window,
    pub oracle_tolerance: f64,
    pub output_dir: PathBuf,
    pub mirror: bool,
    pub extend_past_nyquist: bool,
    pub oracle: bool,
    pub strict: bool,
}

impl RunConfig {
    /// Exact engine on the `τ = π/12`, `N = 96` grid.
    pub fn new(model_path: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            model_path: model_path.into(),
            engine: EngineKind::Exact,
            tau: PI / 12.0,
            n_max: 96,
            shots: 4096,
            seed: 0,
            omega_min: None,
            omega_max: None,
            omega_step: None,
            threshold: None,
            min_separation: None,
            window: Window::Rectangular,
            oracle_tolerance: 0.05,
            output_dir: output_dir.into(),
            mirror: false,
            extend_past_nyquist: false,
            oracle: false,
            strict: false,
        }
    }

    pub fn engine(&self) -> Engine {
        match self.engine {
            EngineKind::Exact => Engine::Exact,
            EngineKind::Dense => Engine::Dense,
            EngineKind::Shots => Engine::Shots {
                shots: self.shots,
                seed: self.seed,
            },
        }
    }

    /// Explicit bounds override the default grid piecewise.
    pub fn omega_grid(&self) -> Result<Vec<f64>, CliError> {
        let default = default_omega_grid(self.tau, self.n_max as f64 * self.tau, self.extend_past_nyquist)?;
        let min = self.omega_min.unwrap_or(default[0]);
        let max = self.omega_max.unwrap_or(default[default.len() - 1]);
        let step = self.omega_step.unwrap_or(default[1] - default[0]);
        if step.is_nan() || step <= 0.0 {
            return Err(CliError::Validation(format!("omega step must be positive, got {step}")));
        }
        if max < min {
            return Err(CliError::Validation(format!("empty omega grid [{min}, {max}]")));
        }
        let grid = omega_grid(min, max, step)?;
        if grid.len() < 3 {
            return Err(CliError::Validation("omega grid needs at least 3 points".into()));
        }
        Ok(grid)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(CliError::Validation(format!("tau must be positive, got {}", self.tau)));
        }
        if self.n_max < 1 {
            return Err(CliError::Validation("nmax must be at least 1".into()));
        }
        if self.engine == EngineKind::Shots && self.shots < 1 {
            return Err(CliError::Validation("shots must be at least 1".into()));
        }
        if let Some(t) = self.threshold {
            if t.is_nan() || t <= 0.0 {
                return Err(CliError::Validation(format!("threshold must be positive, got {t}")));
            }
        }
        if let Some(m) = self.min_separation {
            if m.is_nan() || m < 0.0 {
                return Err(CliError::Validation(format!("min separation must be non-negative, got {m}")));
            }
        }
        if self.oracle_tolerance.is_nan() || self.oracle_tolerance <= 0.0 {
            return Err(CliError::Validation("oracle tolerance must be positive".into()));
        }
        if self.strict && !self.oracle {
            return Err(CliError::Validation("--strict needs --oracle".into()));
        }
        self.omega_grid().map(|_| ())
    }
}
