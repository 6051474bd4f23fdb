use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinprobe::spectro::Window;

use crate::config::{EngineKind, RunConfig};
use crate::error::CliError;
use crate::expr::parse_real;

#[derive(Debug, Parser)]
#[command(name = "spinprobe", version, about = "Energy levels of spin Hamiltonians from a probe-spin signal")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the probe signal, transform it and write the artifacts.
    Run(RunArgs),
    /// Check a model file and print its spectral bound.
    Validate(ValidateArgs),
    /// Render plot.svg from a spectrum CSV and a peaks JSON.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Rect,
    Hann,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub engine: EngineKind,
    /// Sampling step, e.g. `pi/12`.
    #[arg(long, default_value = "pi/12")]
    pub tau: String,
    #[arg(long, default_value_t = 96)]
    pub nmax: usize,
    #[arg(long, default_value_t = 4096)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub omega_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega_max: Option<String>,
    #[arg(long)]
    pub omega_step: Option<String>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Minimum distance between reported peaks; defaults to 4π/T.
    #[arg(long)]
    pub min_separation: Option<String>,
    #[arg(long, value_enum, default_value = "rect")]
    pub window: WindowArg,
    /// Evaluate only t ≥ 0 and reflect.
    #[arg(long)]
    pub mirror: bool,
    /// Double the ω range to show alias images.
    #[arg(long)]
    pub extend_past_nyquist: bool,
    /// Compare recovered levels with brute-force diagonalization.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 0.05)]
    pub oracle_tol: f64,
    /// Exit 3 when the oracle comparison is not clean.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

impl RunArgs {
    pub fn to_config(&self) -> Result<RunConfig, CliError> {
        let opt = |s: &Option<String>| s.as_deref().map(parse_real).transpose();
        let config = RunConfig {
            model_path: self.model.clone(),
            engine: self.engine,
            tau: parse_real(&self.tau)?,
            n_max: self.nmax,
            shots: self.shots,
            seed: self.seed,
            omega_min: opt(&self.omega_min)?,
            omega_max: opt(&self.omega_max)?,
            omega_step: opt(&self.omega_step)?,
            threshold: self.threshold,
            min_separation: opt(&self.min_separation)?,
            window: match self.window {
                WindowArg::Rect => Window::Rectangular,
                WindowArg::Hann => Window::Hann,
            },
            oracle_tolerance: self.oracle_tol,
            output_dir: self.out.clone(),
            mirror: self.mirror,
            extend_past_nyquist: self.extend_past_nyquist,
            oracle: self.oracle,
            strict: self.strict,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Sampling step for the Nyquist advice.
    #[arg(long, default_value = "pi/12")]
    pub tau: String,
    /// Engine the model is meant for; non-Z terms warn unless `dense`.
    #[arg(long, value_enum, default_value = "exact")]
    pub engine: EngineKind,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub spectrum: PathBuf,
    #[arg(long)]
    pub peaks: PathBuf,
    #[arg(long, default_value = "plot.svg")]
    pub out: PathBuf,
}
