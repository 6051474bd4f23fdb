use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use spinprobe::io::{
    read_peaks_json, read_spectrum_csv, write_peaks_json, write_spectrum_csv, write_timeseries_csv,
    PeaksDocument,
};
use spinprobe::model::{lift_total, parse_model, spectral_bound, PauliSum, SpinModel};
use spinprobe::oracle::{brute_energies, compare, compare_aliased};
use spinprobe::spectro::{detect, nyquist_check, sample_series, DetectOptions, Detection, NyquistStatus};
use spinprobe::TimeSeries;

use crate::config::{EngineKind, RunConfig};
use crate::error::CliError;
use crate::plot::render_svg;

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const SPECTRUM_FILE: &str = "spectrum.csv";
pub const PEAKS_FILE: &str = "peaks.json";
pub const PLOT_FILE: &str = "plot.svg";

/// Everything a run produces, before it touches the disk.
#[derive(Clone, Debug)]
pub struct Artifacts {
    pub series: TimeSeries,
    pub detection: Detection,
    pub document: PeaksDocument,
}

impl Artifacts {
    pub fn svg(&self) -> String {
        let s = &self.detection.spectrum;
        render_svg(&s.omegas, &s.real_parts(), &self.document.report.peaks)
    }
}

pub fn load_model(path: &Path) -> Result<SpinModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_model(&text).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

/// Samples, transforms and reads out `model` as configured.
pub fn pipeline(model: &SpinModel, config: &RunConfig) -> Result<Artifacts, CliError> {
    config.validate()?;
    if !model.is_diagonal() && config.engine != EngineKind::Dense {
        return Err(CliError::Validation(
            "model has X or Y terms; only --engine dense can evaluate it".into(),
        ));
    }
    let total = lift_total(model);
    let series = sample_series(config.engine(), &total, config.tau, config.n_max, config.mirror)?;
    let grid = config.omega_grid()?;
    let options = DetectOptions {
        threshold: config.threshold,
        min_separation: config.min_separation,
        window: config.window,
    };
    let detection = detect(&series, &total, &grid, options)?;

    let oracle_comparison = if config.oracle {
        let oracle: Vec<f64> = brute_energies(model)?.iter().map(|l| l.energy).collect();
        let report = &detection.report;
        Some(if report.alias_readings.is_empty() {
            compare(&report.energies_inner, &oracle, config.oracle_tolerance)
        } else {
            let readings: Vec<Vec<f64>> = report
                .alias_readings
                .iter()
                .map(|r| r.candidate_energies_inner.clone())
                .collect();
            compare_aliased(&readings, &oracle, config.oracle_tolerance)
        })
    } else {
        None
    };
    let document = PeaksDocument {
        report: detection.report.clone(),
        oracle_comparison,
    };
    Ok(Artifacts {
        series,
        detection,
        document,
    })
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, CliError> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn attach(path: &Path) -> impl FnOnce(spinprobe::Error) -> CliError + '_ {
    move |e| match e {
        spinprobe::Error::Io(source) => CliError::io(path, source),
        other => CliError::Core(other),
    }
}

pub fn write_artifacts(artifacts: &Artifacts, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;

    let path = dir.join(TIMESERIES_FILE);
    write_timeseries_csv(&artifacts.series, create(&path)?).map_err(attach(&path))?;

    let path = dir.join(SPECTRUM_FILE);
    let s = &artifacts.detection.spectrum;
    write_spectrum_csv(&s.omegas, &s.values, create(&path)?).map_err(attach(&path))?;

    let path = dir.join(PEAKS_FILE);
    write_peaks_json(&artifacts.document, create(&path)?).map_err(attach(&path))?;

    let path = dir.join(PLOT_FILE);
    fs::write(&path, artifacts.svg()).map_err(|e| CliError::io(&path, e))
}

/// Reads the model, runs the pipeline and writes the four artifacts. With
/// `strict`, an unclean oracle comparison fails after the files are written.
pub fn cmd_run(config: &RunConfig) -> Result<Artifacts, CliError> {
    config.validate()?;
    let model = load_model(&config.model_path)?;
    let artifacts = pipeline(&model, config)?;
    write_artifacts(&artifacts, &config.output_dir)?;
    if config.strict {
        if let Some(c) = &artifacts.document.oracle_comparison {
            if !c.is_clean() {
                return Err(CliError::OracleMismatch {
                    missed: c.missed.len(),
                    spurious: c.spurious.len(),
                });
            }
        }
    }
    Ok(artifacts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Validation {
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
    pub bound: f64,
}

pub fn cmd_validate(path: &Path, tau: f64, engine: EngineKind) -> Result<Validation, CliError> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(CliError::Validation(format!("tau must be positive, got {tau}")));
    }
    let model = load_model(path)?;
    let bound = spectral_bound(&model);
    let mut lines = vec![
        format!("qubits: {}", model.n_qubits()),
        format!("terms: {}", model.terms().len()),
        format!("shift: {}", model.shift()),
        format!("spectral bound: {bound}"),
    ];
    let nyquist = std::f64::consts::PI / tau;
    lines.push(match nyquist_check(bound, tau) {
        NyquistStatus::Ok => format!("nyquist: 2·bound = {} < π/τ = {nyquist:.6}, alias-free", 2.0 * bound),
        NyquistStatus::Alias { alias_period } => format!(
            "nyquist: 2·bound = {} ≥ π/τ = {nyquist:.6}, peaks alias with period {alias_period:.6}; \
             alias-free needs τ < {:.6}",
            2.0 * bound,
            std::f64::consts::PI / (2.0 * bound)
        ),
    });
    let mut warnings = Vec::new();
    if !model.is_diagonal() && engine != EngineKind::Dense {
        warnings.push(format!(
            "model has X or Y terms; the {} engine needs a Z-only model, use --engine dense",
            match engine {
                EngineKind::Exact => "exact",
                EngineKind::Shots => "shots",
                EngineKind::Dense => unreachable!(),
            }
        ));
    }
    if model.shift() <= bound - model.shift() {
        warnings.push(format!(
            "shift {} does not exceed Σ|a| = {}; some levels of H + C may be non-positive",
            model.shift(),
            bound - model.shift()
        ));
    }
    Ok(Validation { lines, warnings, bound })
}

/// Renders `out` from the CSV and JSON a run emitted.
pub fn cmd_plot(spectrum_csv: &Path, peaks_json: &Path, out: &Path) -> Result<(), CliError> {
    let file = fs::File::open(spectrum_csv).map_err(|e| CliError::io(spectrum_csv, e))?;
    let (omegas, values) = read_spectrum_csv(file).map_err(|source| input_error(spectrum_csv, source))?;
    let file = fs::File::open(peaks_json).map_err(|e| CliError::io(peaks_json, e))?;
    let doc = read_peaks_json(file).map_err(|source| input_error(peaks_json, source))?;
    let re: Vec<f64> = values.iter().map(|z| z.re).collect();
    let svg = render_svg(&omegas, &re, &doc.report.peaks);
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(out, svg).map_err(|e| CliError::io(out, e))
}

fn input_error(path: &Path, source: spinprobe::Error) -> CliError {
    match source {
        spinprobe::Error::Io(e) => CliError::io(path, e),
        source => CliError::Input {
            path: PathBuf::from(path),
            source,
        },
    }
}
