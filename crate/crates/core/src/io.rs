//! On-disk formats: time-series CSV, spectrum CSV, peaks JSON.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::ComparisonReport;
use crate::spectro::{PeakReport, TimeSeries};

/// Scientific notation with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_timeseries_csv<W: Write>(series: &TimeSeries, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "t", "a", "stderr"])?;
    let stderr = series.stderr();
    for (i, n) in series.indices().enumerate() {
        let err = stderr.map_or(0.0, |s| s[i]);
        w.write_record([
            n.to_string(),
            fmt_real(series.time(n)),
            fmt_real(series.values()[i]),
            fmt_real(err),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Spectrum rows as `(omega, value)`.
pub fn write_spectrum_csv<W: Write>(omegas: &[f64], values: &[Complex64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["omega", "re", "im"])?;
    for (&o, v) in omegas.iter().zip(values) {
        w.write_record([fmt_real(o), fmt_real(v.re), fmt_real(v.im)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct SpectrumRow {
    omega: f64,
    re: f64,
    im: f64,
}

pub fn read_spectrum_csv<R: Read>(input: R) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["omega", "re", "im"] {
        return Err(Error::InvalidValue(format!(
            "spectrum header must be omega,re,im, got {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut omegas = Vec::new();
    let mut values = Vec::new();
    for row in reader.deserialize() {
        let row: SpectrumRow = row?;
        omegas.push(row.omega);
        values.push(Complex64::new(row.re, row.im));
    }
    Ok((omegas, values))
}

/// Contents of `peaks.json`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PeaksDocument {
    #[serde(flatten)]
    pub report: PeakReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_comparison: Option<ComparisonReport>,
}

pub fn write_peaks_json<W: Write>(doc: &PeaksDocument, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_peaks_json<R: Read>(input: R) -> Result<PeaksDocument> {
    Ok(serde_json::from_reader(input)?)
}
