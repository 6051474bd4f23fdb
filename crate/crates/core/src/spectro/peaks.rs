use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Spectrum;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    #[serde(rename = "omega")]
    pub omega_center: f64,
    pub amplitude: f64,
    pub half_width: f64,
}

/// One positive peak read under every alias fold that keeps it inside the
/// physically possible band `(0, 2·bound]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AliasReading {
    pub omega: f64,
    pub candidate_omegas: Vec<f64>,
    pub candidate_energies_inner: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub peaks: Vec<Peak>,
    pub energies_total: Vec<f64>,
    pub energies_inner: Vec<f64>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alias_readings: Vec<AliasReading>,
}

/// `0.25 · (T/π) · 2^{-(N+1)}`: a quarter of the smallest line an Ising
/// total with `n_inner` spins can carry.
pub fn default_threshold(total_time: f64, n_inner: usize) -> f64 {
    0.25 * total_time / PI / (1u64 << (n_inner + 1)) as f64
}

/// Half the main-lobe width of the kernel, `4π/T` in ω.
pub fn default_min_separation(total_time: f64) -> f64 {
    4.0 * PI / total_time
}

fn uniform_step(omegas: &[f64]) -> Result<f64> {
    if omegas.len() < 2 {
        return Ok(0.0);
    }
    let step = (omegas[omegas.len() - 1] - omegas[0]) / (omegas.len() - 1) as f64;
    let scale = omegas[0].abs().max(omegas[omegas.len() - 1].abs()).max(1.0);
    if step <= 0.0 {
        return Err(Error::NonUniformGrid);
    }
    for w in omegas.windows(2) {
        if ((w[1] - w[0]) - step).abs() > 1e-9 * scale {
            return Err(Error::NonUniformGrid);
        }
    }
    Ok(step)
}

/// Distance from index `i` to where `re` first drops below `level`, walking
/// in direction `dir`, linearly interpolated between grid points.
fn crossing(re: &[f64], i: usize, level: f64, step: f64, dir: isize) -> f64 {
    let mut j = i as isize;
    loop {
        let next = j + dir;
        if next < 0 || next as usize >= re.len() {
            return (j - i as isize).unsigned_abs() as f64 * step;
        }
        let (a, b) = (re[j as usize], re[next as usize]);
        if b < level {
            let frac = if a > b { ((a - level) / (a - b)).clamp(0.0, 1.0) } else { 0.0 };
            return ((j - i as isize).unsigned_abs() as f64 + frac) * step;
        }
        j = next;
    }
}

const REFINE_SWEEPS: usize = 3;

/// Kernel response at `omega` of a peak at `center`, leaving out the part
/// owed to an alias image that lies on the grid: that image is detected as
/// a peak in its own right.
fn local_shape(spectrum: &Spectrum, omega: f64, center: f64) -> f64 {
    let period = 2.0 * PI / spectrum.tau;
    let m = ((omega - center) / period).round();
    if m != 0.0 {
        let image = center + m * period;
        let (lo, hi) = (spectrum.omegas[0], spectrum.omegas[spectrum.omegas.len() - 1]);
        if image > lo && image < hi {
            return 0.0;
        }
    }
    spectrum.line_shape(omega - center)
}

/// Climbs `re` minus the kernel response of `others` from index `start`
/// (at most `reach` bins) and fits a parabola through the top three points.
fn refine(spectrum: &Spectrum, re: &[f64], others: &[Peak], start: usize, reach: usize) -> Option<(usize, f64, f64)> {
    let residual = |j: usize| -> f64 {
        re[j]
            - others
                .iter()
                .map(|k| k.amplitude * local_shape(spectrum, spectrum.omegas[j], k.omega_center))
                .sum::<f64>()
    };
    let mut j = start;
    let mut fj = residual(j);
    if !others.is_empty() {
        for _ in 0..reach {
            let left = if j > 0 { residual(j - 1) } else { f64::NEG_INFINITY };
            let right = if j + 1 < re.len() { residual(j + 1) } else { f64::NEG_INFINITY };
            if left > fj && left >= right {
                j -= 1;
                fj = left;
            } else if right > fj {
                j += 1;
                fj = right;
            } else {
                break;
            }
        }
    }
    if j == 0 || j + 1 >= re.len() {
        return None;
    }
    let (fm, f0, fp) = (residual(j - 1), fj, residual(j + 1));
    let denom = fm - 2.0 * f0 + fp;
    let (dx, amplitude) = if denom < 0.0 {
        let dx = (0.5 * (fm - fp) / denom).clamp(-1.0, 1.0);
        (dx, f0 - 0.25 * (fm - fp) * dx)
    } else {
        (0.0, f0)
    };
    let step = spectrum.omegas[1] - spectrum.omegas[0];
    Some((j, spectrum.omegas[j] + dx * step, amplitude))
}

/// Local maxima of `Re σ̂` above `threshold`, refined by a three-point
/// parabola. Among maxima closer than `min_separation` only the tallest is
/// kept. Returned sorted by center.
///
/// Candidates are visited tallest first; a candidate must still exceed
/// `threshold` after subtracting the kernel response of every peak already
/// accepted, which rejects the sidelobes of strong lines. Center and
/// amplitude are refined on that residual, and once all peaks are known each
/// is refined again against the others.
pub fn find_peaks(spectrum: &Spectrum, threshold: f64, min_separation: f64) -> Result<Vec<Peak>> {
    if spectrum.omegas.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidValue(format!("threshold must be positive, got {threshold}")));
    }
    let step = uniform_step(&spectrum.omegas)?;
    let re = spectrum.real_parts();
    if re.len() < 3 {
        return Ok(Vec::new());
    }

    let mut candidates: Vec<usize> = Vec::new();
    for i in 1..re.len() - 1 {
        let (fm, f0, fp) = (re[i - 1], re[i], re[i + 1]);
        if f0 > threshold && f0 >= fm && f0 > fp {
            candidates.push(i);
        }
    }
    candidates.sort_by(|&a, &b| re[b].total_cmp(&re[a]).then(a.cmp(&b)));

    let reach = ((0.5 * min_separation / step).ceil() as usize).max(1);
    let mut kept: Vec<Peak> = Vec::new();
    for i in candidates {
        let Some((j, center, amplitude)) = refine(spectrum, &re, &kept, i, reach) else {
            continue;
        };
        if amplitude.is_nan() || amplitude <= threshold
            || kept
                .iter()
                .any(|k| (k.omega_center - center).abs() < min_separation)
        {
            continue;
        }
        let half = 0.5 * amplitude;
        let half_width = 0.5 * (crossing(&re, j, half, step, -1) + crossing(&re, j, half, step, 1));
        kept.push(Peak {
            omega_center: center,
            amplitude,
            half_width,
        });
    }

    // the first peaks were placed against fewer neighbours; settle them all
    let origin = spectrum.omegas[0];
    for _ in 0..REFINE_SWEEPS {
        for k in 0..kept.len() {
            let others: Vec<Peak> = kept
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != k)
                .map(|(_, p)| *p)
                .collect();
            let start = (((kept[k].omega_center - origin) / step).round().max(0.0) as usize).min(re.len() - 1);
            if let Some((_, center, amplitude)) = refine(spectrum, &re, &others, start, reach) {
                kept[k].omega_center = center;
                kept[k].amplitude = amplitude;
            }
        }
    }
    kept.sort_by(|a, b| a.omega_center.total_cmp(&b.omega_center));
    Ok(kept)
}

/// Maps positive peaks to `E_total = ω/2` and `E_inner = ω/2 - C`.
///
/// Negative peaks only serve as a mirror check; an unmatched peak on either
/// side (beyond `tolerance`) adds a warning.
pub fn peaks_to_energies(peaks: &[Peak], shift: f64, tolerance: f64) -> PeakReport {
    let mut warnings = Vec::new();
    let positive: Vec<&Peak> = peaks.iter().filter(|p| p.omega_center > 0.0).collect();
    let negative: Vec<&Peak> = peaks.iter().filter(|p| p.omega_center < 0.0).collect();
    for p in &positive {
        if !negative
            .iter()
            .any(|q| (q.omega_center + p.omega_center).abs() <= tolerance)
        {
            warnings.push(format!("peak at {:.6} has no mirror at negative ω", p.omega_center));
        }
    }
    for q in &negative {
        if !positive
            .iter()
            .any(|p| (q.omega_center + p.omega_center).abs() <= tolerance)
        {
            warnings.push(format!("peak at {:.6} has no mirror at positive ω", q.omega_center));
        }
    }
    let energies_total: Vec<f64> = positive.iter().map(|p| 0.5 * p.omega_center).collect();
    let energies_inner = energies_total.iter().map(|e| e - shift).collect();
    PeakReport {
        peaks: peaks.to_vec(),
        energies_total,
        energies_inner,
        warnings,
        noise_floor: None,
        alias_readings: Vec::new(),
    }
}

/// Every reading `±ω + k·period` of each positive peak that lands in
/// `(0, max_omega + tolerance]`.
pub fn alias_readings(
    peaks: &[Peak],
    period: f64,
    max_omega: f64,
    shift: f64,
    tolerance: f64,
) -> Vec<AliasReading> {
    peaks
        .iter()
        .filter(|p| p.omega_center > 0.0)
        .map(|p| {
            let mut cands: Vec<f64> = Vec::new();
            for base in [p.omega_center, -p.omega_center] {
                let k_lo = ((0.0 - base) / period).floor() as i64;
                let k_hi = ((max_omega + tolerance - base) / period).ceil() as i64;
                for k in k_lo..=k_hi {
                    let w = base + k as f64 * period;
                    if w > 0.0 && w <= max_omega + tolerance {
                        cands.push(w);
                    }
                }
            }
            cands.sort_by(f64::total_cmp);
            cands.dedup_by(|a, b| (*a - *b).abs() <= tolerance);
            AliasReading {
                omega: p.omega_center,
                candidate_energies_inner: cands.iter().map(|w| 0.5 * w - shift).collect(),
                candidate_omegas: cands,
            }
        })
        .collect()
}
