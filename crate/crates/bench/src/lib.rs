//! Fixtures shared by the pipeline benchmarks.

use std::f64::consts::PI;

use spinprobe::model::{field_chain, lift_total, ising_from_symmetric, spectral_bound};
use spinprobe::spectro::{default_omega_grid, sample_series};
use spinprobe::{Engine, TimeSeries, TotalModel};

/// Three-spin chain with `C = 4`.
pub fn chain() -> TotalModel {
    lift_total(&field_chain(1.0, 4.0).expect("valid chain"))
}

/// All-pairs Ising on `n` spins with a fixed coupling pattern.
pub fn ising(n: usize) -> TotalModel {
    let couplings: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 0.0 } else { ((i + j) as f64 * 0.7).sin() })
                .collect()
        })
        .collect();
    let bare = ising_from_symmetric(&couplings, 0.0).expect("symmetric couplings");
    let shifted = bare.with_shift(spectral_bound(&bare) + 1.0).expect("finite shift");
    lift_total(&shifted)
}

/// Exact series of the chain on the alias-free `π/48`, `N = 384` grid.
pub fn chain_series() -> TimeSeries {
    sample_series(Engine::Exact, &chain(), PI / 48.0, 384, false).expect("valid grid")
}

pub fn chain_grid() -> Vec<f64> {
    default_omega_grid(PI / 48.0, 8.0 * PI, false).expect("valid grid")
}
