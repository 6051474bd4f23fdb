//! Energy-level detection by probe-spin evolution.
//!
//! A Hamiltonian `H` is extended by a probe qubit into
//! `H_T = Z_0 (H + C)`. Starting from `|+...+>`, the probe signal
//! `A(t) = <σ0x(t)>` oscillates at frequencies `2E` for every level `E` of
//! `H_T`, so peaks of its Fourier transform at `ω > 0` sit at `2(E_H + C)`.
//!
//! Modules follow the pipeline:
//! [`model`] → [`exact`] / [`circuit`] → [`spectro`] → [`oracle`].

pub mod circuit;
pub mod error;
pub mod exact;
pub mod io;
pub mod model;
pub mod oracle;
pub mod spectro;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use circuit::{Circuit, Gate, ShotResult};
pub use exact::{DenseHermitian, SpectralCoefficients, SpectralLine, StateVector};
pub use model::{Axis, PauliString, PauliSum, SpinModel, Term, TotalModel};
pub use oracle::{ComparisonReport, Level};
pub use spectro::{DetectOptions, Detection, Engine, Peak, PeakReport, Spectrum, TimeSeries};
