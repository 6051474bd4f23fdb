use thiserror::Error;

/// Errors produced by the spectroscopy pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("term {term}: qubit {qubit} appears more than once")]
    DuplicateQubit { term: usize, qubit: usize },

    #[error("term {term}: qubit index {qubit} out of range for {n_qubits} qubit(s)")]
    IndexOutOfRange {
        term: usize,
        qubit: i64,
        n_qubits: usize,
    },

    #[error("qubit count must be at least 1, got {0}")]
    InvalidQubitCount(i64),

    #[error("{0}")]
    InvalidValue(String),

    #[error("operation requires a Z-only (diagonal) model")]
    NonDiagonal,

    #[error("{n_qubits} qubits exceeds the dense cap of {cap}")]
    DimensionCap { n_qubits: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NonHermitian(f64),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("evolution routes disagree at t = {t}: {eigen} vs {propagated}")]
    CrossCheck {
        t: f64,
        eigen: f64,
        propagated: f64,
    },

    #[error("frequency grid is empty")]
    EmptyGrid,

    #[error("frequency grid is not uniform")]
    NonUniformGrid,

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
