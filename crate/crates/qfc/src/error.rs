use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} exceeds the supported maximum of {max}", max = crate::matlin::MAX_DIM)]
    DimensionTooLarge(usize),
    #[error("matrix entries must be finite")]
    NonFiniteEntry,
    #[error("matrix data length {len} does not match {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("empty Kraus family")]
    EmptyKraus,
    #[error("eigensolver failed to converge after {0} sweeps")]
    EigenFailure(usize),
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("eigenvalue {value:.6e} is below the negativity tolerance {tol:.3e}")]
    NegativeEigenvalue { value: f64, tol: f64 },
    #[error("branch enumeration exceeds the cap of {cap} branches")]
    BranchCapExceeded { cap: u64 },
    #[error("step {step} is not corrigible: defect {defect:.6e} exceeds tolerance {tol:.3e}")]
    NotCorrigible { step: usize, defect: f64, tol: f64 },
    #[error("operation requires a qubit channel (dim 2), got dim {0}")]
    QubitOnly(usize),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid outcome record: index {index} out of range for step {step} ({outcomes} outcomes)")]
    BadOutcome {
        step: usize,
        index: usize,
        outcomes: usize,
    },
    #[error("policy dimension {policy} does not match channel dimension {channel}")]
    PolicyDimMismatch { policy: usize, channel: usize },
    #[error("all branch probabilities vanished while sampling shot {shot}")]
    SamplingUnderflow { shot: u64 },
    #[error("invalid options: {0}")]
    InvalidOptions(String),
}

pub type Result<T> = std::result::Result<T, Error>;
