use crate::analytic::Regime;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("number of marked states r={r} must satisfy 1 <= r <= N/2 (N={n})")]
    RMarkedOutOfRange { r: usize, n: usize },
    #[error("state index {index} out of range for N={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("marked index {0} listed more than once")]
    DuplicateIndex(usize),
    #[error("search space must have at least 2 states, got N={0}")]
    TooFewStates(usize),
    #[error("vector length {got} does not match N={expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("state vector norm {norm_sq} differs from 1 by more than {tolerance}")]
    NotNormalized { norm_sq: f64, tolerance: f64 },
    #[error("amplitudes must be finite")]
    NonFinite,
    #[error("cannot normalize a zero vector")]
    ZeroVector,
    #[error("N={0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("norm drifted by {drift:e} after {step} steps (tolerance {tolerance:e})")]
    NormDrift {
        step: u64,
        drift: f64,
        tolerance: f64,
    },
    #[error("norm audit cadence must be positive")]
    InvalidAuditCadence,
    #[error("ellipse is degenerate in the {0:?} regime")]
    DegenerateEllipse(Regime),
    #[error("measurement times are undefined in the {0:?} regime")]
    RegimeUnsupported(Regime),
    #[error("maximal success probability is zero; no number of repetitions finds a marked state")]
    HopelessInstance,
    #[error("worst-case initialization needs at least 2 unmarked states, got {0}")]
    WorstCaseImpossible(usize),
    #[error("noise sigma must be finite and nonnegative, got {0}")]
    InvalidNoise(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
