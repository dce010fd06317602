use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:e}, tolerance {tolerance:e})")]
    NotSymmetric { max_asymmetry: f64, tolerance: f64 },

    #[error("eigensolver failed to converge after {iterations} iterations (off-diagonal norm {offdiag_norm:e})")]
    NoConvergence {
        iterations: usize,
        offdiag_norm: f64,
    },

    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimensionOverflow { dim: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular or not positive definite (pivot {pivot} = {value:e})")]
    SingularMatrix { pivot: usize, value: f64 },

    #[error("basis is not orthonormal (Gram deviation {deviation:e})")]
    NonOrthonormal { deviation: f64 },

    #[error("unknown circuit node `{0}`")]
    UnknownNode(String),

    #[error("invalid capacitance network: {0}")]
    InvalidNetwork(String),

    #[error("labeled state {label:?} not found or ambiguous: {detail}")]
    StateNotFound {
        label: (usize, usize, usize),
        detail: String,
    },

    #[error("mode classification ambiguous: {0}")]
    AmbiguousMode(String),

    #[error(
        "no sign change in calibration bracket; samples (ej_hz, chi_half_hz - target): {samples:?}"
    )]
    CalibrationBracket { samples: Vec<(f64, f64)> },

    #[error("non-monotone calibration response near ej = {ej:e} Hz; narrow the bracket")]
    NonMonotone { ej: f64 },

    #[error("frequency retuning failed: requested {target:e} Hz, reached {achieved:e} Hz after {iterations} iterations")]
    Retune {
        target: f64,
        achieved: f64,
        iterations: usize,
    },

    #[error("integrator unstable at t = {t:e} s (|alpha| = {amplitude:e})")]
    Integrator { t: f64, amplitude: f64 },
}

impl Error {
    /// Module that raises this kind of error, for diagnostics.
    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "input",
            Error::NotSymmetric { .. }
            | Error::NoConvergence { .. }
            | Error::DimensionOverflow { .. }
            | Error::DimensionMismatch(_)
            | Error::SingularMatrix { .. }
            | Error::NonOrthonormal { .. } => "linalg",
            Error::UnknownNode(_) | Error::InvalidNetwork(_) => "circuit",
            Error::StateNotFound { .. } | Error::AmbiguousMode(_) => "observables",
            Error::CalibrationBracket { .. } | Error::NonMonotone { .. } | Error::Retune { .. } => {
                "sweep"
            }
            Error::Integrator { .. } => "rip",
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
