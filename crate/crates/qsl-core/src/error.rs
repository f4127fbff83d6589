use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain an operation is defined on.
    #[error("{what} = {value} outside valid domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A spectrum failed validation (populations, ordering, normalization).
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    /// A dual quantity was requested for a spectrum without a maximum energy.
    #[error("spectrum has no maximum energy; dual bounds are undefined")]
    MissingMaxEnergy,

    /// An orthogonality time was requested for a stationary state
    /// (vanishing energy spread or moment).
    #[error("stationary state: {0} vanishes, orthogonality time is unbounded")]
    StationaryState(&'static str),

    /// Vectors or matrices of incompatible sizes were combined.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A truncated-basis construction left more tail mass than allowed.
    #[error("cutoff {cutoff} too small: truncated tail mass {tail:.3e} exceeds {limit:.1e}")]
    CutoffTooSmall { cutoff: usize, tail: f64, limit: f64 },

    /// A state vector failed normalization checks.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A density matrix failed Hermiticity, trace, or positivity checks.
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// Level populations handed to the measurement model are unphysical.
    #[error("invalid populations: {0}")]
    InvalidPopulations(String),

    /// Too few samples to fit the requested number of level populations.
    #[error("underdetermined fit: {samples} samples for {unknowns} unknowns")]
    UnderdeterminedSystem { samples: usize, unknowns: usize },

    /// The displacement record set cannot determine the density matrix.
    #[error("insufficient tomography data: {0}")]
    InsufficientData(String),

    /// The requested overlap is never reached by the evolving state.
    #[error("overlap^2 target {delta} below reachable minimum {min_delta}")]
    UnreachableOverlap { delta: f64, min_delta: f64 },

    /// A two-level quantity was requested for a degenerate population.
    #[error("degenerate two-level state: {0}")]
    DegenerateState(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
