use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// Deformation parameters violate a variant constraint (e.g. q out of range).
    #[error("invalid deformation spec: {0}")]
    InvalidSpec(String),

    /// An argument lies outside the convergence domain of the variant's series.
    #[error("outside convergence domain: {0}")]
    Domain(String),

    /// A series summation hit the hard term cap before meeting its tolerance.
    #[error("series did not converge within {max_terms} terms")]
    NonConvergence { max_terms: usize },

    /// Model parameters and field distribution were built with different deformations.
    #[error("deformation spec of model parameters does not match the field distribution")]
    SpecMismatch,

    /// The Rabi frequency is flat at the distribution mean; no revival timescale exists.
    #[error("degenerate Rabi frequency at the distribution mean; no revival timescale")]
    DegenerateFrequency,

    /// The stationarity condition for the critical detuning has no admissible solution.
    #[error("no stationary detuning point: {0}")]
    NoStationaryPoint(String),

    /// The truncated oracle basis cannot represent the initial state to tolerance.
    #[error("truncated basis too small: {0}")]
    BasisTooSmall(String),

    /// Adaptive step control could not meet the requested tolerance.
    #[error("integrator tolerance not met: {0}")]
    ToleranceNotMet(String),

    /// A precondition on an operation argument was violated.
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
