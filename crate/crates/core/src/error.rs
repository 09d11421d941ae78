//! Error type shared by all betadyn modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A map with `MidpointRule::Exclude` was evaluated at 0, 1/2 or 1.
    #[error("point {0} is excluded from the map domain")]
    DomainExcluded(f64),

    /// Run-length bound is infinite at beta = 2.
    #[error("run length of ones is unbounded at beta = 2")]
    Unbounded,

    /// A series was evaluated outside its disk of convergence.
    #[error("series diverges at |argument| = {0}")]
    Divergent(f64),

    /// An iteration failed to converge within its budget.
    #[error("no convergence after {sweeps} sweeps (last delta {delta:e})")]
    NoConvergence { sweeps: usize, delta: f64 },

    /// The midpoint orbit hit 1/2 at the given step; the wavelet basis
    /// cannot be extended past it.
    #[error("midpoint orbit hits 1/2 at step {0}; basis construction stops")]
    TroubleSpot(usize),

    /// The midpoint orbit is degenerate (repeated midpoints), as at beta = 2.
    #[error("degenerate midpoint orbit at step {0}; basis collapses")]
    DegenerateBasis(usize),

    /// Bit-string inputs are too short for the requested exact output.
    #[error("need input prefixes of {needed} bits, got {got}")]
    InsufficientPrefix { needed: usize, got: usize },

    /// A computed midpoint carry bit left {0,1}; precision was exhausted.
    #[error("carry bit c_{index} = {value} is not in {{0,1}}")]
    BitOutOfRange { index: usize, value: f64 },

    /// A Hessenberg matrix has a vanishing subdiagonal entry.
    #[error("subdiagonal entry {0} vanishes; matrix is reducible")]
    ReducibleMatrix(usize),

    /// Row-ratio limit estimation failed to stabilize.
    #[error("limit estimate failed to stabilize (spread {0:e})")]
    NoLimit(f64),

    /// A numeric parameter was outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;
