//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("max_steps must be at least 1")]
    ZeroSteps,

    #[error("walk of {steps} steps exceeds the {cap}-step cap imposed by the 64-bit memory register")]
    StepsOverCap { steps: usize, cap: usize },

    #[error("Hilbert dimension N*2^(N+1) overflows u64 for N = {n_sites} sites")]
    DimensionOverflow { n_sites: usize },

    #[error("step operator would move amplitude at site {site} (coin {coin:+}) off the lattice; lattice is undersized")]
    BoundaryViolation { site: usize, coin: i64 },

    #[error("walk angles must be finite")]
    NonFiniteAngle,

    #[error("fit needs at least {need} points, got {got}")]
    Underdetermined { need: usize, got: usize },

    #[error("degenerate variance series: fewer than two entries with t >= 1 and variance > 0")]
    DegenerateSeries,

    #[error("parameter grid must not be empty")]
    EmptyGrid,

    #[error("invalid variance series: {0}")]
    InvalidSeries(String),

    #[error("invalid self-avoiding walk config: {0}")]
    InvalidSawConfig(String),
}
