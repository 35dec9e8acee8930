use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice needs at least 3 sites, got {0}")]
    TooFewSites(usize),
    #[error("hopping must be positive and finite, got {0}")]
    InvalidHopping(f64),
    #[error("flux must be finite, got {0}")]
    InvalidFlux(f64),
    #[error("an open chain cannot carry flux (got {0})")]
    FluxOnChain(f64),
    #[error("momentum {k} is not on the {grid} grid of the lattice")]
    OffGrid { k: f64, grid: &'static str },
    #[error("packet inverse width alpha must be positive, got {0}")]
    NonPositiveAlpha(f64),
    #[error("packet center {center} outside [1, {n_sites}]")]
    CenterOutOfRange { center: f64, n_sites: usize },
    #[error("spin weights must have unit norm, got |c|^2 = {0}")]
    SpinNotNormalized(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("dense oracle is limited to 64 sites, got {0}")]
    OracleTooLarge(usize),
    #[error("operation requires a ring lattice")]
    RequiresRing,
    #[error("time grid is empty")]
    EmptyGrid,
    #[error("time series is malformed: {0}")]
    MalformedSeries(&'static str),
    #[error("density profile needs at least 16 sites, got {0}")]
    ProfileTooShort(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
