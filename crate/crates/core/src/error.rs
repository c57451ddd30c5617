use thiserror::Error;

/// Errors shared by every module in the crate.
///
/// Singularities of weak values at wavefunction zeros are *not* errors: they
/// are physical and reported in-band as NaN markers or profile flags. The
/// `Singular` variant is reserved for operations that cannot return at all
/// (e.g. a vanishing postselection overlap in a generating function).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("singular evaluation: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
