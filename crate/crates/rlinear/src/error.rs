use thiserror::Error;

/// Errors reported by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero right-hand side")]
    ZeroRhs,
    #[error("matrix is numerically singular")]
    Singular,
    #[error("least-squares matrix is numerically rank deficient")]
    RankDeficient,
    #[error("QR eigenvalue iteration failed to converge on a block of size {block}")]
    EigenNoConvergence { block: usize },
    #[error("matrix is not contriangularizable: {0}")]
    NotContriangularizable(String),
    #[error("deflation failed: {0}")]
    DeflationFailed(String),
    #[error("degenerate coneigenvalues: moduli {0:e} and {1:e} are not separated")]
    DegenerateConeigenvalues(f64, f64),
    #[error("matrix is not complex symmetric within tolerance (defect {0:e})")]
    NotSymmetric(f64),
    #[error("Krylov step count {m} exceeds dimension {n}")]
    TooManySteps { m: usize, n: usize },
    #[error("monomial Krylov basis is ill conditioned (estimate {0:e}); use a smaller step count")]
    IllConditionedBasis(f64),
    #[error("invalid node system: {0}")]
    InvalidNodeSystem(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("inadmissible curve: {0}")]
    InadmissibleCurve(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
