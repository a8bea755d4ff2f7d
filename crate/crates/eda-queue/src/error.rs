use thiserror::Error;

/// Errors surfaced by parameter validation and the empirical-distribution
/// helpers. The polynomial layer treats misuse (mismatched series orders,
/// inexact division) as a bug and panics instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse `{0}` as a fraction `a/b` or a decimal")]
    InvalidNumber(String),
    #[error("rho must lie strictly between 0 and 1, got {0}")]
    RhoOutOfRange(String),
    #[error("q must lie in [0, 1), got {0}")]
    QOutOfRange(String),
    #[error("|q| must be below 1 for the infinite product to converge, got {0}")]
    QOutsideUnitDisk(f64),
    #[error("empirical distribution holds no samples")]
    EmptyDistribution,
    #[error("pmf is not normalized: total mass {0}")]
    NotNormalized(f64),
    #[error("exact and floating parameters disagree: {0}")]
    ParamsMismatch(String),
}
