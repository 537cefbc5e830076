//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("time {t} outside profile domain [{start}, {end}]")]
    OutsideDomain { t: f64, start: f64, end: f64 },

    #[error("tabulated profile needs at least 2 rows, got {0}")]
    TableTooShort(usize),

    #[error("tabulated profile times must be strictly increasing (row {index}: t = {t})")]
    NonMonotoneTable { index: usize, t: f64 },

    #[error("X(t) must be positive everywhere; X = {x} at {context}")]
    NonPositiveX { x: f64, context: String },

    #[error("width must be positive, got {0}")]
    NonPositiveWidth(f64),

    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),

    #[error("reference frequency undefined at t0 = {t0}: X0*Z0 - Y0^2 = {radicand} (need > 0)")]
    DegenerateReference { t0: f64, radicand: f64 },

    #[error("integration step must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("integration target t_end = {t_end} precedes start t = {t_start}")]
    BackwardSpan { t_start: f64, t_end: f64 },

    #[error("Wronskian residual {residual:.3e} exceeds hard limit {limit:.1e} at t = {t}")]
    WronskianDiverged { t: f64, residual: f64, limit: f64 },

    #[error("Bogoliubov unitarity residual {residual:.3e} exceeds limit {limit:.1e} at t = {t}")]
    UnitarityViolation { t: f64, residual: f64, limit: f64 },

    #[error("mismatched picture tags: {a:?} vs {b:?}")]
    PictureMismatch { a: crate::operator_algebra::Picture, b: crate::operator_algebra::Picture },

    #[error("Fock dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("Fock dimension mismatch: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },

    #[error("state vector not normalized: |norm - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("expectation of a Hermitian operator came out non-real: |Im| = {0:.3e}")]
    NonRealExpectation(f64),

    #[error("config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("unknown sweep parameter `{param}`; this profile accepts: {valid}")]
    UnknownParameter { param: String, valid: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
