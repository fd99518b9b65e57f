use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant carries enough context to name the offending quantity; the
/// CLI prefixes the message with the module that raised it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (e.g. `|w| >= c`).
    #[error("domain error: {0}")]
    Domain(String),

    /// The retardation condition has no root inside the trajectory interval.
    #[error("no retarded solution: {0}")]
    NoRetardedSolution(String),

    /// The field point coincides with the retarded source position.
    #[error("degenerate geometry: field point coincides with the retarded source position")]
    DegenerateGeometry,

    /// The retardation factor `s` is non-positive.
    #[error("singular geometry: s = {0:e} <= 0")]
    SingularGeometry(f64),

    /// `1 + V/H0` vanished, so the renormalized mass has a pole.
    #[error("singular renormalization: 1 + V/H0 = {0:e}")]
    SingularRenormalization(f64),

    /// Total energy-momentum is not timelike (`H^2 < c^2 P^2`).
    #[error("spacelike total: H^2 - c^2 P^2 = {0:e}")]
    SpacelikeTotal(f64),

    /// Integration produced a non-finite state.
    #[error("integration aborted at step {step}: {reason}")]
    IntegrationAborted { step: usize, reason: String },

    /// The operator kernel is not resolved by the grid (`mu * spacing > 1`).
    #[error("kernel unresolved: mu * spacing = {0} > 1")]
    Resolution(f64),

    /// A cluster partition is empty, overlapping or incomplete.
    #[error("invalid partition: {0}")]
    Partition(String),

    /// A grid or sample set is malformed.
    #[error("invalid grid: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
