//! Crate-wide error type and result alias.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode the library reports.
///
/// Numerical checks that merely *fail* (a bound not satisfied, a substitutes
/// violation) are ordinary data, not errors; `Error` is reserved for inputs
/// that leave the domain of the requested computation.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix dimensions, index bounds, or vector lengths do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A joint probability entry is negative (or not a finite number).
    #[error("negative probability at cell ({row}, {col}): {value}")]
    NegativeProbability { row: usize, col: usize, value: f64 },

    /// Total probability mass deviates from 1 beyond the renormalization limit.
    #[error("probability mass sums to {total:.17}, beyond the renormalization limit {limit:e}")]
    MassNotOne { total: f64, limit: f64 },

    /// A conditional mean at a positive-probability cell lies outside [0, 1].
    #[error("conditional mean out of range at cell ({row}, {col}): {value}")]
    MeanOutOfRange { row: usize, col: usize, value: f64 },

    /// A conditional expectation was requested over an event of probability 0.
    #[error("cannot condition on a zero-mass slice: {0}")]
    ZeroMassSlice(String),

    /// A rectangle with an empty row or column set was constructed.
    #[error("empty rectangle: {0}")]
    EmptyRectangle(String),

    /// A protocol tolerance parameter is outside its admissible range.
    #[error("epsilon out of range: {value} ({requirement})")]
    EpsilonOutOfRange { value: f64, requirement: &'static str },

    /// The `to` partition does not refine the `from` partition.
    #[error("partition is not a refinement: {0}")]
    NotARefinement(String),

    /// Exhaustive rectangle enumeration would exceed the size guard.
    #[error("{rows}x{cols} exceeds the exhaustive enumeration guard ({limit}); pass an override to proceed")]
    TooLargeForEnumeration { rows: usize, cols: usize, limit: usize },

    /// A boolean-output computation was requested on a non-boolean structure.
    #[error("structure is not boolean-valued: {0}")]
    NotBoolean(String),

    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Corpus synthesis failed to certify a structure within the step budget.
    #[error("synthesis failed after {steps} search steps (best violation {best_violation:.6e})")]
    SynthesisFailed { steps: u32, best_violation: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
