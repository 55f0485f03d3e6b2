//! Error types shared across the crate.
//!
//! Errors are split by *who got it wrong*:
//!
//! * [`HopfError::Precondition`]-style variants mean the caller handed us
//!   data that violates a documented contract (wrong conductor, hypothesis
//!   of a construction not satisfied, malformed input, ...).
//! * [`HopfError::InternalConsistency`] means a value this crate computed
//!   itself failed one of its own exhaustive checks — always a bug, never
//!   user error.
//!
//! Verification routines that *report* on axioms (e.g. associativity over a
//! structure-constant table) do not error when an axiom fails; they return
//! an [`crate::algebra::AxiomReport`] listing every defect. Errors are
//! reserved for inputs that are unusable, not merely non-examples.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum HopfError {
    /// Two scalars from different cyclotomic fields were mixed. All scalars
    /// in one computation must share a single conductor.
    #[error("conductor mismatch: left operand lives in Q(zeta_{left}), right operand in Q(zeta_{right})")]
    ConductorMismatch {
        /// Conductor of the left operand.
        left: u64,
        /// Conductor of the right operand.
        right: u64,
    },

    /// A primitive `r`-th root of unity was requested from a field whose
    /// conductor `n` is not a multiple of `r`.
    #[error("no primitive {r}-th root of unity in Q(zeta_{conductor}): {r} does not divide {conductor}")]
    RootOrder {
        /// Order of the requested root.
        r: u64,
        /// Conductor of the field.
        conductor: u64,
    },

    /// Division by zero in the field.
    #[error("division by zero in Q(zeta_{conductor})")]
    DivisionByZero {
        /// Conductor of the field.
        conductor: u64,
    },

    /// A documented precondition of an operation was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Structured input (JSON, tables, index lists) could not be interpreted.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// A group-order or enumeration cap was exceeded.
    /// The cap is configurable through the `HOPFFORGE_ORDER_CAP`
    /// environment variable (default 256).
    #[error("order cap exceeded: {what} reached {reached}, cap is {cap} (set HOPFFORGE_ORDER_CAP to raise)")]
    OrderCap {
        /// What was being enumerated when the cap tripped.
        what: String,
        /// Size reached when construction was abandoned.
        reached: usize,
        /// Configured cap.
        cap: usize,
    },

    /// The base field does not split the algebra into full matrix blocks;
    /// enlarging the conductor may fix this.
    #[error("field does not split the algebra: {0}; enlarge the conductor")]
    FieldNotSplitting(String),

    /// The operation is not offered for this input shape.
    #[error("unsupported instance: {0}")]
    Unsupported(String),

    /// A value computed by this crate failed one of its own exhaustive
    /// verification passes. This indicates a bug in the crate, not in the
    /// caller's data.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    /// Underlying I/O failure (file reports, instance round-trips).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenient crate-wide result alias.
pub type Result<T> = std::result::Result<T, HopfError>;
