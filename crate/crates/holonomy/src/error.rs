//! Error types shared across the crate.
//!
//! [`MathError`] covers failures raised by the geometric/algebraic kernels
//! (domain violations, incompatible operands, broken preconditions), while
//! [`ConfigError`] covers everything that can go wrong before a scenario is
//! allowed to run (parse failures, unknown identifiers, I/O).

use thiserror::Error;

/// Failures raised by the numerical and algebraic kernels.
#[derive(Debug, Error)]
pub enum MathError {
    /// Two operands live over different group families.
    #[error("group tag mismatch: expected {expected}, found {found}")]
    TagMismatch { expected: String, found: String },

    /// The principal logarithm was requested outside its injectivity radius.
    #[error("matrix logarithm outside principal domain: |g - I| = {norm:.6} >= 1.9")]
    LogDomain { norm: f64 },

    /// A kernel produced or consumed a non-finite value.
    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    /// A field evaluator returned an invalid value at the given base point.
    #[error("field evaluation failed at ({x:.6}, {y:.6}): {reason}")]
    FieldEvaluation { x: f64, y: f64, reason: String },

    /// The two-form inversion needed for curvature-cancelling fields requires
    /// an invertible target map.
    #[error("tau is not invertible for crossed module '{module}'; cannot solve tau(B) = -F")]
    TauNotInvertible { module: String },

    /// Sampled data does not match the expected grid layout.
    #[error("grid mismatch: {reason}")]
    GridMismatch { reason: String },

    /// A claimed reparametrization fails to be an orientation-preserving
    /// diffeomorphism on the sampled grid.
    #[error("reparametrization is not a diffeomorphism: {reason}")]
    NotDiffeo { reason: String },

    /// An invariance theorem was invoked without its hypothesis holding.
    #[error("hypothesis violated before verification ran: {reason}")]
    ConditionViolated { reason: String },

    /// A two-parameter variation is too degenerate for finite differencing.
    #[error("variation too coarse for finite differencing: {reason}")]
    VariationTooCoarse { reason: String },

    /// Two squares were composed along edges that do not match.
    #[error("squares not composable: {reason}")]
    NotComposable { reason: String },

    /// A square violates the quasi-flatness constraint it was required to satisfy.
    #[error("square is not quasi-flat: residual {residual:.3e}")]
    NotQuasiFlat { residual: f64 },

    /// A claimed central twist does not commute with the group.
    #[error("element is not central: commutator residual {residual:.3e}")]
    NotCentral { residual: f64 },
}

/// Failures raised while reading configuration, before any task runs.
#[derive(Debug, Error)]
pub enum ConfigError {
    /// The scenario file is not syntactically valid.
    #[error("config parse error: {0}")]
    ConfigParse(String),

    /// A task identifier in the scenario is not recognised.
    #[error("unknown task '{0}'")]
    UnknownTask(String),

    /// A family identifier (crossed module, field, path, surface) is not recognised.
    #[error("unknown family '{0}'")]
    UnknownFamily(String),

    /// Reading or writing a file failed.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
