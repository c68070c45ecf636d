//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two factors with the same label in one layout (e.g. from `tensor`).
    #[error("factor label `{0}` appears more than once")]
    LabelCollision(String),

    /// Binary operation on states with different layouts.
    #[error("layouts do not match: [{0}] vs [{1}]")]
    LayoutMismatch(String, String),

    /// A factor label not present in the layout.
    #[error("no factor labeled `{0}` in layout")]
    UnknownFactor(String),

    /// Basis index beyond the dimension of its factor.
    #[error("basis index {index} out of range for factor `{label}` (dim {dim})")]
    IndexOutOfRange {
        label: String,
        index: usize,
        dim: usize,
    },

    /// Amplitude vector length inconsistent with the layout.
    #[error("amplitude vector has length {got}, layout requires {expected}")]
    AmplitudeLength { expected: usize, got: usize },

    /// Operator dimension inconsistent with the targeted factors.
    #[error("operator dimension {got} does not match target factors (expected {expected})")]
    DimensionMismatch { expected: usize, got: usize },

    /// Operator failed the unitarity check.
    #[error("operator is not unitary (max |U\u{2020}U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    /// Projection onto an outcome whose probability is numerically zero.
    #[error("measurement outcome has zero probability (p = {prob:.3e})")]
    ZeroProbability { prob: f64 },

    /// An operation that requires a normalized state got something else.
    #[error("state is not normalized (squared norm = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    /// A physical parameter outside its documented range.
    #[error("parameter {name} = {value} outside {range}")]
    ParameterRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// Requested photon number does not fit below the Fock cutoff.
    #[error("photon number {n} exceeds Fock cutoff {cutoff}")]
    PhotonAboveCutoff { n: u32, cutoff: usize },

    /// The two-cavity target state is only defined for a shared mean phase.
    #[error("mean phases must agree for the target state (theta1 = {theta1}, theta2 = {theta2})")]
    PhaseMismatch { theta1: f64, theta2: f64 },

    /// Timing search over an empty m range.
    #[error("empty timing search range")]
    EmptyRange,

    /// Timing search outside the default interaction-time window.
    #[error("m range [{lo}, {hi}] extends beyond [0, 16]; enable the extended search to allow it")]
    RangeBeyondDefault { lo: u32, hi: u32 },

    /// Malformed config file.
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// CSV emission failure, annotated with the output path.
    #[error("csv write failed for {path}: {source}")]
    Csv { path: String, source: csv::Error },
}
