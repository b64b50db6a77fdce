//! Error types shared across the library.

use crate::lattice::Bc;
use thiserror::Error;

/// Numeric and domain errors raised by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("state has {wave} sites but parameters describe {expected}")]
    DimensionMismatch { wave: usize, expected: usize },

    #[error("state uses {wave:?} boundaries but parameters describe {expected:?}")]
    BoundaryMismatch { wave: Bc, expected: Bc },

    #[error("amplitudes must all be finite")]
    NonFiniteAmplitude,

    #[error("a lattice state needs at least one site")]
    EmptyLattice,

    #[error("parameter {name} must be finite (got {value})")]
    NonFiniteParameter { name: &'static str, value: f64 },

    #[error("scale factor must be finite and nonzero (got {0})")]
    InvalidScale(f64),

    #[error("cannot normalize a state with zero norm")]
    ZeroNorm,

    #[error("invalid seed pattern: {0}")]
    InvalidPattern(String),

    #[error("pattern counts out of range: n={n}, m={m}, l={l} (need 1 <= n, 0 <= m <= n, 0 <= l <= n)")]
    PatternCounts { n: usize, m: usize, l: usize },

    #[error("energy diagnostic requires periodic boundaries")]
    DiagnosticNeedsPeriodic,

    #[error("energy diagnostic undefined: |sum psi| = {sum:.3e} is below {threshold:.3e} (sign-balanced state)")]
    UndefinedDiagnostic { sum: f64, threshold: f64 },

    #[error("no decaying tail for E = {0} (requires E < 0)")]
    NoDecayingTail(f64),

    #[error("linear system is near-degenerate: pivot {pivot:.3e} below {threshold:.3e}")]
    NearDegenerate { pivot: f64, threshold: f64 },

    #[error("energy correction undefined: |sum p + sum x| = {0:.3e} is below threshold")]
    UndefinedCorrection(f64),

    #[error("correction table inputs must each be 0 or +-1/sqrt(n); got ({0}, {1}, {2}) for n = {3}")]
    NotATableEntry(f64, f64, f64, usize),

    #[error("series expansion requires c > 4 (got {0})")]
    SeriesOutOfDomain(f64),

    #[error("series supports 1 to 4 terms (got {0})")]
    SeriesTermCount(usize),

    #[error("cycle must contain at least one site")]
    EmptyCycle,

    #[error("mismatched input lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// Errors raised while parsing or validating a scenario description.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },

    #[error("key `{key}`: {message}")]
    Invalid { key: String, message: String },

    #[error("missing required key `{0}`")]
    Missing(&'static str),

    #[error("scenario needs exactly one of seed_sites, seed_layout, seed_gaps")]
    SeedSpec,

    #[error("no built-in scenario named `{0}`")]
    NoSuchBuiltin(String),
}

/// Errors raised while executing a scenario (I/O plus everything below).
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Domain(#[from] Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
