use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown identifier `{name}` at line {line}, column {column}")]
    UnknownIdentifier {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("exponent depends on `{var}` at line {line}, column {column}")]
    VariableExponent {
        var: String,
        line: usize,
        column: usize,
    },

    #[error("expected {expected} coordinates, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("dimension {0} is too small, need n >= 3")]
    DimensionTooSmall(usize),

    #[error("duplicate coordinate name `{0}`")]
    DuplicateCoordinate(String),

    #[error("empty interval [{0}, {1}]")]
    EmptyInterval(f64, f64),

    #[error("parameter {t} lies outside [{t0}, {t1}]")]
    OutOfInterval { t: f64, t0: f64, t1: f64 },

    #[error("domain error: {op} of {value}")]
    Domain { op: &'static str, value: f64 },

    #[error("jet order {requested} exceeds the configured maximum {max}")]
    OrderOverflow { requested: usize, max: usize },

    #[error("insufficient jet depth: {what} needs order {needed}, only {available} available")]
    JetDepth {
        what: String,
        needed: usize,
        available: usize,
    },

    #[error("curve is not regular at t = {t}")]
    NotRegular { t: f64 },

    #[error("degenerate at step {step} (t = {t})")]
    Degenerate { t: f64, step: usize },

    #[error("grid point {index}: {source}")]
    AtGrid {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("grid too small: {size} points, need at least {min}")]
    GridTooSmall { size: usize, min: usize },

    #[error("profile kind mismatch: expected {expected}, got {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("verdict is not a helix, no axis to reconstruct")]
    NotAHelix,

    #[error("prescription invalid at s = {s:.6}: {message}")]
    Prescription { s: f64, message: String },

    #[error("orthonormality drift {drift:.3e} at s = {s:.6}; try h <= {suggested:.3e}")]
    StepTooLarge { drift: f64, s: f64, suggested: f64 },

    #[error("fixture rejected after {attempts} attempts: {reason}")]
    FixtureRejected { attempts: usize, reason: String },

    #[error("sphere grid with {candidates} candidates exceeds budget {budget}")]
    Budget { candidates: u128, budget: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_grid(self, index: usize) -> Error {
        Error::AtGrid {
            index,
            source: Box::new(self),
        }
    }

    /// Strips any grid-location wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtGrid { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for failures caused by the curve itself (degeneracy, domain,
    /// invalid prescription) as opposed to malformed input or I/O.
    pub fn is_curve_error(&self) -> bool {
        matches!(
            self.root(),
            Error::Domain { .. }
                | Error::NotRegular { .. }
                | Error::Degenerate { .. }
                | Error::Prescription { .. }
                | Error::StepTooLarge { .. }
                | Error::JetDepth { .. }
                | Error::OrderOverflow { .. }
                | Error::FixtureRejected { .. }
        )
    }
}
