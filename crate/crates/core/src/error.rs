use thiserror::Error;

/// Errors raised by the engine.
///
/// Variants fall in two groups: rejections of the input (bad expression,
/// field not vanishing at the origin, module not closed under bracket, ...)
/// and internal invariant violations. The latter mean that a check the
/// theory guarantees has failed, so they always indicate a bug or an input
/// outside the supported class.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("homogeneous component of degree {degree} is not above k = {k}")]
    DegreeTooLow { degree: u32, k: u32 },

    #[error("generator {index} does not vanish at the origin (constant terms: {constants})")]
    NotVanishing { index: usize, constants: String },

    #[error("empty generator list")]
    NoGenerators,

    #[error("not closed under bracket: [g{i}, g{j}] = {bracket} is not in the module")]
    NotInvolutive { i: usize, j: usize, bracket: String },

    #[error("module is not preserved by the Euler field: [E, g{index}] = {bracket} is not a member")]
    NotEulerInvariant { index: usize, bracket: String },

    #[error("linear action is not closed under bracket: [a{i}, a{j}] leaves the span")]
    ActionNotClosed { i: usize, j: usize },

    #[error("radical is not invariant: [a{action}, r{radical}] = {bracket} is not in the radical module")]
    NotInvariant {
        action: usize,
        radical: usize,
        bracket: String,
    },

    #[error("linear action meets the radical module: {witness}")]
    NontrivialIntersection { witness: String },

    #[error("structure constants violate {0}")]
    InvalidStructureConstants(String),

    #[error("representation is not a Lie algebra morphism: {0}")]
    InvalidRepresentation(String),

    #[error("cochain of degree {degree} is not a cocycle")]
    NotACocycle { degree: usize },

    #[error("cocycle represents a nonzero cohomology class (residual {residual:?})")]
    NonzeroCohomologyClass { residual: Vec<String> },

    #[error("cochain degree {0} is not supported here")]
    UnsupportedDegree(usize),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared variable `{name}` at line {line}, column {column}")]
    UndeclaredVariable {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated{}: {message}", degree.map(|d| format!(" at degree {d}")).unwrap_or_default())]
    Internal { message: String, degree: Option<u32> },
}

impl Error {
    pub fn internal(message: impl Into<String>) -> Self {
        Error::Internal {
            message: message.into(),
            degree: None,
        }
    }

    pub fn internal_at(degree: u32, message: impl Into<String>) -> Self {
        Error::Internal {
            message: message.into(),
            degree: Some(degree),
        }
    }

    /// Attaches a degree to an internal error that does not carry one yet.
    pub fn at_degree(self, d: u32) -> Self {
        match self {
            Error::Internal { message, degree: None } => Error::Internal {
                message,
                degree: Some(d),
            },
            other => other,
        }
    }

    /// `true` for violations of invariants the theory guarantees.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Internal { .. } | Error::NotACocycle { .. } | Error::NonzeroCohomologyClass { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
