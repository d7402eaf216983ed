use thiserror::Error;

/// Failure to parse a number, operator or formula.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{input}`: {message}")]
pub struct ParseError {
    pub input: String,
    pub message: String,
}

impl ParseError {
    pub fn new(input: impl Into<String>, message: impl Into<String>) -> Self {
        Self { input: input.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("parameter g{0} has no assigned value")]
    MissingParameter(u32),

    #[error("invalid Hamiltonian order {0}: the order must be at least 1")]
    InvalidOrder(u32),

    #[error("order N = {0} is not supported here (supported: {1})")]
    UnsupportedOrder(u32, &'static str),

    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },

    #[error("leading parameter g{0} is zero; reduce the order instead")]
    VanishingLeadingParameter(u32),

    #[error("symmetry ansatz is inconsistent for g{gamma} (N = {order}); no symmetry with the requested leading term exists")]
    InconsistentAnsatz { order: u32, gamma: u32 },

    #[error("root finder did not converge on branch {branch}")]
    RootFinder { branch: String },

    #[error("no bound states: E(1) = {energy} is not positive")]
    NoBoundState { energy: String },

    #[error("invalid figure id {0} (expected 1..=5)")]
    InvalidFigure(u32),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
