use alloc::string::String;

/// Errors raised by parsing, validation and the solvers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("connective '{0}' not in signature")]
    NotInSignature(String),
    #[error("connective '{name}' expects {expected} argument(s), found {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid connective definition: {0}")]
    BadDefinition(String),
    #[error("arity {0} exceeds the limit of 16")]
    ArityTooLarge(usize),
    #[error("belief operator not allowed")]
    BeliefNotAllowed,
    #[error("instance too large for brute-force strategy ({found} atoms, limit {limit})")]
    TooLarge { found: usize, limit: usize },
    #[error("entailment strategy {0} is not applicable to this instance")]
    StrategyNotApplicable(&'static str),
    #[error("kernel not total")]
    KernelNotTotal,
    #[error("kernel not full")]
    KernelNotFull,
    #[error("enumeration cap exceeded: {found} L-subformulae, cap {cap}")]
    CapExceeded { found: usize, cap: usize },
    #[error("not an affine knowledge base")]
    NotAffine,
    #[error("not a simple knowledge base")]
    NotSimple,
    #[error("invalid reduction input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
