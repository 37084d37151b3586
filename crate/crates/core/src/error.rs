use thiserror::Error;

/// Errors raised while building or manipulating theories, terms and algebras.
///
/// Verification failures are not errors: they are reported through
/// [`crate::report::Report`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("`{0}` is a reserved name")]
    ReservedName(String),

    #[error("generator `{0}` touches [0]; generators must have positive arities")]
    ZeroArity(String),

    #[error("object [{0}] is not available in {1} mode")]
    InvalidObject(usize, &'static str),

    #[error("object mismatch: expected [{expected}], found [{found}]")]
    ObjectMismatch { expected: usize, found: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("malformed term: {0}")]
    MalformedTerm(String),

    #[error("operation requires a pointed theory")]
    NotPointed,

    #[error("operation requires an unpointed theory")]
    Pointed,

    #[error("algebra: {0}")]
    Algebra(String),

    #[error("arity mismatch: expected {expected} inputs, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("table: {0}")]
    Table(String),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("map is not compatible with projections at {0}")]
    ProjectionIncompatible(String),

    #[error("map is not natural: {0}")]
    NotNatural(String),

    #[error("no factorization within bounds for {0}")]
    NoFactorization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
