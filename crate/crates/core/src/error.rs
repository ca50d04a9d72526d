use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("symbol `{symbol}` has arity {arity}, expected {expected}")]
    BadArity {
        symbol: String,
        arity: usize,
        expected: usize,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("term `{0}` is not linear; linearize it and evaluate the linear term with repeated arguments")]
    NonLinearTerm(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("a unique unit is required, found {found} unit element(s)")]
    UnitRequired { found: usize },
    #[error("{what}: requested {requested} exceeds the configured cap of {limit}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("the given set does not generate the element `{target}`; the subreduct join only reaches `{achieved}`")]
    NotGenerating { target: String, achieved: String },
    #[error("extension is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("target lacks the {0} required by this free model")]
    MissingConstant(&'static str),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
