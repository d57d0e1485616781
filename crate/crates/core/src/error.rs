use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset contains no transactions")]
    EmptyDataset,

    #[error("malformed input at line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("token {0:?} is reserved for the padding character")]
    ReservedToken(String),

    #[error("minsup {minsup} is out of range 1..={transactions}")]
    MinsupOutOfRange { minsup: usize, transactions: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("variable count {0} exceeds the solver id space")]
    Overflow(u64),

    #[error("ill-formed model: {0}")]
    IllFormedModel(String),

    #[error("regex syntax error at symbol {position}: {message}")]
    RegexSyntax { position: usize, message: String },

    #[error("regex token {0:?} does not occur in the vocabulary")]
    TokenNotInVocabulary(String),

    #[error("gap table has no entry for position {position}, token {token:?}")]
    PartialGapTable { position: usize, token: String },

    #[error("pattern of length {length} has too many subsequences to block (cap {cap})")]
    SubsequenceBlowup { length: usize, cap: u64, pattern: Vec<u32> },

    #[error("oracle search exceeded its budget of {0} nodes")]
    BudgetExceeded(u64),

    #[error("external solver: {0}")]
    ExternalSolver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
