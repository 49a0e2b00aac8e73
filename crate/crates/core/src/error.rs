use thiserror::Error;

/// Every failure the library reports.
///
/// Rejections that are ordinary outcomes of a search (an input the machine does
/// not accept, a sample set too small for the pigeonhole) are *not* errors; they
/// are returned as values. Only malformed input and violated preconditions end
/// up here.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range for a word of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: isize, hi: isize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid symbol token `{0}`")]
    InvalidToken(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid sample set: {0}")]
    InvalidSampleSet(String),

    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("machine is not in the endmarked Greibach shape: {0}")]
    NotGnfNormal(String),
    #[error("search budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("path does not belong to the machine run: {0}")]
    PathMismatch(String),

    #[error("invalid grammar: {0}")]
    InvalidGrammar(String),
    #[error("grammar is not in Greibach normal form: {0}")]
    NotGnf(String),
    #[error("the grammar generates the empty string")]
    EmptyStringInLanguage,
    #[error("the grammar generates no string")]
    EmptyLanguage,

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid length {n}: {reason}")]
    InvalidLength { n: usize, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sample `{0}` is not accepted by the subject machine")]
    NotInLanguage(String),
    #[error("invalid block lengths: {0}")]
    InvalidBlocks(String),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no index assignment found within a truncated path budget of {0}")]
    PathBudgetExceeded(usize),
    #[error("no index assignment exists for `{0}`")]
    NoAssignment(String),
    #[error("swapped string `{0}` was rejected on re-simulation")]
    VerificationFailed(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
