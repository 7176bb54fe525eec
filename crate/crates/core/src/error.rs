use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Infinite complexities are values ([`crate::LogBits::INFINITY`] or `None`),
/// never errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{namespace} namespace is not prefix-free: {shorter} is a prefix of {longer}")]
    NotPrefixFree {
        namespace: String,
        shorter: String,
        longer: String,
    },

    #[error("duplicate program {program} in {namespace} namespace")]
    DuplicateProgram { namespace: String, program: String },

    #[error("Kraft sum of {namespace} namespace is {sum}, which exceeds 1")]
    KraftViolation { namespace: String, sum: String },

    #[error("element {element} lies outside the universe of {n}-bit strings")]
    OutsideUniverse { element: String, n: u32 },

    #[error("universe element {0} has no data program")]
    Uncovered(String),

    #[error("empty set is not a model")]
    EmptySet,

    #[error("set is not representable in this system")]
    Unrepresentable,

    #[error("{0} is not an element of the set")]
    NotMember(String),

    #[error("malformed code word: {0}")]
    Decode(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Short machine-readable tag, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::NotPrefixFree { .. } => "not_prefix_free",
            Error::DuplicateProgram { .. } => "duplicate_program",
            Error::KraftViolation { .. } => "kraft_violation",
            Error::OutsideUniverse { .. } => "outside_universe",
            Error::Uncovered(_) => "uncovered_element",
            Error::EmptySet => "empty_set",
            Error::Unrepresentable => "unrepresentable",
            Error::NotMember(_) => "not_member",
            Error::Decode(_) => "decode",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Refused(_) => "refused",
        }
    }
}
