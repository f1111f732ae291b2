use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("formula is not regular: {0}")]
    Irregular(String),
    #[error("not a sentence: free variables {0:?}")]
    Open(Vec<String>),
    #[error("team is not suitable: missing variables {0:?}")]
    Unsuitable(Vec<String>),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("relation `{name}` used with arity {found}, expected {expected}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("formula is not in negation-normal form")]
    NotNegationNormal,
    #[error("incomplete completion: no formula for gap {0}")]
    MissingGap(usize),
    #[error("rule does not match here: {0}")]
    Shape(String),
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("search budget of {0} nodes exceeded")]
    Budget(u64),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("choice function is not total on the team")]
    PartialFunction,
    #[error("{0}")]
    Limit(String),
}

impl Error {
    /// Parse and input errors are the caller's data problems; the rest are
    /// violated preconditions.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Input(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
