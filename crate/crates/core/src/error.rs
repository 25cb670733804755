use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised while building or manipulating grammars, automata and their
/// underlying categories.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown color `{0}`")]
    UnknownColor(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("cannot compose a path ending at `{left}` with a path starting at `{right}`")]
    Composition { left: String, right: String },
    #[error("ill-typed path: {0}")]
    IllTypedPath(String),
    #[error("index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("epsilon transition from `{0}` is not supported; eliminate epsilon moves first")]
    EpsilonTransition(String),
    #[error("parse forest is cyclic: the word has infinitely many parses")]
    InfiniteAmbiguity,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid: {0}")]
    Invalid(String),
}
