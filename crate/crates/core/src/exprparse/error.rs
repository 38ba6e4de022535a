use std::fmt;

use thiserror::Error;

/// 1-based line and column (in characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Position, message: String },
    #[error("{pos}: unknown symbol `{name}`")]
    UnknownSymbol { pos: Position, name: String },
    #[error("{pos}: `{func}` cannot use {symbol}: not among its arguments")]
    ArgumentViolation { pos: Position, func: String, symbol: String },
    #[error("{pos}: `{name}` is already defined")]
    DuplicateDefinition { pos: Position, name: String },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

impl ParseError {
    pub fn position(&self) -> Option<Position> {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::ArgumentViolation { pos, .. }
            | ParseError::DuplicateDefinition { pos, .. } => Some(*pos),
            ParseError::InvalidProblem(_) => None,
        }
    }
}
