use thiserror::Error;

use super::atom::FuncId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("binding for `{func}` uses {symbol}, which is outside its argument set")]
    ArgumentViolation { func: FuncId, symbol: String },
    #[error("rational-constant membership requires polynomial input")]
    ModeViolation,
}
