use thiserror::Error;

/// Errors raised by the channel, coding, jamming and estimation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller broke an operation's precondition (shape, range, sign).
    #[error("contract violation: {0}")]
    Contract(String),
    /// The requested strategy or bound does not exist under the given budgets.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// A serialized object could not be parsed.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! contract {
    ($cond:expr, $($arg:tt)+) => {
        // NaN fails every comparison, so it fails the contract too
        let holds: bool = $cond;
        if !holds {
            return Err($crate::Error::Contract(format!($($arg)+)));
        }
    };
}
pub(crate) use contract;
