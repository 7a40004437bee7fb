use thiserror::Error;

use crate::diag::{Code, Diagnostic};
use crate::types::Type;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{line}:{col}: E001 {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("duplicate directive for `{0}`")]
    DuplicateDirective(String),

    #[error("program is not a well-typed definitional program ({} problem(s))", .0.len())]
    Invalid(Vec<Diagnostic>),

    #[error("E301 domain of type {ty} too large: predicted {predicted} elements, cap {cap}")]
    DomainTooLarge {
        ty: Type,
        predicted: String,
        cap: u64,
    },

    #[error("result needs more than {cap_bits} bits")]
    TooLarge { cap_bits: u64 },

    #[error("character {0:?} is not in the input alphabet {{a, b}}")]
    BadInput(char),

    #[error("`input` is declared as {0}, expected i -> i -> i -> o")]
    InputSignature(Type),

    #[error("engine precondition: {0}")]
    Precondition(String),

    #[error("no fixpoint after {0} iterations")]
    IterationCap(usize),

    #[error("turing machine, line {line}: {message}")]
    Machine { line: usize, message: String },

    #[error("unknown: budget of {steps} steps exhausted")]
    BudgetExhausted { steps: u64 },

    #[error("generation failed: {0}")]
    Generation(String),
}

impl Error {
    /// Stable diagnostic code, when one applies.
    pub fn code(&self) -> Option<Code> {
        match self {
            Error::Syntax { .. } | Error::DuplicateDirective(_) => Some(Code::E001),
            Error::DomainTooLarge { .. } => Some(Code::E301),
            Error::Invalid(ds) => ds.first().map(|d| d.code),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
