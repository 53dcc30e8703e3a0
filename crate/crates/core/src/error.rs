use thiserror::Error;

use crate::patterns::PatternWitness;
use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: undeclared {what} `{name}`")]
    Undeclared { line: usize, what: &'static str, name: String },

    #[error("distribution of state `{state}` on symbol `{symbol}` sums to {sum}, expected 1")]
    DistributionSum { state: String, symbol: String, sum: Rational },

    #[error("initial distribution sums to {sum}, expected 1")]
    InitialSum { sum: Rational },

    #[error("invalid automaton: {0}")]
    Invalid(String),

    #[error("automaton has no useful state")]
    EmptyAutomaton,

    #[error("not countably ambiguous: {0}")]
    NotCountablyAmbiguous(PatternWitness),

    #[error("not finitely ambiguous: {0}")]
    NotFinitelyAmbiguous(PatternWitness),

    #[error("threshold {0} must lie strictly between 0 and 1")]
    InvalidThreshold(Rational),

    #[error("precondition violated: {reason}: {witness}")]
    PatternPrecondition { reason: String, witness: PatternWitness },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Parse and validation failures, as opposed to semantic precondition
    /// violations of an operation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::Undeclared { .. }
                | Error::DistributionSum { .. }
                | Error::InitialSum { .. }
                | Error::Invalid(_)
        )
    }

    /// The pattern witness carried by the error, if any.
    pub fn witness(&self) -> Option<&PatternWitness> {
        match self {
            Error::NotCountablyAmbiguous(w)
            | Error::NotFinitelyAmbiguous(w)
            | Error::PatternPrecondition { witness: w, .. } => Some(w),
            _ => None,
        }
    }
}
