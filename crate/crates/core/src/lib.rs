//! Probabilistic and classical ω-automata: ambiguity patterns, translations
//! between probabilistic and nondeterministic automata, and exact acceptance
//! probabilities on ultimately periodic words.
//!
//! All semantic computations use exact rationals.

pub mod analysis;
pub mod automaton;
pub mod degeneralize;
pub mod error;
pub mod format;
mod lasso;
pub mod patterns;
pub mod rational;
pub mod scc;
pub mod structure;
pub mod translate;
pub mod trim;

pub use automaton::{
    Acceptance, Automaton, NondetAutomaton, ProbAutomaton, ProbKind, StateId, SymbolId, UltimatelyPeriodicWord,
};
pub use degeneralize::degeneralize;
pub use error::{Error, Result};
pub use format::{parse_automaton, read_automaton, serialize_automaton};
pub use patterns::{AmbiguityClass, AmbiguityDegree, Pattern, PatternWitness};
pub use rational::{format_rational, parse_rational, Rational};
pub use scc::SccDecomposition;
pub use trim::{trim, trim_nondet, trim_prob, underlying_nba};
