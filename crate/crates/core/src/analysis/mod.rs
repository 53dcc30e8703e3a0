//! Exact and sampled semantics of automata on ultimately periodic words.

mod linsolve;
mod membership;
mod montecarlo;
mod oracle;
mod supports;

pub use linsolve::solve;
pub use membership::{count_two_accepting_runs, is_empty_nba, member_nondet, non_universal_witness_almost_sure};
pub use montecarlo::{monte_carlo, MonteCarloEstimate, STREAMS};
pub use oracle::{acceptance_probability, pfa_acceptance, LassoChain};
pub use supports::{myhill_nerode_supports, support_after, SupportClassSet};
