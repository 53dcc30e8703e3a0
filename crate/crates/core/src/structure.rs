//! Structural queries: determinism, weakness and forks.

use std::collections::BTreeSet;

use crate::automaton::{Acceptance, NondetAutomaton, ProbAutomaton, StateId, SymbolId};
use crate::scc::{component_ids, SccDecomposition};

pub fn is_deterministic(aut: &NondetAutomaton) -> bool {
    aut.initials().len() <= 1
        && (0..aut.num_states()).all(|p| (0..aut.num_symbols()).all(|a| aut.successors(p, a).len() <= 1))
}

/// A 0/1 automaton with a single initial state.
pub fn is_deterministic_prob(aut: &ProbAutomaton) -> bool {
    aut.initial().len() == 1
        && (0..aut.num_states()).all(|p| (0..aut.num_symbols()).all(|a| aut.distribution(p, a).len() == 1))
}

pub(crate) fn final_set_is_scc_union(adj: &[Vec<usize>], f: &BTreeSet<StateId>) -> bool {
    let (_, comps) = component_ids(adj);
    comps.iter().all(|c| {
        let inside = c.iter().filter(|q| f.contains(q)).count();
        inside == 0 || inside == c.len()
    })
}

/// Every acceptance set is a union of SCCs.
pub fn is_weak(aut: &NondetAutomaton) -> bool {
    let adj = aut.adjacency();
    match aut.acceptance() {
        Acceptance::Buchi(f) | Acceptance::CoBuchi(f) => final_set_is_scc_union(&adj, f),
        Acceptance::GeneralizedBuchi(sets) => sets.iter().all(|f| final_set_is_scc_union(&adj, f)),
        Acceptance::Parity(_) => final_set_is_scc_union(&adj, &aut.acceptance().final_states()),
    }
}

pub fn is_weak_prob(aut: &ProbAutomaton) -> bool {
    final_set_is_scc_union(&aut.adjacency(), aut.accepting())
}

/// Two distinct successors of `state` on `symbol`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fork {
    pub state: StateId,
    pub symbol: SymbolId,
    pub targets: (StateId, StateId),
    /// All three states share one SCC.
    pub intra_scc: bool,
}

/// One entry per unordered pair of successors.
pub fn forks(aut: &NondetAutomaton) -> Vec<Fork> {
    let sccs = SccDecomposition::of_nondet(aut);
    let mut out = Vec::new();
    for p in 0..aut.num_states() {
        for a in 0..aut.num_symbols() {
            let succ = aut.successors(p, a);
            for (i, &q) in succ.iter().enumerate() {
                for &r in &succ[i + 1..] {
                    out.push(Fork {
                        state: p,
                        symbol: a,
                        targets: (q, r),
                        intra_scc: sccs.same_component(p, q) && sccs.same_component(p, r),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nba(trans: &[(usize, usize, usize)], n: usize, init: &[usize], f: &[usize]) -> NondetAutomaton {
        NondetAutomaton::new(
            "t",
            (0..n).map(|i| format!("q{i}")).collect(),
            vec!["a".into(), "b".into()],
            trans.iter().copied(),
            init.iter().copied(),
            Acceptance::Buchi(f.iter().copied().collect()),
        )
        .unwrap()
    }

    #[test]
    fn dba_has_no_forks() {
        let d = nba(&[(0, 0, 1), (0, 1, 0), (1, 0, 1), (1, 1, 0)], 2, &[0], &[1]);
        assert!(is_deterministic(&d));
        assert!(forks(&d).is_empty());
    }

    #[test]
    fn fork_tags() {
        // 0 -a-> {0,1}, 1 -b-> 0 : intra; 0 -b-> {0, 2}: inter
        let a = nba(&[(0, 0, 0), (0, 0, 1), (1, 1, 0), (0, 1, 0), (0, 1, 2), (2, 0, 2)], 3, &[0], &[0]);
        let fs = forks(&a);
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().any(|f| f.symbol == 0 && f.intra_scc));
        assert!(fs.iter().any(|f| f.symbol == 1 && !f.intra_scc));
        assert!(!is_deterministic(&a));
    }

    #[test]
    fn single_accepting_loop_is_weak() {
        let a = nba(&[(0, 0, 0), (0, 1, 0)], 1, &[0], &[0]);
        assert!(is_weak(&a));
        let b = nba(&[(0, 0, 1), (1, 0, 0)], 2, &[0], &[0]);
        assert!(!is_weak(&b));
    }
}
