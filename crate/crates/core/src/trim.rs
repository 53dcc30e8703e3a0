//! Trimming and the underlying nondeterministic automaton of a probabilistic one.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::automaton::{fresh_name, Acceptance, Automaton, NondetAutomaton, ProbAutomaton, ProbKind, StateId};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scc::{reachable, SccDecomposition};

pub const DEFAULT_SINK_NAME: &str = "q_rej";

/// Removes unreachable states and useless SCCs.
pub fn trim_nondet(aut: &NondetAutomaton) -> Result<NondetAutomaton> {
    let sccs = SccDecomposition::of_nondet(aut);
    let reach = reachable(&aut.adjacency(), aut.initials().iter().copied());
    let keep: Vec<bool> = (0..aut.num_states()).map(|q| reach[q] && !sccs.state_is_useless(q)).collect();
    let out = aut.restrict(&keep);
    if out.initials().is_empty() {
        return Err(Error::EmptyAutomaton);
    }
    Ok(out)
}

/// Drops unreachable states and collapses every useless SCC into one
/// rejecting sink that absorbs the probability mass flowing into them. The
/// sink keeps the name of an existing designated sink, if any.
pub fn trim_prob(aut: &ProbAutomaton) -> ProbAutomaton {
    let n = aut.num_states();
    let sccs = SccDecomposition::of_prob(aut);
    let reach = reachable(&aut.adjacency(), aut.initial_support());
    let keep: Vec<bool> = (0..n).map(|q| reach[q] && !sccs.state_is_useless(q)).collect();

    let mut map = vec![None; n];
    let mut states = Vec::new();
    for q in 0..n {
        if keep[q] {
            map[q] = Some(states.len());
            states.push(aut.state_name(q).to_string());
        }
    }
    let sink_name = match aut.rej_sink() {
        Some(s) => aut.state_name(s).to_string(),
        None => fresh_name(DEFAULT_SINK_NAME, &states),
    };
    let sink = states.len();

    let mut transitions = Vec::new();
    let mut needs_sink = false;
    for p in (0..n).filter(|&p| keep[p]) {
        for a in 0..aut.num_symbols() {
            let mut lost = Rational::zero();
            for (q, pr) in aut.distribution(p, a) {
                match map[*q] {
                    Some(nq) => transitions.push((map[p].unwrap(), a, nq, pr.clone())),
                    None => lost += pr,
                }
            }
            if !lost.is_zero() {
                needs_sink = true;
                transitions.push((map[p].unwrap(), a, sink, lost));
            }
        }
    }
    let mut init = Vec::new();
    let mut lost = Rational::zero();
    for (q, pr) in aut.initial() {
        match map[*q] {
            Some(nq) => init.push((nq, pr.clone())),
            None => lost += pr,
        }
    }
    if !lost.is_zero() {
        needs_sink = true;
        init.push((sink, lost));
    }
    let mut accepting: BTreeSet<StateId> = aut.accepting().iter().filter_map(|&q| map[q]).collect();
    let rej_sink = if needs_sink {
        states.push(sink_name);
        for a in 0..aut.num_symbols() {
            transitions.push((sink, a, sink, Rational::from_integer(1.into())));
        }
        if aut.kind().sink_in_final_set() {
            accepting.insert(sink);
        }
        Some(sink)
    } else {
        None
    };
    ProbAutomaton::new(
        aut.name(),
        states,
        aut.alphabet().to_vec(),
        transitions,
        init,
        accepting,
        aut.kind(),
        rej_sink,
    )
    .expect("trimming preserves validity")
}

/// Trims either flavor.
pub fn trim(aut: &Automaton) -> Result<Automaton> {
    Ok(match aut {
        Automaton::Nondet(a) => Automaton::Nondet(trim_nondet(a)?),
        Automaton::Prob(a) => Automaton::Prob(trim_prob(a)),
    })
}

/// Positive-probability edges and the support of `μ_0`, with the designated
/// rejecting sink removed. Büchi, weak and finite-word kinds map to Büchi
/// acceptance on `F`, co-Büchi to co-Büchi.
pub fn underlying_nba(pba: &ProbAutomaton) -> NondetAutomaton {
    let sink = pba.rej_sink();
    let keep: Vec<bool> = (0..pba.num_states()).map(|q| Some(q) != sink).collect();
    let mut map = BTreeMap::new();
    let mut states = Vec::new();
    for q in (0..pba.num_states()).filter(|&q| keep[q]) {
        map.insert(q, states.len());
        states.push(pba.state_name(q).to_string());
    }
    let transitions: Vec<_> = pba
        .transitions()
        .filter_map(|(p, a, q, _)| Some((*map.get(&p)?, a, *map.get(&q)?)))
        .collect();
    let initials: Vec<_> = pba.initial_support().into_iter().filter_map(|q| map.get(&q).copied()).collect();
    let f: BTreeSet<StateId> = pba.accepting().iter().filter_map(|q| map.get(q).copied()).collect();
    let acceptance = match pba.kind() {
        ProbKind::CoBuchi => Acceptance::CoBuchi(f),
        _ => Acceptance::Buchi(f),
    };
    NondetAutomaton::new(pba.name(), states, pba.alphabet().to_vec(), transitions, initials, acceptance)
        .expect("underlying automaton of a valid automaton is valid")
}

/// `underlying_nba(trim_prob(pba))`.
pub fn trimmed_underlying(pba: &ProbAutomaton) -> NondetAutomaton {
    underlying_nba(&trim_prob(pba))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn removes_unreachable_accepting_state() {
        let a = NondetAutomaton::new(
            "t",
            names(&["q0", "q1"]),
            names(&["a"]),
            vec![(0, 0, 0), (1, 0, 1)],
            vec![0],
            Acceptance::Buchi([0, 1].into_iter().collect()),
        )
        .unwrap();
        let t = trim_nondet(&a).unwrap();
        assert_eq!(t.state_names(), &["q0".to_string()]);
    }

    #[test]
    fn empty_language_is_an_error() {
        let a = NondetAutomaton::new(
            "t",
            names(&["q0"]),
            names(&["a"]),
            vec![(0, 0, 0)],
            vec![0],
            Acceptance::Buchi(BTreeSet::new()),
        )
        .unwrap();
        assert!(matches!(trim_nondet(&a), Err(Error::EmptyAutomaton)));
    }

    #[test]
    fn useless_mass_goes_to_sink() {
        // q1 is a non-accepting trap reached with probability 1/3
        let a = ProbAutomaton::new(
            "t",
            names(&["q0", "q1"]),
            names(&["a"]),
            vec![(0, 0, 0, rat(2, 3)), (0, 0, 1, rat(1, 3)), (1, 0, 1, rat(1, 1))],
            vec![(0, rat(1, 1))],
            [0].into_iter().collect(),
            ProbKind::Buchi,
            None,
        )
        .unwrap();
        let t = trim_prob(&a);
        assert_eq!(t.state_names(), &names(&["q0", "q_rej"]));
        assert_eq!(t.rej_sink(), Some(1));
        assert_eq!(t.prob(0, 0, 1), rat(1, 3));
        let tt = trim_prob(&t);
        assert_eq!(tt.state_names(), t.state_names());
        assert_eq!(tt.prob(0, 0, 1), rat(1, 3));
    }

    #[test]
    fn cobuchi_sink_is_final() {
        let a = ProbAutomaton::new(
            "t",
            names(&["q0", "bad"]),
            names(&["a"]),
            vec![(0, 0, 0, rat(1, 2)), (0, 0, 1, rat(1, 2)), (1, 0, 1, rat(1, 1))],
            vec![(0, rat(1, 1))],
            [1].into_iter().collect(),
            ProbKind::CoBuchi,
            None,
        )
        .unwrap();
        let t = trim_prob(&a);
        let s = t.rej_sink().unwrap();
        assert!(t.is_accepting(s));
    }
}
