//! Constructions producing weak probabilistic automata.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::automaton::{fresh_name, ProbAutomaton, ProbKind, StateId};
use crate::error::{Error, Result};
use crate::rational::{rat, Rational};
use crate::structure::is_weak_prob;
use crate::trim::{trim_prob, DEFAULT_SINK_NAME};

/// Guess and verify copies of a co-Büchi automaton. Guess-copy transitions
/// split their probability evenly between the two copies; in the verify copy
/// every transition into `F` is redirected to a fresh rejecting sink. The
/// verify copy is accepting.
pub fn pca_to_pwa(pca: &ProbAutomaton) -> Result<ProbAutomaton> {
    if pca.kind() != ProbKind::CoBuchi {
        return Err(Error::Precondition("expected a co-Büchi automaton".into()));
    }
    let a = trim_prob(pca);
    let n = a.num_states();
    let g = |q: StateId| q;
    let v = |q: StateId| n + q;
    let sink = 2 * n;
    let mut names: Vec<String> = (0..n).map(|q| format!("({},g)", a.state_name(q))).collect();
    names.extend((0..n).map(|q| format!("({},v)", a.state_name(q))));
    names.push(fresh_name(DEFAULT_SINK_NAME, &names));
    let half = rat(1, 2);
    let mut transitions = Vec::new();
    for p in 0..n {
        for x in 0..a.num_symbols() {
            let mut lost = Rational::zero();
            for (q, pr) in a.distribution(p, x) {
                transitions.push((g(p), x, g(*q), pr * &half));
                transitions.push((g(p), x, v(*q), pr * &half));
                if a.is_accepting(*q) {
                    lost += pr;
                } else {
                    transitions.push((v(p), x, v(*q), pr.clone()));
                }
            }
            if !lost.is_zero() {
                transitions.push((v(p), x, sink, lost));
            }
        }
    }
    transitions.extend((0..a.num_symbols()).map(|x| (sink, x, sink, Rational::one())));
    let init: Vec<_> = a.initial().iter().map(|(q, pr)| (g(*q), pr.clone())).collect();
    let accepting: BTreeSet<StateId> = (0..n).map(v).collect();
    ProbAutomaton::new(
        pca.name(),
        names,
        a.alphabet().to_vec(),
        transitions,
        init,
        accepting,
        ProbKind::Weak,
        Some(sink),
    )
}

/// Swaps accepting and rejecting states of a weak automaton. The rejecting
/// sink becomes accepting, so the result has no designated sink. The value of
/// every word becomes `1 − value`.
pub fn complement_pwa(pwa: &ProbAutomaton) -> Result<ProbAutomaton> {
    if !matches!(pwa.kind(), ProbKind::Weak | ProbKind::Buchi) || !is_weak_prob(pwa) {
        return Err(Error::Precondition("expected a weak automaton".into()));
    }
    let accepting = (0..pwa.num_states()).filter(|q| !pwa.is_accepting(*q)).collect();
    ProbAutomaton::new(
        pwa.name(),
        pwa.state_names().to_vec(),
        pwa.alphabet().to_vec(),
        pwa.transitions().map(|(p, a, q, pr)| (p, a, q, pr.clone())),
        pwa.initial().to_vec(),
        accepting,
        ProbKind::Weak,
        None,
    )
}

/// Weak automaton from a finite-word automaton over a fresh separator symbol
/// `sep`: from accepting states `sep` restarts the automaton, from the other
/// states it leads to `q_sep`, which loops on the old symbols and moves to the
/// accepting sink `q_acc` with probability 1/2 on `sep`.
pub fn pfa_to_pwa_value1(pfa: &ProbAutomaton) -> Result<ProbAutomaton> {
    if pfa.kind() != ProbKind::FiniteWord {
        return Err(Error::Precondition("expected a finite-word automaton".into()));
    }
    let n = pfa.num_states();
    let k = pfa.num_symbols();
    let mut alphabet = pfa.alphabet().to_vec();
    let sep = k;
    alphabet.push(fresh_name("sep", pfa.alphabet()));
    let mut names = pfa.state_names().to_vec();
    let q_sep = n;
    let q_acc = n + 1;
    names.push(fresh_name("q_sep", &names));
    names.push(fresh_name("q_acc", &names));
    let mut transitions: Vec<_> = pfa.transitions().map(|(p, a, q, pr)| (p, a, q, pr.clone())).collect();
    for p in 0..n {
        if pfa.is_accepting(p) {
            transitions.extend(pfa.initial().iter().map(|(q, pr)| (p, sep, *q, pr.clone())));
        } else {
            transitions.push((p, sep, q_sep, Rational::one()));
        }
    }
    for x in 0..k {
        transitions.push((q_sep, x, q_sep, Rational::one()));
        transitions.push((q_acc, x, q_acc, Rational::one()));
    }
    transitions.push((q_sep, sep, q_sep, rat(1, 2)));
    transitions.push((q_sep, sep, q_acc, rat(1, 2)));
    transitions.push((q_acc, sep, q_acc, Rational::one()));
    ProbAutomaton::new(
        pfa.name(),
        names,
        alphabet,
        transitions,
        pfa.initial().to_vec(),
        [q_acc].into_iter().collect(),
        ProbKind::Weak,
        None,
    )
}
