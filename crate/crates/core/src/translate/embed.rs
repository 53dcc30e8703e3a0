//! Embeddings of classical automata into probabilistic ones and back.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::automaton::{fresh_name, Acceptance, NondetAutomaton, ProbAutomaton, ProbKind, StateId};
use crate::error::{Error, Result};
use crate::patterns::{find_eda, pattern_automaton};
use crate::rational::Rational;
use crate::scc::SccDecomposition;
use crate::structure::is_deterministic;
use crate::trim::{trim_prob, DEFAULT_SINK_NAME};

use super::check_threshold;

/// Gives every transition probability 1, routing missing transitions to a
/// fresh rejecting sink.
pub fn dba_to_pba(dba: &NondetAutomaton) -> Result<ProbAutomaton> {
    let Acceptance::Buchi(f) = dba.acceptance() else {
        return Err(Error::Precondition("expected a Büchi automaton".into()));
    };
    if !is_deterministic(dba) || dba.initials().len() != 1 {
        return Err(Error::Precondition("expected a deterministic automaton with one initial state".into()));
    }
    uniform_pba(dba, f.clone())
}

/// Uniform distributions over successor sets and initial states; empty rows
/// go to a fresh sink.
fn uniform_pba(aut: &NondetAutomaton, f: BTreeSet<StateId>) -> Result<ProbAutomaton> {
    let n = aut.num_states();
    let mut states = aut.state_names().to_vec();
    let sink = n;
    let mut transitions = Vec::new();
    let mut needs_sink = false;
    for p in 0..n {
        for a in 0..aut.num_symbols() {
            let succ = aut.successors(p, a);
            if succ.is_empty() {
                needs_sink = true;
                transitions.push((p, a, sink, Rational::one()));
            } else {
                let pr = Rational::new(1.into(), (succ.len() as i64).into());
                transitions.extend(succ.iter().map(|&q| (p, a, q, pr.clone())));
            }
        }
    }
    let rej_sink = if needs_sink {
        states.push(fresh_name(DEFAULT_SINK_NAME, aut.state_names()));
        transitions.extend((0..aut.num_symbols()).map(|a| (sink, a, sink, Rational::one())));
        Some(sink)
    } else {
        None
    };
    let k = aut.initials().len() as i64;
    let init = aut.initials().iter().map(|&q| (q, Rational::new(1.into(), k.into())));
    ProbAutomaton::new(aut.name(), states, aut.alphabet().to_vec(), transitions, init, f, ProbKind::Buchi, rej_sink)
}

/// Unambiguous limit-deterministic Büchi automaton for a deterministic parity
/// automaton with priorities `1..=m`.
///
/// The result has a tilde copy `~q` of every state plus copies `q^1 … q^m`;
/// from `~p` a run may jump on `a` into copy `j` of `q = δ(p,a)` when
/// `c(q) ≥ j > c(p)`, and copy `i` keeps only states of priority at least `i`.
/// A partial input is first completed with a sink of priority 1.
pub fn parity_to_unambiguous_ldba(dpa: &NondetAutomaton) -> Result<NondetAutomaton> {
    let Acceptance::Parity(prio) = dpa.acceptance() else {
        return Err(Error::Precondition("expected a parity automaton".into()));
    };
    if !is_deterministic(dpa) || dpa.initials().len() != 1 {
        return Err(Error::Precondition("expected a deterministic automaton with one initial state".into()));
    }
    if prio.iter().any(|&c| c == 0) {
        return Err(Error::Precondition("priorities must be positive".into()));
    }
    let k = dpa.num_symbols();
    let mut names = dpa.state_names().to_vec();
    let mut prio = prio.clone();
    let mut delta: Vec<Vec<Option<StateId>>> =
        (0..dpa.num_states()).map(|p| (0..k).map(|a| dpa.successors(p, a).first().copied()).collect()).collect();
    if delta.iter().flatten().any(Option::is_none) {
        let sink = names.len();
        names.push(fresh_name(DEFAULT_SINK_NAME, dpa.state_names()));
        prio.push(1);
        delta.push(vec![Some(sink); k]);
        for row in &mut delta {
            for t in row.iter_mut() {
                t.get_or_insert(sink);
            }
        }
    }
    let n = names.len();
    let m = *prio.iter().max().expect("nonempty automaton") as usize;
    // id of copy 0 (tilde) and copies 1..=m
    let id = |q: StateId, copy: usize| copy * n + q;
    let mut out_names = Vec::with_capacity(n * (m + 1));
    for copy in 0..=m {
        for q in &names {
            out_names.push(if copy == 0 { format!("~{q}") } else { format!("{q}^{copy}") });
        }
    }
    let mut transitions = Vec::new();
    for p in 0..n {
        for a in 0..k {
            let q = delta[p][a].expect("completed");
            let (cp, cq) = (prio[p] as usize, prio[q] as usize);
            transitions.push((id(p, 0), a, id(q, 0)));
            for j in (cp + 1)..=cq {
                transitions.push((id(p, 0), a, id(q, j)));
            }
            for i in 1..=m.min(cp).min(cq) {
                transitions.push((id(p, i), a, id(q, i)));
            }
        }
    }
    let q0 = dpa.initials()[0];
    let initials: Vec<StateId> = (0..=m).map(|copy| id(q0, copy)).collect();
    let accepting: BTreeSet<StateId> =
        (0..n).filter(|&q| prio[q] % 2 == 0).map(|q| id(q, prio[q] as usize)).collect();
    NondetAutomaton::new(dpa.name(), out_names, dpa.alphabet().to_vec(), transitions, initials, Acceptance::Buchi(accepting))
}

/// Uniform probabilities on a Büchi automaton whose accepting runs are
/// limit-deterministic: no state in a cycle through an accepting state may
/// have two successors on one symbol. Missing transitions go to a fresh sink.
pub fn ldba_to_pba(ldba: &NondetAutomaton) -> Result<ProbAutomaton> {
    let Acceptance::Buchi(f) = ldba.acceptance() else {
        return Err(Error::Precondition("expected a Büchi automaton".into()));
    };
    if ldba.initials().is_empty() {
        return Err(Error::Precondition("no initial state".into()));
    }
    let sccs = SccDecomposition::of_nondet(ldba);
    for (c, comp) in sccs.components().iter().enumerate() {
        if !sccs.is_nontrivial(c) || !comp.iter().any(|q| f.contains(q)) {
            continue;
        }
        for &p in comp {
            for a in 0..ldba.num_symbols() {
                if ldba.successors(p, a).len() >= 2 {
                    return Err(Error::Precondition(format!(
                        "not limit-deterministic: state `{}` in an accepting SCC forks on `{}`",
                        ldba.state_name(p),
                        ldba.alphabet()[a]
                    )));
                }
            }
        }
    }
    uniform_pba(ldba, f.clone())
}

/// Two-copy NBA accepting the words with a limit-deterministic accepting run:
/// `(q,n)` copies all positive edges and has no accepting states, `(q,d)`
/// copies only probability-1 edges and is accepting on `F`. Requires no EDA_F
/// pattern.
pub fn positive_to_nba(pba: &ProbAutomaton) -> Result<NondetAutomaton> {
    if !matches!(pba.kind(), ProbKind::Buchi | ProbKind::Weak) {
        return Err(Error::Precondition("expected a Büchi or weak automaton".into()));
    }
    if let Some(w) = find_eda(&pattern_automaton(pba), true) {
        return Err(Error::NotCountablyAmbiguous(w));
    }
    let t = trim_prob(pba);
    let keep: Vec<StateId> = (0..t.num_states()).filter(|&q| Some(q) != t.rej_sink()).collect();
    let mut index = vec![usize::MAX; t.num_states()];
    for (i, &q) in keep.iter().enumerate() {
        index[q] = i;
    }
    let n = keep.len();
    let nd = |q: StateId| index[q];
    let dd = |q: StateId| n + index[q];
    let mut names: Vec<String> = keep.iter().map(|&q| format!("({},n)", t.state_name(q))).collect();
    names.extend(keep.iter().map(|&q| format!("({},d)", t.state_name(q))));
    let mut transitions = Vec::new();
    for (p, a, q, pr) in t.transitions() {
        if index[p] == usize::MAX || index[q] == usize::MAX {
            continue;
        }
        transitions.push((nd(p), a, nd(q)));
        transitions.push((nd(p), a, dd(q)));
        if pr.is_one() {
            transitions.push((dd(p), a, dd(q)));
        }
    }
    let initials: Vec<StateId> =
        t.initial_support().into_iter().filter(|&q| index[q] != usize::MAX).map(nd).collect();
    let accepting = t.accepting().iter().filter(|&&q| index[q] != usize::MAX).map(|&q| dd(q)).collect();
    if names.is_empty() {
        // everything was useless: one dead state keeps the file format happy
        return NondetAutomaton::new(
            pba.name(),
            vec!["(none)".into()],
            pba.alphabet().to_vec(),
            Vec::new(),
            vec![0],
            Acceptance::Buchi(BTreeSet::new()),
        );
    }
    NondetAutomaton::new(pba.name(), names, pba.alphabet().to_vec(), transitions, initials, Acceptance::Buchi(accepting))
}

/// Adds an absorbing accepting state `q_acc` that receives initial mass `λ`;
/// the original initial distribution is scaled by `1 − λ`. The value of every
/// word becomes `λ + (1 − λ)·value`.
pub fn positive_to_threshold(pba: &ProbAutomaton, lambda: &Rational) -> Result<ProbAutomaton> {
    check_threshold(lambda)?;
    let n = pba.num_states();
    let mut states = pba.state_names().to_vec();
    states.push(fresh_name("q_acc", pba.state_names()));
    let acc = n;
    let mut transitions: Vec<_> = pba.transitions().map(|(p, a, q, pr)| (p, a, q, pr.clone())).collect();
    transitions.extend((0..pba.num_symbols()).map(|a| (acc, a, acc, Rational::one())));
    let scale = Rational::one() - lambda;
    let mut init: Vec<_> = pba.initial().iter().map(|(q, pr)| (*q, pr * &scale)).collect();
    init.push((acc, lambda.clone()));
    let mut accepting = pba.accepting().clone();
    if pba.kind() != ProbKind::CoBuchi {
        accepting.insert(acc);
    }
    let init: Vec<_> = init.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    ProbAutomaton::new(
        pba.name(),
        states,
        pba.alphabet().to_vec(),
        transitions,
        init,
        accepting,
        pba.kind(),
        pba.rej_sink(),
    )
}
