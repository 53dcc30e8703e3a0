//! Breakpoint constructions for almost-sure semantics.

use std::collections::BTreeSet;

use crate::automaton::{Acceptance, NondetAutomaton, ProbAutomaton, ProbKind, StateId, StateTable};
use crate::error::{Error, Result};
use crate::lasso::explore;
use crate::patterns::{find_eda, find_ida, pattern_automaton, require_absent};
use crate::trim::trim_prob;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlmostSureMode {
    /// Every run must accept; sound when there is no IDA_F pattern.
    AllRuns,
    /// No limit-deterministic rejecting run; sound for flat automata.
    Flat,
}

type Macro = (BTreeSet<StateId>, BTreeSet<StateId>);

fn render(t: &ProbAutomaton, (s, tt): &Macro) -> String {
    let set = |x: &BTreeSet<StateId>| x.iter().map(|&q| t.state_name(q)).collect::<Vec<_>>().join(",");
    format!("⟨{{{}}}|{{{}}}⟩", set(s), set(tt))
}

/// Deterministic Büchi automaton for `L^{=1}`.
///
/// Macrostates `(S,T)` start at `(∅, supp μ_0)` and are accepting when `T = ∅`.
/// From `(S,∅)` the automaton moves to `(∅, Δ(S,a))`. Otherwise `T'` is
/// `Δ(T,a) ∖ F` (all runs) or the non-accepting probability-1 successors of
/// `T` (flat), and `S' = Δ(S∪T,a) ∖ T'`. Successors are taken in the trimmed
/// automaton including its rejecting sink.
pub fn almost_sure_to_dba(pba: &ProbAutomaton, mode: AlmostSureMode) -> Result<NondetAutomaton> {
    if !matches!(pba.kind(), ProbKind::Buchi | ProbKind::Weak) {
        return Err(Error::Precondition("expected a Büchi or weak automaton".into()));
    }
    let u = pattern_automaton(pba);
    match mode {
        AlmostSureMode::AllRuns => require_absent(
            find_ida(&u, true),
            "the all-runs breakpoint construction needs an automaton without IDA_F pattern",
        )?,
        AlmostSureMode::Flat => {
            require_absent(find_eda(&u, false), "the flat breakpoint construction needs an automaton without EDA pattern")?
        }
    }
    let t = trim_prob(pba);
    let post = |set: &BTreeSet<StateId>, a: usize| -> BTreeSet<StateId> {
        set.iter().flat_map(|&p| t.distribution(p, a).iter().map(|(q, _)| *q)).collect()
    };
    let start: Macro = (BTreeSet::new(), t.initial_support().into_iter().collect());
    let g = explore([start], |(s, tt), out| {
        for a in 0..t.num_symbols() {
            let next = if tt.is_empty() {
                (BTreeSet::new(), post(s, a))
            } else {
                let t2: BTreeSet<StateId> = match mode {
                    AlmostSureMode::AllRuns => post(tt, a).into_iter().filter(|q| !t.is_accepting(*q)).collect(),
                    AlmostSureMode::Flat => tt
                        .iter()
                        .flat_map(|&p| t.distribution(p, a).iter())
                        .filter(|(q, pr)| num_traits::One::is_one(pr) && !t.is_accepting(*q))
                        .map(|(q, _)| *q)
                        .collect(),
                };
                let union: BTreeSet<StateId> = s.union(tt).copied().collect();
                let s2 = post(&union, a).difference(&t2).copied().collect();
                (s2, t2)
            };
            out.push((a, next));
        }
    });
    let mut table = StateTable::new();
    for m in &g.nodes {
        table.intern(render(&t, m));
    }
    let accepting = (0..g.nodes.len()).filter(|&i| g.nodes[i].1.is_empty()).collect();
    let transitions: Vec<_> =
        g.succ.iter().enumerate().flat_map(|(p, es)| es.iter().map(move |&(a, q)| (p, a, q))).collect();
    NondetAutomaton::new(
        pba.name(),
        table.into_names(),
        pba.alphabet().to_vec(),
        transitions,
        g.inits.clone(),
        Acceptance::Buchi(accepting),
    )
}
