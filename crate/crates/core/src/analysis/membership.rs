//! Lasso membership, run counting and emptiness witnesses.

use num_traits::One;

use crate::automaton::{Acceptance, NondetAutomaton, ProbAutomaton, ProbKind, UltimatelyPeriodicWord};
use crate::error::{Error, Result};
use crate::lasso::{explore, find_lasso, has_reachable_cycle, Explored};
use crate::patterns::{find_eda, find_ida, pattern_automaton, require_absent};
use crate::scc::{good_clauses, Clause};
use crate::translate::AlmostSureMode;
use crate::trim::trim_prob;

use super::oracle::acceptance_probability;

/// Product of `aut` with the positions of `w`: nodes `(state, position)`.
fn position_product(aut: &NondetAutomaton, w: &UltimatelyPeriodicWord) -> Result<Explored<(usize, usize)>> {
    let symbols = w.resolve(aut.alphabet())?;
    Ok(explore(aut.initials().iter().map(|&q| (q, 0)), |&(q, i), out| {
        let next = w.next_position(i);
        for &q2 in aut.successors(q, symbols[i]) {
            out.push((symbols[i], (q2, next)));
        }
    }))
}

/// Lifts a state clause to product nodes through `state`.
fn lift<S>(g: &Explored<S>, c: &Clause, state: impl Fn(&S) -> usize) -> Clause {
    Clause {
        allowed: g.mask(|s| c.allowed[state(s)]),
        hits: c.hits.iter().map(|h| g.mask(|s| h[state(s)])).collect(),
    }
}

/// Whether some run of `aut` on `w` is accepting.
pub fn member_nondet(aut: &NondetAutomaton, w: &UltimatelyPeriodicWord) -> Result<bool> {
    let g = position_product(aut, w)?;
    Ok(good_clauses(aut.acceptance(), aut.num_states())
        .iter()
        .any(|c| has_reachable_cycle(&g.succ, &g.inits, &lift(&g, c, |s| s.0))))
}

/// Whether `nba` has two distinct accepting runs on `w`.
pub fn count_two_accepting_runs(nba: &NondetAutomaton, w: &UltimatelyPeriodicWord) -> Result<bool> {
    let symbols = w.resolve(nba.alphabet())?;
    let inits: Vec<_> = nba
        .initials()
        .iter()
        .flat_map(|&i| nba.initials().iter().map(move |&j| (i, j, 0usize, i != j)))
        .collect();
    let g = explore(inits, |&(x, y, i, bit), out| {
        let a = symbols[i];
        let next = w.next_position(i);
        for &x2 in nba.successors(x, a) {
            for &y2 in nba.successors(y, a) {
                out.push((a, (x2, y2, next, bit || x2 != y2)));
            }
        }
    });
    let clauses = good_clauses(nba.acceptance(), nba.num_states());
    for c1 in &clauses {
        for c2 in &clauses {
            let l1 = lift(&g, c1, |s| s.0);
            let l2 = lift(&g, c2, |s| s.1);
            let clause = Clause {
                allowed: (0..g.nodes.len()).map(|v| g.nodes[v].3 && l1.allowed[v] && l2.allowed[v]).collect(),
                hits: l1.hits.into_iter().chain(l2.hits).collect(),
            };
            if has_reachable_cycle(&g.succ, &g.inits, &clause) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn symbol_names(alphabet: &[String], word: &[usize]) -> Vec<String> {
    word.iter().map(|&a| alphabet[a].clone()).collect()
}

/// An accepted ultimately periodic word of a Büchi or generalized Büchi
/// automaton, or `None` if its language is empty.
pub fn is_empty_nba(nba: &NondetAutomaton) -> Result<Option<UltimatelyPeriodicWord>> {
    if !matches!(nba.acceptance(), Acceptance::Buchi(_) | Acceptance::GeneralizedBuchi(_)) {
        return Err(Error::Precondition("expected Büchi or generalized Büchi acceptance".into()));
    }
    let succ: Vec<Vec<(usize, usize)>> = (0..nba.num_states())
        .map(|p| (0..nba.num_symbols()).flat_map(|a| nba.successors(p, a).iter().map(move |&q| (a, q))).collect())
        .collect();
    let clause = good_clauses(nba.acceptance(), nba.num_states()).remove(0);
    let Some(lasso) = find_lasso(&succ, nba.initials(), &clause) else {
        return Ok(None);
    };
    let word = UltimatelyPeriodicWord::new(
        symbol_names(nba.alphabet(), &lasso.stem_symbols),
        symbol_names(nba.alphabet(), &lasso.cycle_symbols),
    )?;
    if !member_nondet(nba, &word)? {
        return Err(Error::Internal(format!("emptiness witness {word} is not accepted")));
    }
    Ok(Some(word))
}

/// A word whose almost-sure acceptance fails, found as a rejecting run: a
/// reachable cycle avoiding `F` (all runs) or one using only probability-1
/// edges after some point (flat). The rejecting sink counts as such a cycle.
pub fn non_universal_witness_almost_sure(
    pba: &ProbAutomaton,
    mode: AlmostSureMode,
) -> Result<Option<UltimatelyPeriodicWord>> {
    if !matches!(pba.kind(), ProbKind::Buchi | ProbKind::Weak) {
        return Err(Error::Precondition("expected a Büchi or weak automaton".into()));
    }
    let u = pattern_automaton(pba);
    match mode {
        AlmostSureMode::AllRuns => require_absent(
            find_ida(&u, true),
            "the all-runs witness search needs an automaton without IDA_F pattern",
        )?,
        AlmostSureMode::Flat => {
            require_absent(find_eda(&u, false), "the flat witness search needs an automaton without EDA pattern")?
        }
    }
    let t = trim_prob(pba);
    // phase 0: free prefix, phase 1: limit-deterministic rejecting tail
    let inits: Vec<(usize, bool)> = t.initial_support().into_iter().flat_map(|q| [(q, false), (q, true)]).collect();
    let g = explore(inits, |&(q, tail), out| {
        for a in 0..t.num_symbols() {
            for (q2, pr) in t.distribution(q, a) {
                if !tail {
                    out.push((a, (*q2, false)));
                    out.push((a, (*q2, true)));
                } else if mode == AlmostSureMode::AllRuns || pr.is_one() {
                    out.push((a, (*q2, true)));
                }
            }
        }
    });
    let clause = Clause { allowed: g.mask(|&(q, tail)| tail && !t.is_accepting(q)), hits: vec![] };
    let Some(lasso) = find_lasso(&g.succ, &g.inits, &clause) else {
        return Ok(None);
    };
    let word = UltimatelyPeriodicWord::new(
        symbol_names(t.alphabet(), &lasso.stem_symbols),
        symbol_names(t.alphabet(), &lasso.cycle_symbols),
    )?;
    if acceptance_probability(pba, &word)?.is_one() {
        return Err(Error::Internal(format!("non-universality witness {word} is accepted almost surely")));
    }
    Ok(Some(word))
}
