//! Reachable supports of the state distribution.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::automaton::{ProbAutomaton, StateId};
use crate::error::Result;
use crate::trim::trim_prob;

/// Supports `supp δ*(μ_0, u)` over all finite `u`, each with a shortest
/// representative word. States are those of the trimmed automaton, whose
/// rejecting sink stays inside the supports.
#[derive(Clone, Debug)]
pub struct SupportClassSet {
    automaton: ProbAutomaton,
    supports: BTreeMap<BTreeSet<StateId>, Vec<String>>,
}

impl SupportClassSet {
    /// The trimmed automaton the supports refer to.
    pub fn automaton(&self) -> &ProbAutomaton {
        &self.automaton
    }

    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supports.is_empty()
    }

    pub fn contains(&self, support: &BTreeSet<StateId>) -> bool {
        self.supports.contains_key(support)
    }

    /// Supports in lexicographic order with their representatives.
    pub fn iter(&self) -> impl Iterator<Item = (&BTreeSet<StateId>, &[String])> {
        self.supports.iter().map(|(s, w)| (s, w.as_slice()))
    }

    /// State names of a support.
    pub fn names(&self, support: &BTreeSet<StateId>) -> Vec<String> {
        support.iter().map(|&q| self.automaton.state_name(q).to_string()).collect()
    }
}

fn step(aut: &ProbAutomaton, s: &BTreeSet<StateId>, a: usize) -> BTreeSet<StateId> {
    s.iter().flat_map(|&p| aut.distribution(p, a).iter().map(|(q, _)| *q)).collect()
}

/// Closure of `supp μ_0` under one-symbol successors.
pub fn myhill_nerode_supports(pba: &ProbAutomaton) -> SupportClassSet {
    let t = trim_prob(pba);
    let start: BTreeSet<StateId> = t.initial_support().into_iter().collect();
    let mut supports = BTreeMap::new();
    supports.insert(start.clone(), Vec::new());
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        let word = supports[&s].clone();
        for a in 0..t.num_symbols() {
            let next = step(&t, &s, a);
            if !supports.contains_key(&next) {
                let mut w: Vec<String> = word.clone();
                w.push(t.alphabet()[a].clone());
                supports.insert(next.clone(), w);
                queue.push_back(next);
            }
        }
    }
    SupportClassSet { automaton: t, supports }
}

/// Support reached after reading `word` in `aut` itself.
pub fn support_after(aut: &ProbAutomaton, word: &[String]) -> Result<BTreeSet<StateId>> {
    let mut s: BTreeSet<StateId> = aut.initial_support().into_iter().collect();
    for sym in word {
        let a = aut
            .alphabet()
            .iter()
            .position(|x| x == sym)
            .ok_or_else(|| crate::error::Error::Precondition(format!("symbol `{sym}` not in alphabet")))?;
        s = step(aut, &s, a);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::translate::gadgets;

    #[test]
    fn p_lambda_supports() {
        let p = gadgets::p_lambda(&rat(1, 2)).unwrap();
        let s = myhill_nerode_supports(&p);
        let named: BTreeSet<Vec<String>> = s.iter().map(|(x, _)| s.names(x)).collect();
        let expect = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert!(named.contains(&expect(&["q_0"])));
        assert!(named.contains(&expect(&["q_0", "q_1"])));
        assert!(named.contains(&expect(&["q_rej"])));
        assert!(s.len() <= 8);
        for (sup, w) in s.iter() {
            assert_eq!(&support_after(s.automaton(), w).unwrap(), sup);
        }
    }
}
