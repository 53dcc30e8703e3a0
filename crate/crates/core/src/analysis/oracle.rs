//! Exact acceptance probabilities on ultimately periodic words.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::automaton::{ProbAutomaton, ProbKind, StateId, UltimatelyPeriodicWord};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scc::tarjan;

use super::linsolve::solve;

/// The finite Markov chain obtained by running a probabilistic automaton on
/// `u v^ω`: nodes are `(state, position)` with positions `0..|u|+|v|`, where
/// positions past the prefix cycle through the period.
#[derive(Clone, Debug)]
pub struct LassoChain {
    nodes: Vec<(StateId, usize)>,
    edges: Vec<Vec<(usize, Rational)>>,
    initial: Vec<(usize, Rational)>,
    /// Node index of `(q, |u|)` where the period is entered, if reachable.
    period_entry: HashMap<StateId, usize>,
    /// Per node: the automaton has at least two successors there.
    fork: Vec<bool>,
}

impl LassoChain {
    /// Explores the part of the chain reachable from `μ_0`.
    pub fn build(aut: &ProbAutomaton, word: &UltimatelyPeriodicWord) -> Result<Self> {
        let symbols = word.resolve(aut.alphabet())?;
        let mut index: HashMap<(StateId, usize), usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut stack = Vec::new();
        let mut intern = |key: (StateId, usize), nodes: &mut Vec<(StateId, usize)>, stack: &mut Vec<usize>| {
            *index.entry(key).or_insert_with(|| {
                nodes.push(key);
                stack.push(nodes.len() - 1);
                nodes.len() - 1
            })
        };
        let initial: Vec<(usize, Rational)> =
            aut.initial().iter().map(|(q, p)| (intern((*q, 0), &mut nodes, &mut stack), p.clone())).collect();
        let mut edges: Vec<Vec<(usize, Rational)>> = Vec::new();
        while let Some(v) = stack.pop() {
            let (q, i) = nodes[v];
            let next = word.next_position(i);
            let out: Vec<(usize, Rational)> = aut
                .distribution(q, symbols[i])
                .iter()
                .map(|(q2, p)| (intern((*q2, next), &mut nodes, &mut stack), p.clone()))
                .collect();
            if edges.len() <= v {
                edges.resize(v + 1, Vec::new());
            }
            edges[v] = out;
        }
        edges.resize(nodes.len(), Vec::new());
        let fork = edges.iter().map(|e| e.len() >= 2).collect();
        let period_entry = nodes
            .iter()
            .enumerate()
            .filter(|(_, (_, i))| *i == word.prefix().len())
            .map(|(v, (q, _))| (*q, v))
            .collect();
        Ok(LassoChain { nodes, edges, initial, period_entry, fork })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(state, position)` of a node.
    pub fn node(&self, v: usize) -> (StateId, usize) {
        self.nodes[v]
    }

    pub fn edges(&self, v: usize) -> &[(usize, Rational)] {
        &self.edges[v]
    }

    pub fn initial(&self) -> &[(usize, Rational)] {
        &self.initial
    }

    pub fn period_entry(&self, q: StateId) -> Option<usize> {
        self.period_entry.get(&q).copied()
    }

    pub fn is_fork(&self, v: usize) -> bool {
        self.fork[v]
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|es| es.iter().map(|(w, _)| *w).collect()).collect()
    }

    /// Bottom SCCs, each flagged as good (accepting) for `aut`'s kind.
    /// Returns per-node component ids, the components in reverse topological
    /// order, and per component `Some(good)` if bottom, `None` otherwise.
    pub(crate) fn bottoms(&self, aut: &ProbAutomaton) -> (Vec<usize>, Vec<Vec<usize>>, Vec<Option<bool>>) {
        let adj = self.adjacency();
        let comps = tarjan(&adj);
        let mut comp_of = vec![0; self.len()];
        for (c, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = c;
            }
        }
        let status = comps
            .iter()
            .enumerate()
            .map(|(c, comp)| {
                let bottom = comp.iter().all(|&v| adj[v].iter().all(|&w| comp_of[w] == c));
                bottom.then(|| {
                    let hits = comp.iter().any(|&v| aut.is_accepting(self.nodes[v].0));
                    match aut.kind() {
                        ProbKind::CoBuchi => !hits,
                        _ => hits,
                    }
                })
            })
            .collect();
        (comp_of, comps, status)
    }

    /// Probability of reaching a good bottom SCC from every node.
    pub(crate) fn values(&self, aut: &ProbAutomaton) -> Result<Vec<Rational>> {
        let (comp_of, comps, status) = self.bottoms(aut);
        let mut x = vec![Rational::zero(); self.len()];
        // components come successors-first
        for (c, comp) in comps.iter().enumerate() {
            if let Some(good) = status[c] {
                if good {
                    for &v in comp {
                        x[v] = Rational::one();
                    }
                }
                continue;
            }
            let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let m = comp.len();
            let mut a = vec![vec![Rational::zero(); m]; m];
            let mut b = vec![Rational::zero(); m];
            for (i, &v) in comp.iter().enumerate() {
                a[i][i] = Rational::one();
                for (w, p) in &self.edges[v] {
                    if comp_of[*w] == c {
                        a[i][local[w]] -= p;
                    } else {
                        b[i] += p * &x[*w];
                    }
                }
            }
            let sol = solve(a, b).ok_or_else(|| Error::Internal("singular transient system".into()))?;
            for (i, &v) in comp.iter().enumerate() {
                x[v] = sol[i].clone();
            }
        }
        Ok(x)
    }
}

/// Probability that a run on `word` is accepting. Büchi and weak automata
/// accept in bottom components containing an accepting node, co-Büchi
/// automata in bottom components without one.
pub fn acceptance_probability(aut: &ProbAutomaton, word: &UltimatelyPeriodicWord) -> Result<Rational> {
    if aut.kind() == ProbKind::FiniteWord {
        return Err(Error::Precondition("finite-word automata have no ω-word semantics".into()));
    }
    let chain = LassoChain::build(aut, word)?;
    let x = chain.values(aut)?;
    Ok(chain.initial().iter().map(|(v, p)| p * &x[*v]).sum())
}

/// Probability that a finite-word automaton ends in `F` after `word`.
pub fn pfa_acceptance(pfa: &ProbAutomaton, word: &[String]) -> Result<Rational> {
    if pfa.kind() != ProbKind::FiniteWord {
        return Err(Error::Precondition("expected a finite-word automaton".into()));
    }
    let mut dist = vec![Rational::zero(); pfa.num_states()];
    for (q, p) in pfa.initial() {
        dist[*q] += p;
    }
    for s in word {
        let a = pfa
            .alphabet()
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| Error::Precondition(format!("symbol `{s}` not in alphabet")))?;
        let mut next = vec![Rational::zero(); pfa.num_states()];
        for (p, mass) in dist.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for (q, pr) in pfa.distribution(p, a) {
                next[*q] += mass * pr;
            }
        }
        dist = next;
    }
    Ok(pfa.accepting().iter().map(|&q| dist[q].clone()).sum())
}
