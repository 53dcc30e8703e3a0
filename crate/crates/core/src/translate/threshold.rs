//! Threshold semantics: prefix value sets, the ε cut-off ladder and the
//! tuple-tracking generalized Büchi construction.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Zero};

use crate::automaton::{Acceptance, NondetAutomaton, ProbAutomaton, ProbKind, StateId, StateTable};
use crate::error::{Error, Result};
use crate::patterns::{find_ida, pattern_automaton};
use crate::rational::{format_rational, rat, Rational};
use crate::trim::trim_prob;

use super::check_threshold;

/// All finite products of `base` (including the empty product 1) that are at
/// least `x`, ascending. Values of `base` outside `(0, 1]` are ignored.
pub fn compute_value_set(base: &BTreeSet<Rational>, x: &Rational) -> Vec<Rational> {
    let factors: Vec<&Rational> = base.iter().filter(|b| b > &&Rational::zero() && !b.is_one() && *b < &Rational::one()).collect();
    let mut out: BTreeSet<Rational> = BTreeSet::new();
    if x <= &Rational::one() {
        out.insert(Rational::one());
    }
    let mut frontier = vec![Rational::one()];
    while let Some(v) = frontier.pop() {
        for b in &factors {
            let next = &v * *b;
            if &next >= x && out.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    out.into_iter().collect()
}

/// Largest `a·b < bound` with `a ∈ values`, `b ∈ base`.
fn max_product_below(values: &[Rational], base: &BTreeSet<Rational>, bound: &Rational) -> Option<Rational> {
    values
        .iter()
        .flat_map(|a| base.iter().map(move |b| a * b))
        .filter(|p| p < bound && p > &Rational::zero())
        .max()
}

/// Largest sum of at most `count` values (with repetition) that is `< bound`.
/// `values` must be ascending.
fn max_sum_below(values: &[Rational], count: usize, bound: &Rational) -> Option<Rational> {
    let mut best = None;
    sum_search(values, values.len(), count, bound, &Rational::zero(), &mut best);
    best
}

/// Picks summands in non-increasing order from `values[..upto]`, pruning
/// branches that cannot beat `best`.
fn sum_search(
    values: &[Rational],
    upto: usize,
    count: usize,
    room: &Rational,
    acc: &Rational,
    best: &mut Option<Rational>,
) {
    let end = values[..upto].partition_point(|v| v < room);
    let k = Rational::from_integer(count.into());
    for i in (0..end).rev() {
        let v = &values[i];
        if v <= &Rational::zero() {
            break;
        }
        if best.as_ref().is_some_and(|b| &(acc + v * &k) <= b) {
            break;
        }
        let total = acc + v;
        if best.as_ref().is_none_or(|b| &total > b) {
            *best = Some(total.clone());
        }
        if count > 1 {
            sum_search(values, i + 1, count - 1, &(room - v), &total, best);
        }
    }
}

/// Cut-off values `ε_1 ≥ … ≥ ε_k` for threshold `λ`, with the base
/// probabilities they were computed from.
#[derive(Clone, Debug)]
pub struct EpsilonLadder {
    pub lambda: Rational,
    pub base: BTreeSet<Rational>,
    pub eps: Vec<Rational>,
}

impl EpsilonLadder {
    pub fn k(&self) -> usize {
        self.eps.len()
    }

    /// `ε_k`.
    pub fn last(&self) -> &Rational {
        self.eps.last().expect("ladder is nonempty")
    }
}

/// Computes the ladder from the distinct edge and initial probabilities of
/// `pba`.
///
/// `ε_1` is half the gap between `λ` and the largest prefix value below `λ`
/// (or `λ` itself if no such value exists). `ε_{j+1}` is half the minimum of
/// `ε_j − v` for the largest prefix value `v < ε_j` and `λ − s` for the largest
/// sum `s < λ` of at most `j+1` values from `V_{≥ε_j}`, never exceeding `ε_j`.
pub fn compute_epsilon(pba: &ProbAutomaton, lambda: &Rational, k: usize) -> Result<EpsilonLadder> {
    if lambda <= &Rational::zero() || lambda > &Rational::one() {
        return Err(Error::InvalidThreshold(lambda.clone()));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let base = pba.edge_probabilities();
    let half = rat(1, 2);
    let v_lambda = compute_value_set(&base, lambda);
    let first = match max_product_below(&v_lambda, &base, lambda) {
        Some(v) => (lambda - v) * &half,
        None => lambda.clone(),
    };
    let mut eps = vec![first];
    for j in 1..k {
        let e = eps[j - 1].clone();
        let v_e = compute_value_set(&base, &e);
        let mut terms = Vec::new();
        if let Some(v) = max_product_below(&v_e, &base, &e) {
            terms.push(&e - v);
        }
        if let Some(s) = max_sum_below(&v_e, j + 1, lambda) {
            terms.push(lambda - s);
        }
        let next = match terms.into_iter().min() {
            Some(m) => (m * &half).min(e.clone()),
            None => e,
        };
        eps.push(next);
    }
    Ok(EpsilonLadder { lambda: lambda.clone(), base, eps })
}

/// Value tracked for one run in a tuple state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TupleValue {
    Exact(Rational),
    /// Below ε, run still allowed to branch.
    StarN,
    /// Below ε, run committed to probability-1 edges.
    StarD,
}

impl fmt::Display for TupleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TupleValue::Exact(v) => f.write_str(&format_rational(v)),
            TupleValue::StarN => f.write_str("*n"),
            TupleValue::StarD => f.write_str("*d"),
        }
    }
}

type Tuple = Vec<(StateId, TupleValue)>;

struct Builder<'a> {
    aut: &'a ProbAutomaton,
    lambda: &'a Rational,
    eps: &'a Rational,
    k: usize,
}

impl Builder<'_> {
    /// Size, sink, single-small-value and sum constraints.
    fn admissible(&self, t: &Tuple) -> bool {
        if t.is_empty() || t.len() > self.k {
            return false;
        }
        if t.iter().any(|(q, _)| Some(*q) == self.aut.rej_sink()) {
            return false;
        }
        let stars = t.iter().filter(|(_, v)| !matches!(v, TupleValue::Exact(_))).count();
        if stars > 1 {
            return false;
        }
        let sum: Rational = t
            .iter()
            .filter_map(|(_, v)| match v {
                TupleValue::Exact(x) => Some(x.clone()),
                _ => None,
            })
            .sum();
        // a star is an arbitrarily small positive amount
        &sum > self.lambda || (&sum == self.lambda && stars == 1)
    }

    fn initial_tuples(&self) -> Vec<Tuple> {
        let support: Vec<(StateId, Rational)> =
            self.aut.initial().iter().filter(|(q, _)| Some(*q) != self.aut.rej_sink()).cloned().collect();
        let mut support = support;
        support.sort();
        let mut out = Vec::new();
        let n = support.len();
        for mask in 1u64..(1u64 << n.min(63)) {
            if mask.count_ones() as usize > self.k {
                continue;
            }
            let t: Tuple = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| {
                    let (q, v) = &support[i];
                    (*q, if v >= self.eps { TupleValue::Exact(v.clone()) } else { TupleValue::StarN })
                })
                .collect();
            if self.admissible(&t) {
                out.push(t);
            }
        }
        out
    }

    /// Possible child entries for one parent entry on symbol `a`.
    fn child_options(&self, (p, u): &(StateId, TupleValue), a: usize) -> Vec<(StateId, Vec<TupleValue>)> {
        let mut out = Vec::new();
        for (q, d) in self.aut.distribution(*p, a) {
            if Some(*q) == self.aut.rej_sink() {
                continue;
            }
            let opts = match u {
                TupleValue::Exact(x) => {
                    let v = x * d;
                    if &v >= self.eps {
                        vec![TupleValue::Exact(v)]
                    } else {
                        vec![TupleValue::StarN]
                    }
                }
                TupleValue::StarN => vec![TupleValue::StarN, TupleValue::StarD],
                TupleValue::StarD if d.is_one() => vec![TupleValue::StarD],
                TupleValue::StarD => vec![],
            };
            if !opts.is_empty() {
                out.push((*q, opts));
            }
        }
        out
    }

    /// Nonempty groups of pairwise different children, sorted by state.
    fn groups(&self, parent: &(StateId, TupleValue), a: usize, room: usize) -> Vec<Tuple> {
        let opts = self.child_options(parent, a);
        let mut out = Vec::new();
        let n = opts.len();
        for mask in 1u64..(1u64 << n.min(63)) {
            let size = mask.count_ones() as usize;
            if size > room {
                continue;
            }
            let chosen: Vec<&(StateId, Vec<TupleValue>)> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &opts[i]).collect();
            let mut partial: Vec<Tuple> = vec![Vec::new()];
            for (q, values) in chosen {
                partial = partial
                    .into_iter()
                    .flat_map(|t| {
                        values.iter().map(move |v| {
                            let mut t2 = t.clone();
                            t2.push((*q, v.clone()));
                            t2
                        })
                    })
                    .collect();
            }
            out.extend(partial);
        }
        out
    }

    fn successors(&self, s: &Tuple, a: usize) -> Vec<Tuple> {
        let mut partial: Vec<Tuple> = vec![Vec::new()];
        for (i, parent) in s.iter().enumerate() {
            let mut next = Vec::new();
            for t in &partial {
                // leave room for at least one child per remaining parent
                let room = self.k - t.len() - (s.len() - i - 1);
                for g in self.groups(parent, a, room) {
                    let mut t2 = t.clone();
                    t2.extend(g);
                    next.push(t2);
                }
            }
            partial = next;
            if partial.is_empty() {
                break;
            }
        }
        partial.retain(|t| self.admissible(t));
        partial
    }

    fn render(&self, t: &Tuple) -> String {
        let parts: Vec<String> = t.iter().map(|(q, v)| format!("({},{v})", self.aut.state_name(*q))).collect();
        format!("[{}]", parts.join(","))
    }
}

/// Generalized Büchi automaton for `L^{>λ}` of a PBA with at most `k`
/// accepting runs per word.
///
/// Fails with [`Error::NotFinitelyAmbiguous`] when the trimmed underlying
/// automaton has an IDA pattern.
pub fn threshold_to_gnba(pba: &ProbAutomaton, lambda: &Rational, k: usize) -> Result<NondetAutomaton> {
    check_threshold(lambda)?;
    if let Some(w) = find_ida(&pattern_automaton(pba), false) {
        return Err(Error::NotFinitelyAmbiguous(w));
    }
    threshold_to_gnba_unchecked(pba, lambda, k)
}

/// The tuple construction without the finite-ambiguity check. Every accepted
/// word has `k` or fewer limit-deterministic accepting runs of total
/// probability above `λ`, so the result under-approximates `L^{>λ}` on any
/// input.
pub fn threshold_to_gnba_unchecked(pba: &ProbAutomaton, lambda: &Rational, k: usize) -> Result<NondetAutomaton> {
    check_threshold(lambda)?;
    if !matches!(pba.kind(), ProbKind::Buchi | ProbKind::Weak) {
        return Err(Error::Precondition("expected a Büchi or weak automaton".into()));
    }
    let t = trim_prob(pba);
    let ladder = compute_epsilon(&t, lambda, k)?;
    let b = Builder { aut: &t, lambda, eps: ladder.last(), k };

    let mut table = StateTable::new();
    let mut tuples: Vec<Tuple> = Vec::new();
    let mut queue = VecDeque::new();
    let intern = |tup: Tuple, table: &mut StateTable, tuples: &mut Vec<Tuple>, queue: &mut VecDeque<usize>| {
        let before = table.len();
        let id = table.intern(b.render(&tup));
        if id == before {
            tuples.push(tup);
            queue.push_back(id);
        }
        id
    };
    let mut initials = Vec::new();
    for tup in b.initial_tuples() {
        initials.push(intern(tup, &mut table, &mut tuples, &mut queue));
    }
    let mut transitions = Vec::new();
    while let Some(s) = queue.pop_front() {
        let src = tuples[s].clone();
        for a in 0..t.num_symbols() {
            for succ in b.successors(&src, a) {
                let d = intern(succ, &mut table, &mut tuples, &mut queue);
                transitions.push((s, a, d));
            }
        }
    }
    let sets: Vec<BTreeSet<StateId>> = (0..k)
        .map(|i| {
            (0..tuples.len())
                .filter(|&s| {
                    let tup = &tuples[s];
                    tup.len() <= i || (t.is_accepting(tup[i].0) && tup[i].1 != TupleValue::StarN)
                })
                .collect()
        })
        .collect();
    let mut names = table.into_names();
    if names.is_empty() {
        names.push("[]".into());
        initials.push(0);
    }
    NondetAutomaton::new(pba.name(), names, pba.alphabet().to_vec(), transitions, initials, Acceptance::GeneralizedBuchi(sets))
}
