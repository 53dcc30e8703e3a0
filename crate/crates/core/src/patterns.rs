//! Ambiguity patterns (IDA, IDA_F, EDA, EDA_F), the ambiguity lattice, and the
//! HPBA/SPBA/flat checks.
//!
//! All queries operate on the trimmed automaton; probabilistic inputs are
//! trimmed and replaced by their underlying NBA.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::automaton::{Automaton, NondetAutomaton, ProbAutomaton, StateId, UltimatelyPeriodicWord};
use crate::error::Error;
use crate::lasso::{explore, find_lasso};
use crate::scc::{good_clauses, Clause, SccDecomposition};
use crate::structure::{is_weak, is_weak_prob};
use crate::trim::{trim_nondet, trim_prob, underlying_nba};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    Ida,
    IdaF,
    Eda,
    EdaF,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pattern::Ida => "IDA",
            Pattern::IdaF => "IDA_F",
            Pattern::Eda => "EDA",
            Pattern::EdaF => "EDA_F",
        })
    }
}

/// States and a word exhibiting a pattern. For IDA-style patterns `q` is set;
/// EDA-style patterns only name `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternWitness {
    pub pattern: Pattern,
    pub p: String,
    pub q: Option<String>,
    pub word: Vec<String>,
}

impl fmt::Display for PatternWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} p={}", self.pattern, self.p)?;
        if let Some(q) = &self.q {
            write!(f, " q={q}")?;
        }
        write!(f, " word={}", self.word.join(","))
    }
}

/// States reachable from `from` on `word`.
fn post(aut: &NondetAutomaton, from: StateId, word: &[usize]) -> BTreeSet<StateId> {
    let mut cur: BTreeSet<StateId> = [from].into_iter().collect();
    for &a in word {
        cur = cur.iter().flat_map(|&p| aut.successors(p, a).iter().copied()).collect();
    }
    cur
}

/// Number of distinct paths `from →word→ to`, saturated at 2.
fn path_count(aut: &NondetAutomaton, from: StateId, to: StateId, word: &[usize]) -> u8 {
    let mut counts = vec![0u8; aut.num_states()];
    counts[from] = 1;
    for &a in word {
        let mut next = vec![0u8; aut.num_states()];
        for p in 0..aut.num_states() {
            if counts[p] > 0 {
                for &q in aut.successors(p, a) {
                    next[q] = (next[q] + counts[p]).min(2);
                }
            }
        }
        counts = next;
    }
    counts[to]
}

impl PatternWitness {
    /// Replays the witness on `aut` (normally the trimmed automaton it was
    /// computed on).
    pub fn verify(&self, aut: &NondetAutomaton) -> bool {
        let Some(p) = aut.state_index(&self.p) else { return false };
        let Some(word) = self
            .word
            .iter()
            .map(|s| aut.alphabet().iter().position(|a| a == s))
            .collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        if word.is_empty() {
            return false;
        }
        let f = aut.acceptance().final_states();
        match self.pattern {
            Pattern::Ida | Pattern::IdaF => {
                let Some(q) = self.q.as_deref().and_then(|q| aut.state_index(q)) else { return false };
                let from_p = post(aut, p, &word);
                p != q
                    && from_p.contains(&p)
                    && from_p.contains(&q)
                    && post(aut, q, &word).contains(&q)
                    && (self.pattern == Pattern::Ida || f.contains(&q))
            }
            Pattern::Eda | Pattern::EdaF => {
                path_count(aut, p, p, &word) >= 2 && (self.pattern == Pattern::Eda || f.contains(&p))
            }
        }
    }
}

/// Shortest path in an implicit graph from `start` to `goal`, expanding
/// symbols in alphabet order. Returns the symbol sequence.
fn bfs_word<S, F>(start: S, goal: &S, mut step: F) -> Option<Vec<usize>>
where
    S: Clone + Eq + std::hash::Hash,
    F: FnMut(&S, &mut Vec<(usize, S)>),
{
    let mut parent: HashMap<S, Option<(S, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    let mut buf = Vec::new();
    while let Some(v) = queue.pop_front() {
        buf.clear();
        step(&v, &mut buf);
        for (a, t) in buf.drain(..) {
            if parent.contains_key(&t) {
                continue;
            }
            parent.insert(t.clone(), Some((v.clone(), a)));
            if &t == goal {
                let mut word = Vec::new();
                let mut cur = t;
                while let Some(Some((p, a))) = parent.get(&cur) {
                    word.push(*a);
                    cur = p.clone();
                }
                word.reverse();
                return Some(word);
            }
            queue.push_back(t);
        }
    }
    None
}

fn names(aut: &NondetAutomaton, word: &[usize]) -> Vec<String> {
    word.iter().map(|&a| aut.alphabet()[a].clone()).collect()
}

fn trimmed(aut: &NondetAutomaton) -> Option<NondetAutomaton> {
    match trim_nondet(aut) {
        Ok(t) => Some(t),
        Err(_) => None,
    }
}

/// IDA search on an automaton that is already trim.
fn ida_on_trim(aut: &NondetAutomaton, require_accepting_q: bool) -> Option<PatternWitness> {
    let sccs = SccDecomposition::of_nondet(aut);
    let f = aut.acceptance().final_states();
    let n = aut.num_states();
    for p in 0..n {
        for q in 0..n {
            if p == q || (require_accepting_q && !f.contains(&q)) {
                continue;
            }
            // p → p and q → q force the outer tracks to stay in their SCCs
            if !sccs.is_nontrivial(sccs.component_of(p)) || !sccs.is_nontrivial(sccs.component_of(q)) {
                continue;
            }
            let (cp, cq) = (sccs.component_of(p), sccs.component_of(q));
            let word = bfs_word((p, p, q), &(p, q, q), |&(x, y, z), out| {
                for a in 0..aut.num_symbols() {
                    for &x2 in aut.successors(x, a) {
                        if sccs.component_of(x2) != cp {
                            continue;
                        }
                        for &z2 in aut.successors(z, a) {
                            if sccs.component_of(z2) != cq {
                                continue;
                            }
                            for &y2 in aut.successors(y, a) {
                                out.push((a, (x2, y2, z2)));
                            }
                        }
                    }
                }
            });
            if let Some(word) = word {
                return Some(PatternWitness {
                    pattern: if require_accepting_q { Pattern::IdaF } else { Pattern::Ida },
                    p: aut.state_name(p).to_string(),
                    q: Some(aut.state_name(q).to_string()),
                    word: names(aut, &word),
                });
            }
        }
    }
    None
}

fn eda_on_trim(aut: &NondetAutomaton, require_accepting_p: bool) -> Option<PatternWitness> {
    let sccs = SccDecomposition::of_nondet(aut);
    let f = aut.acceptance().final_states();
    for p in 0..aut.num_states() {
        if require_accepting_p && !f.contains(&p) {
            continue;
        }
        let c = sccs.component_of(p);
        if !sccs.is_nontrivial(c) {
            continue;
        }
        let word = bfs_word((p, p, false), &(p, p, true), |&(x, y, bit), out| {
            for a in 0..aut.num_symbols() {
                for &x2 in aut.successors(x, a) {
                    if sccs.component_of(x2) != c {
                        continue;
                    }
                    for &y2 in aut.successors(y, a) {
                        if sccs.component_of(y2) == c {
                            out.push((a, (x2, y2, bit || x2 != y2)));
                        }
                    }
                }
            }
        });
        if let Some(word) = word {
            return Some(PatternWitness {
                pattern: if require_accepting_p { Pattern::EdaF } else { Pattern::Eda },
                p: aut.state_name(p).to_string(),
                q: None,
                word: names(aut, &word),
            });
        }
    }
    None
}

/// Finds states `p ≠ q` and a word `v` with `p →v p`, `p →v q`, `q →v q`
/// (and `q ∈ F` if requested) in the trimmed automaton.
pub fn find_ida(nba: &NondetAutomaton, require_accepting_q: bool) -> Option<PatternWitness> {
    ida_on_trim(&trimmed(nba)?, require_accepting_q)
}

/// Finds a state `p` (in `F` if requested) with two different paths `p →v p`
/// in the trimmed automaton.
pub fn find_eda(nba: &NondetAutomaton, require_accepting_p: bool) -> Option<PatternWitness> {
    eda_on_trim(&trimmed(nba)?, require_accepting_p)
}

/// Lasso in the pair product whose two runs differ and both accept.
fn ambiguity_lasso(aut: &NondetAutomaton) -> Option<UltimatelyPeriodicWord> {
    let n = aut.num_states();
    let inits: Vec<(usize, usize, bool)> = aut
        .initials()
        .iter()
        .flat_map(|&i| aut.initials().iter().map(move |&j| (i, j, i != j)))
        .collect();
    let g = explore(inits, |&(x, y, bit), out| {
        for a in 0..aut.num_symbols() {
            for &x2 in aut.successors(x, a) {
                for &y2 in aut.successors(y, a) {
                    out.push((a, (x2, y2, bit || x2 != y2)));
                }
            }
        }
    });
    let clauses = good_clauses(aut.acceptance(), n);
    for c1 in &clauses {
        for c2 in &clauses {
            let clause = Clause {
                allowed: g.mask(|&(x, y, bit)| bit && c1.allowed[x] && c2.allowed[y]),
                hits: c1
                    .hits
                    .iter()
                    .map(|h| g.mask(|&(x, _, _)| h[x]))
                    .chain(c2.hits.iter().map(|h| g.mask(|&(_, y, _)| h[y])))
                    .collect(),
            };
            if let Some(l) = find_lasso(&g.succ, &g.inits, &clause) {
                let word = UltimatelyPeriodicWord::new(names(aut, &l.stem_symbols), names(aut, &l.cycle_symbols))
                    .expect("lasso cycle is nonempty");
                return Some(word);
            }
        }
    }
    None
}

/// An ultimately periodic word with two distinct accepting runs, if any.
pub fn ambiguity_witness(nba: &NondetAutomaton) -> Option<UltimatelyPeriodicWord> {
    ambiguity_lasso(&trimmed(nba)?)
}

/// At most one accepting run on every word.
pub fn is_unambiguous(nba: &NondetAutomaton) -> bool {
    ambiguity_witness(nba).is_none()
}

/// A transition violating the hierarchical condition: two successors of
/// `state` on `symbol` inside the state's SCC.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HpbaViolation {
    InitialStates(Vec<String>),
    Fork { state: String, symbol: String, targets: (String, String) },
}

/// Hierarchical check on the trimmed automaton: a unique initial state and no
/// two successors on one symbol inside the source's SCC. The rejecting sink
/// counts as an ordinary state.
pub fn hpba_violation(pba: &ProbAutomaton) -> Option<HpbaViolation> {
    let t = trim_prob(pba);
    let support = t.initial_support();
    if support.len() != 1 {
        return Some(HpbaViolation::InitialStates(
            support.iter().map(|&q| t.state_name(q).to_string()).collect(),
        ));
    }
    let sccs = SccDecomposition::of_prob(&t);
    for p in 0..t.num_states() {
        for a in 0..t.num_symbols() {
            let same: Vec<StateId> =
                t.distribution(p, a).iter().map(|(q, _)| *q).filter(|&q| sccs.same_component(p, q)).collect();
            if same.len() >= 2 {
                return Some(HpbaViolation::Fork {
                    state: t.state_name(p).to_string(),
                    symbol: t.alphabet()[a].clone(),
                    targets: (t.state_name(same[0]).to_string(), t.state_name(same[1]).to_string()),
                });
            }
        }
    }
    None
}

pub fn is_hpba(pba: &ProbAutomaton) -> bool {
    hpba_violation(pba).is_none()
}

/// Two-level hierarchical check with every accepting state on level 0.
///
/// Level 0 must contain `F` and be closed under predecessors, so the least
/// candidate is the set of states that can reach `F`; enlarging it only adds
/// constraints. The check is then: unique initial state, and at most one
/// successor on the source's own level per state and symbol.
pub fn is_spba(pba: &ProbAutomaton) -> bool {
    let t = trim_prob(pba);
    if t.initial_support().len() != 1 {
        return false;
    }
    let n = t.num_states();
    let mut rev = vec![Vec::new(); n];
    for (p, succ) in t.adjacency().iter().enumerate() {
        for &q in succ {
            rev[q].push(p);
        }
    }
    let level0 = crate::scc::reachable(&rev, t.accepting().iter().copied());
    (0..n).all(|p| {
        (0..t.num_symbols()).all(|a| {
            let same = t.distribution(p, a).iter().filter(|(q, _)| level0[*q] == level0[p]).count();
            same <= 1
        })
    })
}

/// No EDA pattern in the trimmed underlying automaton.
pub fn is_flat(pba: &ProbAutomaton) -> bool {
    find_eda(&underlying_nba(&trim_prob(pba)), false).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AmbiguityDegree {
    Finite,
    Polynomial,
    Exponential,
    Countable,
    Uncountable,
}

impl fmt::Display for AmbiguityDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AmbiguityDegree::Finite => "finite",
            AmbiguityDegree::Polynomial => "polynomial",
            AmbiguityDegree::Exponential => "exponential",
            AmbiguityDegree::Countable => "countable",
            AmbiguityDegree::Uncountable => "uncountable",
        })
    }
}

/// Pattern witnesses, the resulting lattice class and structural flags.
/// `hpba` and `spba` are only defined for probabilistic inputs.
#[derive(Clone, Debug)]
pub struct AmbiguityClass {
    pub degree: AmbiguityDegree,
    pub ida: Option<PatternWitness>,
    pub ida_f: Option<PatternWitness>,
    pub eda: Option<PatternWitness>,
    pub eda_f: Option<PatternWitness>,
    pub unambiguous: bool,
    pub ambiguity_witness: Option<UltimatelyPeriodicWord>,
    pub flat: bool,
    pub hpba: Option<bool>,
    pub spba: Option<bool>,
    pub weak: bool,
}

impl AmbiguityClass {
    pub fn witness(&self, pattern: Pattern) -> Option<&PatternWitness> {
        match pattern {
            Pattern::Ida => self.ida.as_ref(),
            Pattern::IdaF => self.ida_f.as_ref(),
            Pattern::Eda => self.eda.as_ref(),
            Pattern::EdaF => self.eda_f.as_ref(),
        }
    }
}

/// Ambiguity degree from pattern presence.
pub fn degree_from_patterns(ida: bool, ida_f: bool, eda: bool, eda_f: bool) -> AmbiguityDegree {
    if eda_f {
        AmbiguityDegree::Uncountable
    } else if ida_f {
        AmbiguityDegree::Countable
    } else if !ida {
        AmbiguityDegree::Finite
    } else if !eda {
        AmbiguityDegree::Polynomial
    } else {
        AmbiguityDegree::Exponential
    }
}

fn classify_trim(t: Option<NondetAutomaton>, weak: bool, hpba: Option<bool>, spba: Option<bool>) -> AmbiguityClass {
    let (ida, ida_f, eda, eda_f, witness) = match &t {
        Some(t) => (
            ida_on_trim(t, false),
            ida_on_trim(t, true),
            eda_on_trim(t, false),
            eda_on_trim(t, true),
            ambiguity_lasso(t),
        ),
        None => (None, None, None, None, None),
    };
    AmbiguityClass {
        degree: degree_from_patterns(ida.is_some(), ida_f.is_some(), eda.is_some(), eda_f.is_some()),
        flat: eda.is_none(),
        unambiguous: witness.is_none(),
        ambiguity_witness: witness,
        ida,
        ida_f,
        eda,
        eda_f,
        hpba,
        spba,
        weak,
    }
}

pub fn classify_nondet(nba: &NondetAutomaton) -> AmbiguityClass {
    classify_trim(trimmed(nba), is_weak(nba), None, None)
}

pub fn classify_prob(pba: &ProbAutomaton) -> AmbiguityClass {
    let t = trim_prob(pba);
    let u = underlying_nba(&t);
    let u = if u.initials().is_empty() { None } else { trimmed(&u) };
    classify_trim(u, is_weak_prob(&t), Some(is_hpba(pba)), Some(is_spba(pba)))
}

pub fn classify(aut: &Automaton) -> AmbiguityClass {
    match aut {
        Automaton::Nondet(a) => classify_nondet(a),
        Automaton::Prob(a) => classify_prob(a),
    }
}

/// The trimmed underlying NBA on which pattern witnesses of `pba` replay.
pub fn pattern_automaton(pba: &ProbAutomaton) -> NondetAutomaton {
    underlying_nba(&trim_prob(pba))
}

/// Error for constructions that require the absence of a pattern.
pub(crate) fn require_absent(found: Option<PatternWitness>, reason: &str) -> Result<(), Error> {
    match found {
        None => Ok(()),
        Some(witness) => Err(Error::PatternPrecondition { reason: reason.to_string(), witness }),
    }
}
