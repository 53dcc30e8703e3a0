//! Core data model: nondeterministic and probabilistic ω-automata over named
//! states and symbols.
//!
//! States and symbols are addressed by dense indices internally. Names are kept
//! alongside so that constructions can produce structured, human-readable state
//! names and so that files round-trip.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{is_probability, Rational};

pub type StateId = usize;
pub type SymbolId = usize;

/// Acceptance structure of a [`NondetAutomaton`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Acceptance {
    Buchi(BTreeSet<StateId>),
    CoBuchi(BTreeSet<StateId>),
    GeneralizedBuchi(Vec<BTreeSet<StateId>>),
    /// One priority per state.
    Parity(Vec<u32>),
}

impl Acceptance {
    /// The set playing the role of `F` in pattern definitions: the Büchi or
    /// co-Büchi set, the union of generalized sets, or the even-priority states.
    pub fn final_states(&self) -> BTreeSet<StateId> {
        match self {
            Acceptance::Buchi(f) | Acceptance::CoBuchi(f) => f.clone(),
            Acceptance::GeneralizedBuchi(sets) => sets.iter().flatten().copied().collect(),
            Acceptance::Parity(prio) => (0..prio.len()).filter(|&q| prio[q] % 2 == 0).collect(),
        }
    }

    fn remap(&self, map: &[Option<StateId>]) -> Acceptance {
        let set = |s: &BTreeSet<StateId>| s.iter().filter_map(|&q| map[q]).collect();
        match self {
            Acceptance::Buchi(f) => Acceptance::Buchi(set(f)),
            Acceptance::CoBuchi(f) => Acceptance::CoBuchi(set(f)),
            Acceptance::GeneralizedBuchi(sets) => {
                Acceptance::GeneralizedBuchi(sets.iter().map(set).collect())
            }
            Acceptance::Parity(prio) => {
                let kept = map.iter().flatten().count();
                let mut out = vec![0; kept];
                for (q, p) in prio.iter().enumerate() {
                    if let Some(nq) = map[q] {
                        out[nq] = *p;
                    }
                }
                Acceptance::Parity(out)
            }
        }
    }
}

fn check_name(kind: &str, name: &str) -> Result<()> {
    let bad = name.is_empty()
        || name.chars().any(|c| c.is_whitespace() || c == '#' || c == '=')
        || name == ";";
    if bad {
        return Err(Error::Invalid(format!("invalid {kind} name `{name}`")));
    }
    Ok(())
}

fn check_symbol(sym: &str) -> Result<()> {
    if sym.is_empty() || sym.chars().any(|c| c.is_whitespace() || matches!(c, '#' | ':' | ',')) {
        return Err(Error::Invalid(format!("invalid symbol `{sym}`")));
    }
    Ok(())
}

fn check_unique(kind: &str, names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::Invalid(format!("duplicate {kind} `{n}`")));
        }
    }
    Ok(())
}

/// A classical automaton `(Q, Σ, Δ, Q_0, acceptance)`.
#[derive(Clone, Debug)]
pub struct NondetAutomaton {
    name: String,
    states: Vec<String>,
    alphabet: Vec<String>,
    succ: Vec<Vec<Vec<StateId>>>,
    initials: Vec<StateId>,
    acceptance: Acceptance,
}

impl NondetAutomaton {
    /// Validates and assembles an automaton. Transitions may repeat; duplicates
    /// are merged.
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        alphabet: Vec<String>,
        transitions: impl IntoIterator<Item = (StateId, SymbolId, StateId)>,
        initials: impl IntoIterator<Item = StateId>,
        acceptance: Acceptance,
    ) -> Result<Self> {
        for s in &states {
            check_name("state", s)?;
        }
        for a in &alphabet {
            check_symbol(a)?;
        }
        check_unique("state", &states)?;
        check_unique("symbol", &alphabet)?;
        let n = states.len();
        let k = alphabet.len();
        let mut succ = vec![vec![Vec::new(); k]; n];
        for (p, a, q) in transitions {
            if p >= n || q >= n || a >= k {
                return Err(Error::Invalid(format!("transition ({p}, {a}, {q}) out of range")));
            }
            succ[p][a].push(q);
        }
        for row in succ.iter_mut().flatten() {
            row.sort_unstable();
            row.dedup();
        }
        let mut initials: Vec<StateId> = initials.into_iter().collect();
        initials.sort_unstable();
        initials.dedup();
        if initials.iter().any(|&q| q >= n) {
            return Err(Error::Invalid("initial state out of range".into()));
        }
        match &acceptance {
            Acceptance::Buchi(f) | Acceptance::CoBuchi(f) => {
                if f.iter().any(|&q| q >= n) {
                    return Err(Error::Invalid("accepting state out of range".into()));
                }
            }
            Acceptance::GeneralizedBuchi(sets) => {
                if sets.iter().flatten().any(|&q| q >= n) {
                    return Err(Error::Invalid("accepting state out of range".into()));
                }
            }
            Acceptance::Parity(prio) => {
                if prio.len() != n {
                    return Err(Error::Invalid("every state needs exactly one priority".into()));
                }
            }
        }
        Ok(NondetAutomaton { name: name.into(), states, alphabet, succ, initials, acceptance })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn successors(&self, p: StateId, a: SymbolId) -> &[StateId] {
        &self.succ[p][a]
    }

    pub fn initials(&self) -> &[StateId] {
        &self.initials
    }

    pub fn acceptance(&self) -> &Acceptance {
        &self.acceptance
    }

    /// All transitions in (source, symbol, target) order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, SymbolId, StateId)> + '_ {
        self.succ.iter().enumerate().flat_map(|(p, rows)| {
            rows.iter().enumerate().flat_map(move |(a, qs)| qs.iter().map(move |&q| (p, a, q)))
        })
    }

    /// Successor lists with symbols merged, for graph algorithms.
    pub fn adjacency(&self) -> Vec<Vec<StateId>> {
        self.succ
            .iter()
            .map(|rows| {
                let mut out: Vec<StateId> = rows.iter().flatten().copied().collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Keeps the states marked in `keep`, in their original order.
    pub(crate) fn restrict(&self, keep: &[bool]) -> NondetAutomaton {
        let mut map = vec![None; self.num_states()];
        let mut states = Vec::new();
        for (q, name) in self.states.iter().enumerate() {
            if keep[q] {
                map[q] = Some(states.len());
                states.push(name.clone());
            }
        }
        let transitions: Vec<_> = self
            .transitions()
            .filter_map(|(p, a, q)| Some((map[p]?, a, map[q]?)))
            .collect();
        let initials: Vec<_> = self.initials.iter().filter_map(|&q| map[q]).collect();
        NondetAutomaton::new(
            self.name.clone(),
            states,
            self.alphabet.clone(),
            transitions,
            initials,
            self.acceptance.remap(&map),
        )
        .expect("restriction of a valid automaton is valid")
    }
}

/// Acceptance kind of a [`ProbAutomaton`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProbKind {
    Buchi,
    CoBuchi,
    Weak,
    FiniteWord,
}

impl ProbKind {
    /// Whether the designated rejecting sink belongs to the `F` set for this kind.
    pub fn sink_in_final_set(self) -> bool {
        self == ProbKind::CoBuchi
    }
}

/// A probabilistic automaton `(Q, Σ, δ, μ_0, F)` with exact rational
/// probabilities. Distributions are stored sparsely (positive entries only).
#[derive(Clone, Debug)]
pub struct ProbAutomaton {
    name: String,
    states: Vec<String>,
    alphabet: Vec<String>,
    delta: Vec<Vec<Vec<(StateId, Rational)>>>,
    init: Vec<(StateId, Rational)>,
    accepting: BTreeSet<StateId>,
    kind: ProbKind,
    rej_sink: Option<StateId>,
}

impl ProbAutomaton {
    /// Validates and assembles a probabilistic automaton. Every row `δ(p, a, ·)`
    /// and the initial distribution must sum to exactly 1; zero entries are
    /// dropped. A designated sink must loop on itself with probability 1 and be
    /// rejecting for the kind.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        alphabet: Vec<String>,
        transitions: impl IntoIterator<Item = (StateId, SymbolId, StateId, Rational)>,
        init: impl IntoIterator<Item = (StateId, Rational)>,
        accepting: BTreeSet<StateId>,
        kind: ProbKind,
        rej_sink: Option<StateId>,
    ) -> Result<Self> {
        for s in &states {
            check_name("state", s)?;
        }
        for a in &alphabet {
            check_symbol(a)?;
        }
        check_unique("state", &states)?;
        check_unique("symbol", &alphabet)?;
        let n = states.len();
        let k = alphabet.len();
        let mut rows: Vec<Vec<HashMap<StateId, Rational>>> = vec![vec![HashMap::new(); k]; n];
        for (p, a, q, pr) in transitions {
            if p >= n || q >= n || a >= k {
                return Err(Error::Invalid(format!("transition ({p}, {a}, {q}) out of range")));
            }
            if !is_probability(&pr) {
                return Err(Error::Invalid(format!(
                    "probability {pr} of ({}, {}, {}) outside [0,1]",
                    states[p], alphabet[a], states[q]
                )));
            }
            if rows[p][a].insert(q, pr).is_some() {
                return Err(Error::Invalid(format!(
                    "duplicate transition ({}, {}, {})",
                    states[p], alphabet[a], states[q]
                )));
            }
        }
        let mut delta = vec![vec![Vec::new(); k]; n];
        for p in 0..n {
            for a in 0..k {
                let mut row: Vec<(StateId, Rational)> =
                    rows[p][a].drain().filter(|(_, pr)| !pr.is_zero()).collect();
                row.sort_by_key(|(q, _)| *q);
                let sum: Rational = row.iter().map(|(_, pr)| pr.clone()).sum();
                if !sum.is_one() {
                    return Err(Error::DistributionSum {
                        state: states[p].clone(),
                        symbol: alphabet[a].clone(),
                        sum,
                    });
                }
                delta[p][a] = row;
            }
        }
        let mut init_map: HashMap<StateId, Rational> = HashMap::new();
        for (q, pr) in init {
            if q >= n {
                return Err(Error::Invalid("initial state out of range".into()));
            }
            if !is_probability(&pr) {
                return Err(Error::Invalid(format!("initial probability {pr} outside [0,1]")));
            }
            if init_map.insert(q, pr).is_some() {
                return Err(Error::Invalid(format!("duplicate initial state `{}`", states[q])));
            }
        }
        let mut init: Vec<(StateId, Rational)> =
            init_map.into_iter().filter(|(_, pr)| !pr.is_zero()).collect();
        init.sort_by_key(|(q, _)| *q);
        let sum: Rational = init.iter().map(|(_, pr)| pr.clone()).sum();
        if !sum.is_one() {
            return Err(Error::InitialSum { sum });
        }
        if accepting.iter().any(|&q| q >= n) {
            return Err(Error::Invalid("accepting state out of range".into()));
        }
        if let Some(s) = rej_sink {
            if s >= n {
                return Err(Error::Invalid("sink out of range".into()));
            }
            if !delta[s].iter().all(|row| row.len() == 1 && row[0].0 == s) {
                return Err(Error::Invalid(format!(
                    "sink `{}` must loop on itself with probability 1",
                    states[s]
                )));
            }
            if accepting.contains(&s) != kind.sink_in_final_set() {
                return Err(Error::Invalid(format!("sink `{}` must be rejecting", states[s])));
            }
        }
        let aut = ProbAutomaton {
            name: name.into(),
            states,
            alphabet,
            delta,
            init,
            accepting,
            kind,
            rej_sink,
        };
        if kind == ProbKind::Weak && !crate::structure::final_set_is_scc_union(&aut.adjacency(), &aut.accepting) {
            return Err(Error::Invalid(
                "weak automaton: accepting set is not a union of SCCs".into(),
            ));
        }
        Ok(aut)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// Positive entries of `δ(p, a, ·)`, sorted by target.
    pub fn distribution(&self, p: StateId, a: SymbolId) -> &[(StateId, Rational)] {
        &self.delta[p][a]
    }

    pub fn prob(&self, p: StateId, a: SymbolId, q: StateId) -> Rational {
        self.delta[p][a]
            .iter()
            .find(|(t, _)| *t == q)
            .map(|(_, pr)| pr.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Positive entries of `μ_0`, sorted by state.
    pub fn initial(&self) -> &[(StateId, Rational)] {
        &self.init
    }

    pub fn initial_support(&self) -> Vec<StateId> {
        self.init.iter().map(|(q, _)| *q).collect()
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting.contains(&q)
    }

    pub fn kind(&self) -> ProbKind {
        self.kind
    }

    pub fn rej_sink(&self) -> Option<StateId> {
        self.rej_sink
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, SymbolId, StateId, &Rational)> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, rows)| {
            rows.iter()
                .enumerate()
                .flat_map(move |(a, row)| row.iter().map(move |(q, pr)| (p, a, *q, pr)))
        })
    }

    /// Positive-probability successor lists with symbols merged.
    pub fn adjacency(&self) -> Vec<Vec<StateId>> {
        self.delta
            .iter()
            .map(|rows| {
                let mut out: Vec<StateId> = rows.iter().flatten().map(|(q, _)| *q).collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect()
    }

    /// Distinct probabilities on edges and initial edges.
    pub fn edge_probabilities(&self) -> BTreeSet<Rational> {
        self.transitions()
            .map(|(_, _, _, pr)| pr.clone())
            .chain(self.init.iter().map(|(_, pr)| pr.clone()))
            .collect()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same structure with a different kind tag; revalidated.
    pub fn with_kind(&self, kind: ProbKind) -> Result<ProbAutomaton> {
        ProbAutomaton::new(
            self.name.clone(),
            self.states.clone(),
            self.alphabet.clone(),
            self.transitions().map(|(p, a, q, pr)| (p, a, q, pr.clone())),
            self.init.clone(),
            self.accepting.clone(),
            kind,
            self.rej_sink,
        )
    }
}

/// Either flavor of automaton, as read from a file.
#[derive(Clone, Debug)]
pub enum Automaton {
    Nondet(NondetAutomaton),
    Prob(ProbAutomaton),
}

impl Automaton {
    pub fn name(&self) -> &str {
        match self {
            Automaton::Nondet(a) => a.name(),
            Automaton::Prob(a) => a.name(),
        }
    }

    pub fn alphabet(&self) -> &[String] {
        match self {
            Automaton::Nondet(a) => a.alphabet(),
            Automaton::Prob(a) => a.alphabet(),
        }
    }
}

impl From<NondetAutomaton> for Automaton {
    fn from(a: NondetAutomaton) -> Self {
        Automaton::Nondet(a)
    }
}

impl From<ProbAutomaton> for Automaton {
    fn from(a: ProbAutomaton) -> Self {
        Automaton::Prob(a)
    }
}

/// The ω-word `u v^ω` with `v` nonempty. Symbols are kept by name so a word
/// can be applied to automata over different alphabets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UltimatelyPeriodicWord {
    prefix: Vec<String>,
    period: Vec<String>,
}

impl UltimatelyPeriodicWord {
    pub fn new(prefix: Vec<String>, period: Vec<String>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Invalid("period of an ultimately periodic word must be nonempty".into()));
        }
        for s in prefix.iter().chain(&period) {
            check_symbol(s)?;
        }
        Ok(UltimatelyPeriodicWord { prefix, period })
    }

    /// Convenience for tests and examples: `from_strs(&["a","b"], &["$"])`.
    pub fn from_strs(prefix: &[&str], period: &[&str]) -> Result<Self> {
        Self::new(
            prefix.iter().map(|s| s.to_string()).collect(),
            period.iter().map(|s| s.to_string()).collect(),
        )
    }

    /// Parses comma-separated symbol lists; an empty prefix string is `ε`.
    pub fn parse(prefix: &str, period: &str) -> Result<Self> {
        let split = |s: &str| -> Vec<String> {
            s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect()
        };
        Self::new(split(prefix), split(period))
    }

    pub fn prefix(&self) -> &[String] {
        &self.prefix
    }

    pub fn period(&self) -> &[String] {
        &self.period
    }

    /// Total number of lasso positions `|u| + |v|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Symbol at lasso position `i < len()`.
    pub fn symbol_at(&self, i: usize) -> &str {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[i - self.prefix.len()]
        }
    }

    /// Lasso position following `i`.
    pub fn next_position(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    /// Symbol indices of every lasso position against `alphabet`.
    pub fn resolve(&self, alphabet: &[String]) -> Result<Vec<SymbolId>> {
        (0..self.len())
            .map(|i| {
                let s = self.symbol_at(i);
                alphabet
                    .iter()
                    .position(|a| a == s)
                    .ok_or_else(|| Error::Precondition(format!("symbol `{s}` not in alphabet")))
            })
            .collect()
    }
}

impl fmt::Display for UltimatelyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "prefix={} period={}", self.prefix.join(","), self.period.join(","))
    }
}

/// Interns state names while a construction builds its state space.
#[derive(Debug, Default)]
pub(crate) struct StateTable {
    names: Vec<String>,
    index: HashMap<String, StateId>,
}

impl StateTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: String) -> StateId {
        if let Some(&id) = self.index.get(&name) {
            return id;
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn into_names(self) -> Vec<String> {
        self.names
    }
}

/// Returns `base` or `base'`, `base''`, … so that it does not clash with `taken`.
pub(crate) fn fresh_name<'a>(base: &str, taken: impl IntoIterator<Item = &'a String>) -> String {
    let taken: BTreeSet<&str> = taken.into_iter().map(String::as_str).collect();
    let mut name = base.to_string();
    while taken.contains(name.as_str()) {
        name.push('\'');
    }
    name
}
