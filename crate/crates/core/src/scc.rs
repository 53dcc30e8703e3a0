//! Strongly connected components (iterative Tarjan) and the per-component
//! acceptance flags used by trimming and the pattern checks.

use std::collections::BTreeSet;

use crate::automaton::{Acceptance, NondetAutomaton, ProbAutomaton, ProbKind, StateId};

const UNVISITED: usize = usize::MAX;

/// Tarjan's algorithm restricted to nodes satisfying `allowed`; edges leaving
/// the allowed set are ignored. Components come out in reverse topological
/// order: for every edge `u -> v` between different components,
/// `id(v) < id(u)`.
pub fn tarjan_filtered(adj: &[Vec<usize>], allowed: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED || !allowed(root) {
            continue;
        }
        index[root] = counter;
        lowlink[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));

        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.1 < adj[v].len() {
                let w = adj[v][frame.1];
                frame.1 += 1;
                if !allowed(w) {
                    continue;
                }
                if index[w] == UNVISITED {
                    index[w] = counter;
                    lowlink[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    let u = parent.0;
                    lowlink[u] = lowlink[u].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

pub fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    tarjan_filtered(adj, |_| true)
}

/// Component id per node, in the numbering of [`tarjan`].
pub fn component_ids(adj: &[Vec<usize>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let comps = tarjan(adj);
    let mut ids = vec![0; adj.len()];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            ids[v] = c;
        }
    }
    (ids, comps)
}

/// Whether `comp` (a strongly connected node set) contains a cycle.
pub fn is_nontrivial(adj: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || adj[comp[0]].contains(&comp[0])
}

/// A disjunct of a cycle condition: a cycle satisfies it when it stays inside
/// `allowed` and meets every set in `hits`.
#[derive(Clone, Debug)]
pub(crate) struct Clause {
    pub allowed: Vec<bool>,
    pub hits: Vec<Vec<bool>>,
}

fn mask(n: usize, set: &BTreeSet<StateId>) -> Vec<bool> {
    (0..n).map(|q| set.contains(&q)).collect()
}

/// Cycles that make a run accepting, as clauses over states.
pub(crate) fn good_clauses(acc: &Acceptance, n: usize) -> Vec<Clause> {
    match acc {
        Acceptance::Buchi(f) => vec![Clause { allowed: vec![true; n], hits: vec![mask(n, f)] }],
        Acceptance::CoBuchi(f) => {
            vec![Clause { allowed: mask(n, f).into_iter().map(|b| !b).collect(), hits: vec![] }]
        }
        Acceptance::GeneralizedBuchi(sets) => vec![Clause {
            allowed: vec![true; n],
            hits: sets.iter().map(|s| mask(n, s)).collect(),
        }],
        Acceptance::Parity(prio) => parity_clauses(prio, 0),
    }
}

/// Cycles that make a run rejecting.
pub(crate) fn bad_clauses(acc: &Acceptance, n: usize) -> Vec<Clause> {
    match acc {
        Acceptance::Buchi(f) => good_clauses(&Acceptance::CoBuchi(f.clone()), n),
        Acceptance::CoBuchi(f) => good_clauses(&Acceptance::Buchi(f.clone()), n),
        Acceptance::GeneralizedBuchi(sets) => sets
            .iter()
            .map(|s| Clause { allowed: mask(n, s).into_iter().map(|b| !b).collect(), hits: vec![] })
            .collect(),
        Acceptance::Parity(prio) => parity_clauses(prio, 1),
    }
}

fn parity_clauses(prio: &[u32], parity: u32) -> Vec<Clause> {
    let levels: BTreeSet<u32> = prio.iter().copied().filter(|p| p % 2 == parity).collect();
    levels
        .into_iter()
        .map(|p| Clause {
            allowed: prio.iter().map(|&c| c >= p).collect(),
            hits: vec![prio.iter().map(|&c| c == p).collect()],
        })
        .collect()
}

/// Whether some cycle inside `region` satisfies `clause`.
pub(crate) fn has_cycle(adj: &[Vec<usize>], region: &[bool], clause: &Clause) -> bool {
    tarjan_filtered(adj, |v| region[v] && clause.allowed[v])
        .iter()
        .any(|c| is_nontrivial(adj, c) && clause.hits.iter().all(|h| c.iter().any(|&v| h[v])))
}

/// SCC partition of an automaton's transition graph with acceptance flags.
///
/// A component is *accepting* when it has a cycle and every run staying in it
/// forever is accepting, *rejecting* when no such run is accepting, and
/// *useless* when no accepting run can continue from it. For finite-word
/// automata a component is accepting iff it contains a final state and
/// useless iff no final state is reachable.
#[derive(Clone, Debug)]
pub struct SccDecomposition {
    component_of: Vec<usize>,
    components: Vec<Vec<StateId>>,
    dag_edges: BTreeSet<(usize, usize)>,
    nontrivial: Vec<bool>,
    accepting: Vec<bool>,
    rejecting: Vec<bool>,
    useless: Vec<bool>,
}

impl SccDecomposition {
    pub fn of_nondet(aut: &NondetAutomaton) -> Self {
        Self::build(&aut.adjacency(), Some(aut.acceptance()), None)
    }

    /// Uses the positive-probability edges, including the rejecting sink.
    pub fn of_prob(aut: &ProbAutomaton) -> Self {
        let adj = aut.adjacency();
        match aut.kind() {
            ProbKind::Buchi | ProbKind::Weak => {
                Self::build(&adj, Some(&Acceptance::Buchi(aut.accepting().clone())), None)
            }
            ProbKind::CoBuchi => {
                Self::build(&adj, Some(&Acceptance::CoBuchi(aut.accepting().clone())), None)
            }
            ProbKind::FiniteWord => Self::build(&adj, None, Some(aut.accepting())),
        }
    }

    fn build(
        adj: &[Vec<usize>],
        acceptance: Option<&Acceptance>,
        finals: Option<&BTreeSet<StateId>>,
    ) -> Self {
        let n = adj.len();
        let (component_of, components) = component_ids(adj);
        let m = components.len();
        let mut dag_edges = BTreeSet::new();
        for (u, succ) in adj.iter().enumerate() {
            for &v in succ {
                let (cu, cv) = (component_of[u], component_of[v]);
                if cu != cv {
                    dag_edges.insert((cu, cv));
                }
            }
        }
        let nontrivial: Vec<bool> = components.iter().map(|c| is_nontrivial(adj, c)).collect();
        let mut accepting = vec![false; m];
        let mut rejecting = vec![false; m];
        let mut good = vec![false; m];
        match (acceptance, finals) {
            (Some(acc), _) => {
                let goods = good_clauses(acc, n);
                let bads = bad_clauses(acc, n);
                for (c, comp) in components.iter().enumerate() {
                    let mut region = vec![false; n];
                    for &v in comp {
                        region[v] = true;
                    }
                    let has_good = goods.iter().any(|cl| has_cycle(adj, &region, cl));
                    let has_bad = bads.iter().any(|cl| has_cycle(adj, &region, cl));
                    good[c] = has_good;
                    accepting[c] = nontrivial[c] && !has_bad;
                    rejecting[c] = !has_good;
                }
            }
            (None, Some(f)) => {
                for (c, comp) in components.iter().enumerate() {
                    good[c] = comp.iter().any(|q| f.contains(q));
                    accepting[c] = good[c];
                    rejecting[c] = !good[c];
                }
            }
            (None, None) => unreachable!("either an acceptance condition or a final set"),
        }
        // successors have smaller ids, so one ascending pass suffices
        let mut can_accept = good.clone();
        let mut succs: Vec<Vec<usize>> = vec![Vec::new(); m];
        for &(u, v) in &dag_edges {
            succs[u].push(v);
        }
        for c in 0..m {
            if succs[c].iter().any(|&d| can_accept[d]) {
                can_accept[c] = true;
            }
        }
        let useless = can_accept.iter().map(|b| !b).collect();
        SccDecomposition {
            component_of,
            components,
            dag_edges,
            nontrivial,
            accepting,
            rejecting,
            useless,
        }
    }

    pub fn component_of(&self, q: StateId) -> usize {
        self.component_of[q]
    }

    pub fn components(&self) -> &[Vec<StateId>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dag_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.dag_edges
    }

    pub fn is_nontrivial(&self, c: usize) -> bool {
        self.nontrivial[c]
    }

    pub fn is_accepting(&self, c: usize) -> bool {
        self.accepting[c]
    }

    pub fn is_rejecting(&self, c: usize) -> bool {
        self.rejecting[c]
    }

    pub fn is_useless(&self, c: usize) -> bool {
        self.useless[c]
    }

    pub fn state_is_useless(&self, q: StateId) -> bool {
        self.useless[self.component_of[q]]
    }

    pub fn same_component(&self, p: StateId, q: StateId) -> bool {
        self.component_of[p] == self.component_of[q]
    }
}

/// Forward reachability from `from` in `adj`.
pub fn reachable(adj: &[Vec<usize>], from: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<usize> = from.into_iter().collect();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}
