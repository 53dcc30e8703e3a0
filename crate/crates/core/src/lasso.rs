//! Explicit product graphs and accepting-lasso search.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::scc::{is_nontrivial, tarjan_filtered, Clause};

/// Labeled graph: `succ[v]` lists `(symbol, target)`.
pub(crate) struct Explored<S> {
    pub nodes: Vec<S>,
    pub succ: Vec<Vec<(usize, usize)>>,
    pub inits: Vec<usize>,
}

impl<S> Explored<S> {
    pub fn mask(&self, f: impl Fn(&S) -> bool) -> Vec<bool> {
        self.nodes.iter().map(f).collect()
    }
}

/// Breadth-first exploration of the part reachable from `inits`.
pub(crate) fn explore<S, F>(inits: impl IntoIterator<Item = S>, mut step: F) -> Explored<S>
where
    S: Clone + Eq + Hash,
    F: FnMut(&S, &mut Vec<(usize, S)>),
{
    let mut index: HashMap<S, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut succ: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut init_ids = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |s: S, nodes: &mut Vec<S>, succ: &mut Vec<Vec<(usize, usize)>>, queue: &mut VecDeque<usize>| {
        if let Some(&i) = index.get(&s) {
            return i;
        }
        let i = nodes.len();
        index.insert(s.clone(), i);
        nodes.push(s);
        succ.push(Vec::new());
        queue.push_back(i);
        i
    };
    for s in inits {
        let i = intern(s, &mut nodes, &mut succ, &mut queue);
        if !init_ids.contains(&i) {
            init_ids.push(i);
        }
    }
    let mut buf = Vec::new();
    while let Some(v) = queue.pop_front() {
        buf.clear();
        step(&nodes[v].clone(), &mut buf);
        let mut out = Vec::with_capacity(buf.len());
        for (a, s) in buf.drain(..) {
            let t = intern(s, &mut nodes, &mut succ, &mut queue);
            out.push((a, t));
        }
        out.sort_unstable();
        out.dedup();
        succ[v] = out;
    }
    Explored { nodes, succ, inits: init_ids }
}

/// Symbols read along the stem and the cycle of a lasso.
#[derive(Clone, Debug)]
pub(crate) struct Lasso {
    pub stem_symbols: Vec<usize>,
    pub cycle_symbols: Vec<usize>,
    /// Node where the cycle starts and ends.
    #[cfg_attr(not(test), allow(dead_code))]
    pub entry: usize,
}

/// Shortest path (by edges, at least `min_steps`) from `from` to a node
/// satisfying `target`, staying inside `region`. Returns the symbols and the
/// nodes after `from`.
fn bfs_path(
    succ: &[Vec<(usize, usize)>],
    from: usize,
    region: &[bool],
    target: impl Fn(usize) -> bool,
    min_one_step: bool,
) -> Option<(Vec<usize>, Vec<usize>)> {
    if !min_one_step && target(from) {
        return Some((Vec::new(), Vec::new()));
    }
    let n = succ.len();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let mut found = None;
    // expand `from` first without marking it, so cycles back to it are found
    for &(a, t) in &succ[from] {
        if region[t] && !seen[t] {
            seen[t] = true;
            parent[t] = Some((from, a));
            if target(t) {
                found = Some(t);
                break;
            }
            queue.push_back(t);
        }
    }
    while found.is_none() {
        let Some(v) = queue.pop_front() else { break };
        for &(a, t) in &succ[v] {
            if region[t] && !seen[t] {
                seen[t] = true;
                parent[t] = Some((v, a));
                if target(t) {
                    found = Some(t);
                    break;
                }
                queue.push_back(t);
            }
        }
    }
    let mut v = found?;
    let mut symbols = Vec::new();
    let mut nodes = Vec::new();
    loop {
        let (p, a) = parent[v].expect("path reconstruction");
        symbols.push(a);
        nodes.push(v);
        // stopping at the first return to `from` still yields a path from it
        if p == from {
            break;
        }
        v = p;
    }
    symbols.reverse();
    nodes.reverse();
    Some((symbols, nodes))
}

/// A reachable cycle satisfying `clause`, reached by a shortest stem.
pub(crate) fn find_lasso(succ: &[Vec<(usize, usize)>], inits: &[usize], clause: &Clause) -> Option<Lasso> {
    let n = succ.len();
    // BFS from the initial nodes records discovery order and stems
    let mut order = Vec::new();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &i in inits {
        if !seen[i] {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(a, t) in &succ[v] {
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some((v, a));
                queue.push_back(t);
            }
        }
    }
    let adj: Vec<Vec<usize>> = succ.iter().map(|es| es.iter().map(|&(_, t)| t).collect()).collect();
    let comps = tarjan_filtered(&adj, |v| seen[v] && clause.allowed[v]);
    let mut comp_of = vec![usize::MAX; n];
    let mut good = vec![false; comps.len()];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
        good[c] = is_nontrivial(&adj, comp) && clause.hits.iter().all(|h| comp.iter().any(|&v| h[v]));
    }
    let entry = *order.iter().find(|&&v| comp_of[v] != usize::MAX && good[comp_of[v]])?;
    let c = comp_of[entry];
    let region: Vec<bool> = (0..n).map(|v| comp_of[v] == c).collect();

    let mut stem_symbols = Vec::new();
    let mut v = entry;
    while let Some((p, a)) = parent[v] {
        stem_symbols.push(a);
        v = p;
    }
    stem_symbols.reverse();

    let mut cycle_symbols = Vec::new();
    let mut cur = entry;
    for h in &clause.hits {
        let (syms, nodes) = bfs_path(succ, cur, &region, |v| h[v], false)?;
        cycle_symbols.extend(syms);
        if let Some(&last) = nodes.last() {
            cur = last;
        }
    }
    let (syms, _) = bfs_path(succ, cur, &region, |v| v == entry, cycle_symbols.is_empty())?;
    cycle_symbols.extend(syms);
    debug_assert!(!cycle_symbols.is_empty());
    Some(Lasso { stem_symbols, cycle_symbols, entry })
}

/// Whether some reachable cycle satisfies `clause`.
pub(crate) fn has_reachable_cycle(succ: &[Vec<(usize, usize)>], inits: &[usize], clause: &Clause) -> bool {
    let adj: Vec<Vec<usize>> = succ.iter().map(|es| es.iter().map(|&(_, t)| t).collect()).collect();
    let reach = crate::scc::reachable(&adj, inits.iter().copied());
    tarjan_filtered(&adj, |v| reach[v] && clause.allowed[v])
        .iter()
        .any(|c| is_nontrivial(&adj, c) && clause.hits.iter().all(|h| c.iter().any(|&v| h[v])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(n: usize, hits: &[&[usize]]) -> Clause {
        Clause {
            allowed: vec![true; n],
            hits: hits.iter().map(|h| (0..n).map(|v| h.contains(&v)).collect()).collect(),
        }
    }

    #[test]
    fn lasso_visits_all_hit_sets() {
        // 0 -a-> 1 -b-> 2 -a-> 1, 2 -b-> 3 -a-> 2
        let succ = vec![vec![(0, 1)], vec![(1, 2)], vec![(0, 1), (1, 3)], vec![(0, 2)]];
        let l = find_lasso(&succ, &[0], &clause(4, &[&[1], &[3]])).unwrap();
        assert_eq!(l.stem_symbols, vec![0]);
        assert_eq!(l.entry, 1);
        assert_eq!(l.cycle_symbols, vec![1, 1, 0, 0]);
    }

    #[test]
    fn self_loop_without_hits() {
        let succ = vec![vec![(0, 0)]];
        let l = find_lasso(&succ, &[0], &clause(1, &[])).unwrap();
        assert_eq!(l.cycle_symbols, vec![0]);
    }

    #[test]
    fn no_cycle_means_none() {
        let succ = vec![vec![(0, 1)], vec![]];
        assert!(find_lasso(&succ, &[0], &clause(2, &[])).is_none());
        assert!(!has_reachable_cycle(&succ, &[0], &clause(2, &[])));
    }
}
