//! Corpus loading, word enumeration and brute-force reference semantics
//! shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pba_core::translate::{dba_to_pba, gadgets, ldba_to_pba, parity_to_unambiguous_ldba};
use pba_core::{
    parse_automaton, rational::rat, Acceptance, Automaton, NondetAutomaton, ProbAutomaton, ProbKind, Rational,
    UltimatelyPeriodicWord,
};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(format!("{name}.aut"))
}

pub fn load(name: &str) -> Automaton {
    let text = std::fs::read_to_string(data_path(name)).expect("corpus file");
    parse_automaton(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load_prob(name: &str) -> ProbAutomaton {
    match load(name) {
        Automaton::Prob(p) => p,
        Automaton::Nondet(_) => panic!("{name} is not probabilistic"),
    }
}

pub fn load_nondet(name: &str) -> NondetAutomaton {
    match load(name) {
        Automaton::Nondet(n) => n,
        Automaton::Prob(_) => panic!("{name} is not nondeterministic"),
    }
}

pub const DPAS: [&str; 6] = ["fin_b", "last_letter3", "last_letter4", "partial2", "mod3", "alt4"];

/// Büchi, weak and co-Büchi PBAs: the gadgets, embeddings of deterministic
/// and parity automata, and the hand-built files.
pub fn corpus() -> Vec<ProbAutomaton> {
    let mut out = vec![
        gadgets::fig_a(),
        gadgets::p_lambda(&rat(1, 2)).unwrap(),
        gadgets::p_lambda(&rat(1, 3)).unwrap().with_name("p_lambda_third"),
        gadgets::p_tilde_lambda(&rat(1, 2)).unwrap(),
        dba_to_pba(&load_nondet("inf_ab")).unwrap(),
        dba_to_pba(&load_nondet("inf_a")).unwrap(),
        ldba_to_pba(&parity_to_unambiguous_ldba(&load_nondet("fin_b")).unwrap()).unwrap().with_name("ldba_fin_b"),
        ldba_to_pba(&parity_to_unambiguous_ldba(&load_nondet("mod3")).unwrap()).unwrap().with_name("ldba_mod3"),
    ];
    for name in ["coin", "two_branch", "fork3", "weak4", "buchi5", "six", "flat_fork", "poly3", "cobuchi3"] {
        out.push(load_prob(name));
    }
    out
}

fn all_strings(alphabet: &[String], max_len: usize, min_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in alphabet {
                let mut w2: Vec<String> = w.clone();
                w2.push(a.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.into_iter().filter(|w| w.len() >= min_len).collect()
}

/// Every `u v^ω` with `|u| ≤ max_u` and `1 ≤ |v| ≤ max_v`.
pub fn lasso_words(alphabet: &[String], max_u: usize, max_v: usize) -> Vec<UltimatelyPeriodicWord> {
    let prefixes = all_strings(alphabet, max_u, 0);
    let periods = all_strings(alphabet, max_v, 1);
    let mut out = Vec::with_capacity(prefixes.len() * periods.len());
    for u in &prefixes {
        for v in &periods {
            out.push(UltimatelyPeriodicWord::new(u.clone(), v.clone()).unwrap());
        }
    }
    out
}

pub fn finite_words(alphabet: &[String], max_len: usize) -> Vec<Vec<String>> {
    all_strings(alphabet, max_len, 0)
}

fn symbol_ids(alphabet: &[String], w: &UltimatelyPeriodicWord) -> Vec<usize> {
    (0..w.len()).map(|i| alphabet.iter().position(|a| a == w.symbol_at(i)).expect("symbol")).collect()
}

/// Lasso membership by transitive closure of the product with word
/// positions: accepted iff some reachable node lies on a cycle that meets
/// every set of a generalized Büchi condition (or avoids `F` for co-Büchi).
pub fn closure_member(aut: &NondetAutomaton, w: &UltimatelyPeriodicWord) -> bool {
    let syms = symbol_ids(aut.alphabet(), w);
    let len = w.len();
    let n = aut.num_states() * len;
    let id = |q: usize, i: usize| q * len + i;
    let mut reach = vec![vec![false; n]; n];
    for q in 0..aut.num_states() {
        for i in 0..len {
            for &q2 in aut.successors(q, syms[i]) {
                reach[id(q, i)][id(q2, w.next_position(i))] = true;
            }
        }
    }
    let step = reach.clone();
    for k in 0..n {
        for x in 0..n {
            if reach[x][k] {
                let row = reach[k].clone();
                for (y, r) in row.into_iter().enumerate() {
                    if r {
                        reach[x][y] = true;
                    }
                }
            }
        }
    }
    let reachable: Vec<bool> =
        (0..n).map(|x| aut.initials().iter().any(|&q| id(q, 0) == x || reach[id(q, 0)][x])).collect();
    let (sets, avoid): (Vec<BTreeSet<usize>>, Option<BTreeSet<usize>>) = match aut.acceptance() {
        Acceptance::Buchi(f) => (vec![f.clone()], None),
        Acceptance::GeneralizedBuchi(s) => (s.clone(), None),
        Acceptance::CoBuchi(f) => (vec![], Some(f.clone())),
        Acceptance::Parity(_) => panic!("use parity_member"),
    };
    let on_cycle_with = |x: usize, y: usize| x == y || (reach[x][y] && reach[y][x]);
    if let Some(f) = avoid {
        // a cycle inside the non-F nodes: recompute closure restricted to them
        let allowed: Vec<bool> = (0..n).map(|x| !f.contains(&(x / len))).collect();
        let mut r2 = vec![vec![false; n]; n];
        for x in 0..n {
            for y in 0..n {
                r2[x][y] = step[x][y] && allowed[x] && allowed[y];
            }
        }
        for k in 0..n {
            for x in 0..n {
                if r2[x][k] {
                    let row = r2[k].clone();
                    for (y, r) in row.into_iter().enumerate() {
                        if r {
                            r2[x][y] = true;
                        }
                    }
                }
            }
        }
        return (0..n).any(|x| reachable[x] && r2[x][x]);
    }
    (0..n).any(|x| {
        reachable[x]
            && reach[x][x]
            && sets.iter().all(|s| (0..n).any(|y| s.contains(&(y / len)) && on_cycle_with(x, y)))
    })
}

/// Run of a deterministic automaton on a lasso: the cycle of
/// `(state, position)` pairs it eventually repeats, or `None` if it blocks.
pub fn deterministic_cycle(aut: &NondetAutomaton, w: &UltimatelyPeriodicWord) -> Option<Vec<usize>> {
    let syms = symbol_ids(aut.alphabet(), w);
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut trace = Vec::new();
    let mut cur = (*aut.initials().first()?, 0);
    loop {
        if let Some(&start) = seen.get(&cur) {
            return Some(trace[start..].iter().map(|&(q, _)| q).collect());
        }
        seen.insert(cur, trace.len());
        trace.push(cur);
        let (q, i) = cur;
        let succ = aut.successors(q, syms[i]);
        assert!(succ.len() <= 1, "not deterministic");
        cur = (*succ.first()?, w.next_position(i));
    }
}

/// Min-even parity acceptance of a deterministic parity automaton.
pub fn parity_member(dpa: &NondetAutomaton, w: &UltimatelyPeriodicWord) -> bool {
    let Acceptance::Parity(prio) = dpa.acceptance() else { panic!("not a parity automaton") };
    match deterministic_cycle(dpa, w) {
        None => false,
        Some(cycle) => cycle.iter().map(|&q| prio[q]).min().unwrap() % 2 == 0,
    }
}

/// Büchi acceptance of a deterministic automaton by direct simulation.
pub fn dba_member(dba: &NondetAutomaton, w: &UltimatelyPeriodicWord) -> bool {
    let f = dba.acceptance().final_states();
    deterministic_cycle(dba, w).is_some_and(|c| c.iter().any(|q| f.contains(q)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word(rng: &mut ChaCha8Rng, alphabet: &[String], min: usize, max: usize) -> Vec<String> {
    let len = rng.gen_range(min..=max);
    (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone()).collect()
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

fn ab() -> Vec<String> {
    vec!["a".into(), "b".into()]
}

/// Büchi automaton over `{a, b}` with `1..=max_states` states and random
/// edges, initials and final states.
pub fn random_nba(rng: &mut ChaCha8Rng, max_states: usize) -> NondetAutomaton {
    let n = rng.gen_range(1..=max_states);
    let mut trans = Vec::new();
    for p in 0..n {
        for a in 0..2 {
            for q in 0..n {
                if rng.gen_bool(0.35) {
                    trans.push((p, a, q));
                }
            }
        }
    }
    let mut init: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
    if init.is_empty() {
        init.push(0);
    }
    let f: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    NondetAutomaton::new("random", names(n), ab(), trans, init, Acceptance::Buchi(f)).unwrap()
}

/// Complete PBA over `{a, b}`: each row picks one or two successors and
/// splits its mass by 1/2, 1/3 or 1/4.
pub fn random_pba(rng: &mut ChaCha8Rng, max_states: usize, kind: ProbKind) -> ProbAutomaton {
    let n = rng.gen_range(1..=max_states);
    let mut trans = Vec::new();
    for p in 0..n {
        for a in 0..2 {
            let q = rng.gen_range(0..n);
            let q2 = rng.gen_range(0..n);
            if q == q2 || rng.gen_bool(0.4) {
                trans.push((p, a, q, Rational::from_integer(1.into())));
            } else {
                let x = rat(1, rng.gen_range(2..=4));
                trans.push((p, a, q, x.clone()));
                trans.push((p, a, q2, Rational::from_integer(1.into()) - x));
            }
        }
    }
    let f: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    let init = if n > 1 && rng.gen_bool(0.3) { vec![(0, rat(1, 2)), (1, rat(1, 2))] } else { vec![(0, rat(1, 1))] };
    ProbAutomaton::new("random", names(n), ab(), trans, init, f, kind, None).unwrap()
}
