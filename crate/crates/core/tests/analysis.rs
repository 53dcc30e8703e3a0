mod common;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use proptest::prelude::*;

use common::*;
use pba_core::analysis::{
    acceptance_probability, count_two_accepting_runs, is_empty_nba, member_nondet, monte_carlo, myhill_nerode_supports,
    non_universal_witness_almost_sure, pfa_acceptance, support_after, LassoChain,
};
use pba_core::patterns::classify_prob;
use pba_core::rational::rat;
use pba_core::translate::{
    almost_sure_to_dba, dba_to_pba, gadgets, parity_to_unambiguous_ldba, positive_to_nba, threshold_to_gnba_unchecked,
    AlmostSureMode,
};
use pba_core::{
    degeneralize, parse_automaton, trim_prob, Acceptance, Automaton, Error, NondetAutomaton, ProbAutomaton, ProbKind,
    Rational, UltimatelyPeriodicWord,
};

fn w(u: &str, v: &str) -> UltimatelyPeriodicWord {
    let split = |s: &str| s.chars().map(|c| c.to_string()).collect::<Vec<_>>();
    UltimatelyPeriodicWord::new(split(u), split(v)).unwrap()
}

fn oracle(a: &ProbAutomaton, word: &UltimatelyPeriodicWord) -> Rational {
    acceptance_probability(a, word).unwrap()
}

fn letters(s: &str) -> Vec<String> {
    s.chars().map(|c| c.to_string()).collect()
}

fn nondet(text: &str) -> NondetAutomaton {
    match parse_automaton(text).unwrap() {
        Automaton::Nondet(n) => n,
        Automaton::Prob(_) => panic!("expected a nondeterministic automaton"),
    }
}

fn prob(text: &str) -> ProbAutomaton {
    match parse_automaton(text).unwrap() {
        Automaton::Prob(p) => p,
        Automaton::Nondet(_) => panic!("expected a probabilistic automaton"),
    }
}

const UNIVERSAL_DBA: &str = "automaton all\ntype: dba\nalphabet: a b\nstates: s\ninit: s\naccepting: s\n\
                             trans: s a s\ntrans: s b s\n";
const EMPTY_DBA: &str = "automaton none\ntype: dba\nalphabet: a b\nstates: s\ninit: s\naccepting:\n\
                         trans: s a s\ntrans: s b s\n";

#[test]
fn oracle_examples() {
    assert_eq!(oracle(&gadgets::fig_a(), &w("aab", "$")), rat(5, 8));
    assert!(oracle(&gadgets::p_lambda(&rat(1, 2)).unwrap(), &w("", "a")).is_zero());
    assert!(oracle(&gadgets::p_tilde_lambda(&rat(1, 2)).unwrap(), &w("", "ab")).is_one());
    assert!(acceptance_probability(&load_prob("parity_coin"), &w("", "a")).is_err());
}

#[test]
fn pfa_examples() {
    let always = prob("automaton yes\ntype: pfa\nalphabet: a\nstates: s\ninit: s=1\naccepting: s\ntrans: s a s 1\n");
    let never = prob("automaton no\ntype: pfa\nalphabet: a\nstates: s\ninit: s=1\naccepting:\ntrans: s a s 1\n");
    for u in ["", "a", "aaa"] {
        assert!(pfa_acceptance(&always, &letters(u)).unwrap().is_one());
        assert!(pfa_acceptance(&never, &letters(u)).unwrap().is_zero());
    }
    assert_eq!(pfa_acceptance(&load_prob("parity_coin"), &letters("aa")).unwrap(), rat(1, 2));
    assert!(pfa_acceptance(&gadgets::fig_a(), &letters("a")).is_err());
}

#[test]
fn lasso_chain_rows_are_distributions() {
    for a in corpus() {
        for word in lasso_words(a.alphabet(), 2, 2) {
            let chain = LassoChain::build(&a, &word).unwrap();
            for v in 0..chain.len() {
                let s: Rational = chain.edges(v).iter().map(|(_, p)| p.clone()).sum();
                assert!(s.is_one(), "{} {word}", a.name());
                let (_, pos) = chain.node(v);
                for (t, _) in chain.edges(v) {
                    assert_eq!(chain.node(*t).1, word.next_position(pos));
                }
            }
        }
    }
}

#[test]
fn membership_examples() {
    assert!(member_nondet(&load_nondet("inf_a"), &w("", "ab")).unwrap());
    let n = positive_to_nba(&gadgets::fig_a()).unwrap();
    assert!(member_nondet(&n, &w("b", "$")).unwrap());
    assert_eq!(oracle(&gadgets::fig_a(), &w("b", "$")), rat(1, 4));
    assert!(!member_nondet(&n, &w("", "a")).unwrap());
}

#[test]
fn two_runs_examples() {
    let d = load_nondet("inf_ab");
    for word in lasso_words(d.alphabet(), 2, 2) {
        assert!(!count_two_accepting_runs(&d, &word).unwrap());
    }
    let twin = nondet("automaton twin\ntype: nba\nalphabet: a\nstates: x1 y1 x2 y2\ninit: x1 x2\naccepting: y1 y2\n\
                       trans: x1 a y1\ntrans: y1 a x1\ntrans: x2 a y2\ntrans: y2 a x2\n");
    assert!(count_two_accepting_runs(&twin, &w("", "a")).unwrap());
    for name in DPAS {
        let dpa = load_nondet(name);
        let l = parity_to_unambiguous_ldba(&dpa).unwrap();
        for word in lasso_words(dpa.alphabet(), 3, 3) {
            assert!(!count_two_accepting_runs(&l, &word).unwrap(), "{name} {word}");
        }
    }
}

#[test]
fn emptiness_examples() {
    let unreachable = nondet("automaton u\ntype: nba\nalphabet: a\nstates: s f\ninit: s\naccepting: f\n\
                              trans: s a s\ntrans: f a f\n");
    assert!(is_empty_nba(&unreachable).unwrap().is_none());

    let fa = gadgets::fig_a();
    let n = positive_to_nba(&fa).unwrap();
    let wit = is_empty_nba(&n).unwrap().expect("nonempty");
    assert!(member_nondet(&n, &wit).unwrap());
    assert!(oracle(&fa, &wit) > Rational::zero());

    let g = degeneralize(&threshold_to_gnba_unchecked(&fa, &rat(1, 2), 2).unwrap()).unwrap();
    let wit = is_empty_nba(&g).unwrap().expect("nonempty");
    assert!(oracle(&fa, &wit) > rat(1, 2), "{wit}");

    assert!(is_empty_nba(&load_nondet("fin_b")).is_err());
}

#[test]
fn almost_sure_witness_examples() {
    let univ = dba_to_pba(&nondet(UNIVERSAL_DBA)).unwrap();
    for mode in [AlmostSureMode::AllRuns, AlmostSureMode::Flat] {
        assert!(non_universal_witness_almost_sure(&univ, mode).unwrap().is_none());
    }
    let fa = gadgets::fig_a();
    let wit = non_universal_witness_almost_sure(&fa, AlmostSureMode::Flat).unwrap().expect("witness");
    assert!(oracle(&fa, &wit) < Rational::one());
    assert!(oracle(&fa, &w("a", "a")) < Rational::one());

    let empty = dba_to_pba(&nondet(EMPTY_DBA)).unwrap();
    let wit = non_universal_witness_almost_sure(&empty, AlmostSureMode::AllRuns).unwrap().expect("witness");
    assert!(oracle(&empty, &wit).is_zero());

    let pt = gadgets::p_tilde_lambda(&rat(1, 2)).unwrap();
    assert!(matches!(
        non_universal_witness_almost_sure(&pt, AlmostSureMode::Flat),
        Err(Error::PatternPrecondition { .. })
    ));
}

#[test]
fn almost_sure_witness_agrees_with_breakpoint_automaton() {
    let mut checked = 0;
    for a in corpus() {
        if !matches!(a.kind(), ProbKind::Buchi | ProbKind::Weak) {
            continue;
        }
        for mode in [AlmostSureMode::AllRuns, AlmostSureMode::Flat] {
            let Ok(dba) = almost_sure_to_dba(&a, mode) else {
                assert!(non_universal_witness_almost_sure(&a, mode).is_err());
                continue;
            };
            let wit = non_universal_witness_almost_sure(&a, mode).unwrap();
            let rejected = lasso_words(a.alphabet(), 3, 3).into_iter().any(|word| !dba_member(&dba, &word));
            assert_eq!(wit.is_some(), rejected, "{} {mode:?}", a.name());
            if let Some(word) = wit {
                assert!(oracle(&a, &word) < Rational::one());
                assert!(!dba_member(&dba, &word));
            }
            checked += 1;
        }
    }
    assert!(checked >= 10);
}

#[test]
fn support_examples() {
    let fa = gadgets::fig_a();
    let s = myhill_nerode_supports(&fa);
    assert!(s.len() <= 1 << trim_prob(&fa).num_states());

    let d = dba_to_pba(&load_nondet("inf_ab")).unwrap();
    let s = myhill_nerode_supports(&d);
    assert!(s.iter().all(|(sup, _)| sup.len() == 1));
    assert!(s.len() <= trim_prob(&d).num_states());

    let pl = gadgets::p_lambda(&rat(1, 2)).unwrap();
    let s = myhill_nerode_supports(&pl);
    let t = s.automaton();
    let brute: BTreeSet<BTreeSet<usize>> = finite_words(t.alphabet(), 1 << t.num_states())
        .iter()
        .map(|u| support_after(t, u).unwrap())
        .collect();
    let got: BTreeSet<BTreeSet<usize>> = s.iter().map(|(sup, _)| sup.clone()).collect();
    assert_eq!(got, brute);
    let names: BTreeSet<Vec<String>> = s.iter().map(|(sup, _)| s.names(sup)).collect();
    assert!(names.contains(&vec!["q_0".to_string()]));
    assert!(names.contains(&vec!["q_0".to_string(), "q_1".to_string()]));
}

#[test]
fn monte_carlo_examples() {
    let fa = gadgets::fig_a();
    let word = w("aab", "$");
    let est = monte_carlo(&fa, &word, 100_000, 200, 1).unwrap();
    assert!((est.estimate - 0.625).abs() <= 4.0 * est.stderr, "{est:?}");
    let again = monte_carlo(&fa, &word, 100_000, 200, 1).unwrap();
    assert_eq!(format!("{est:?}"), format!("{again:?}"));

    let d = dba_to_pba(&load_nondet("inf_a")).unwrap();
    assert_eq!(monte_carlo(&d, &w("", "ab"), 1000, 50, 3).unwrap().estimate, 1.0);
    assert_eq!(monte_carlo(&d, &w("", "b"), 1000, 50, 3).unwrap().estimate, 0.0);

    assert!(monte_carlo(&fa, &word, 0, 200, 1).is_err());
    assert!(monte_carlo(&fa, &word, 10, 3, 1).is_err());
}

proptest! {
    #[test]
    fn emptiness_matches_lasso_enumeration(seed in any::<u64>()) {
        let a = random_nba(&mut rng(seed), 4);
        let n = a.num_states();
        match is_empty_nba(&a).unwrap() {
            Some(wit) => prop_assert!(closure_member(&a, &wit)),
            None => {
                for word in lasso_words(a.alphabet(), n, n) {
                    prop_assert!(!closure_member(&a, &word), "{}", word);
                }
            }
        }
    }

    #[test]
    fn membership_matches_closure(seed in any::<u64>(), cobuchi in any::<bool>()) {
        let mut a = random_nba(&mut rng(seed), 4);
        if cobuchi {
            let f = a.acceptance().final_states();
            a = NondetAutomaton::new(
                "co",
                a.state_names().to_vec(),
                a.alphabet().to_vec(),
                a.transitions().collect::<Vec<_>>(),
                a.initials().to_vec(),
                Acceptance::CoBuchi(f),
            )
            .unwrap();
        }
        for word in lasso_words(a.alphabet(), 2, 3) {
            prop_assert_eq!(member_nondet(&a, &word).unwrap(), closure_member(&a, &word), "{}", word);
        }
    }

    #[test]
    fn membership_matches_simulation_on_deterministic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_nba(&mut r, 5);
        // keep the first successor of every row
        let trans: Vec<_> = (0..a.num_states())
            .flat_map(|p| (0..2).map(move |x| (p, x)))
            .filter_map(|(p, x)| a.successors(p, x).first().map(|&q| (p, x, q)))
            .collect();
        let d = NondetAutomaton::new(
            "det",
            a.state_names().to_vec(),
            a.alphabet().to_vec(),
            trans,
            [a.initials()[0]],
            a.acceptance().clone(),
        )
        .unwrap();
        for word in lasso_words(d.alphabet(), 3, 3) {
            prop_assert_eq!(member_nondet(&d, &word).unwrap(), dba_member(&d, &word), "{}", word);
        }
    }

    #[test]
    fn supports_are_closed_and_realized(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_pba(&mut r, 5, ProbKind::Buchi);
        let s = myhill_nerode_supports(&a);
        let t = s.automaton();
        prop_assert!(s.len() <= 1 << t.num_states());
        prop_assert!(s.contains(&t.initial_support().into_iter().collect()));
        for (sup, rep) in s.iter() {
            prop_assert_eq!(&support_after(t, rep).unwrap(), sup);
        }
        for _ in 0..50 {
            let u = random_word(&mut r, t.alphabet(), 0, 12);
            prop_assert!(s.contains(&support_after(t, &u).unwrap()));
        }
    }

    #[test]
    fn same_support_same_positivity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_pba(&mut r, 4, ProbKind::Buchi);
        let t = trim_prob(&a);
        let u1 = random_word(&mut r, t.alphabet(), 0, 4);
        let u2 = random_word(&mut r, t.alphabet(), 0, 4);
        if support_after(&t, &u1).unwrap() == support_after(&t, &u2).unwrap() {
            for _ in 0..10 {
                let x = random_word(&mut r, t.alphabet(), 0, 2);
                let y = random_word(&mut r, t.alphabet(), 1, 2);
                let p1 = oracle(&t, &UltimatelyPeriodicWord::new([u1.clone(), x.clone()].concat(), y.clone()).unwrap());
                let p2 = oracle(&t, &UltimatelyPeriodicWord::new([u2.clone(), x].concat(), y).unwrap());
                prop_assert_eq!(p1.is_zero(), p2.is_zero());
            }
        }
    }

    #[test]
    fn zero_one_automata_have_zero_one_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_nba(&mut r, 4);
        let trans: Vec<_> = (0..a.num_states())
            .flat_map(|p| (0..2).map(move |x| (p, x)))
            .filter_map(|(p, x)| a.successors(p, x).first().map(|&q| (p, x, q)))
            .collect();
        let d = NondetAutomaton::new(
            "det",
            a.state_names().to_vec(),
            a.alphabet().to_vec(),
            trans,
            [a.initials()[0]],
            a.acceptance().clone(),
        )
        .unwrap();
        let p = dba_to_pba(&d).unwrap();
        prop_assert!(classify_prob(&p).unambiguous);
        for word in lasso_words(d.alphabet(), 2, 2) {
            let v = oracle(&p, &word);
            prop_assert_eq!(v.is_one(), dba_member(&d, &word), "{}", word);
            prop_assert!(v.is_one() || v.is_zero());
        }
    }
}
