//! The three example automata from the literature on probabilistic Büchi
//! automata, with missing probability mass routed to an explicit sink `q_rej`.

use num_traits::One;

use crate::automaton::{ProbAutomaton, ProbKind};
use crate::error::Result;
use crate::rational::{rat, Rational};

use super::check_threshold;

fn build(
    name: &str,
    states: &[&str],
    alphabet: &[&str],
    transitions: Vec<(usize, usize, usize, Rational)>,
    init: Vec<(usize, Rational)>,
    accepting: &[usize],
    kind: ProbKind,
) -> ProbAutomaton {
    ProbAutomaton::new(
        name,
        states.iter().map(|s| s.to_string()).collect(),
        alphabet.iter().map(|s| s.to_string()).collect(),
        transitions,
        init,
        accepting.iter().copied().collect(),
        kind,
        Some(states.len() - 1),
    )
    .expect("gadget definitions are valid")
}

/// Weak automaton over `{a, b, $}` whose value on `u$^ω` is
/// `½(1 − 2^{−#a(u)} + 2^{−#b(u)})`.
pub fn fig_a() -> ProbAutomaton {
    let one = Rational::one;
    let half = || rat(1, 2);
    let (qa, qb, qp, qd, rej) = (0, 1, 2, 3, 4);
    let (a, b, d) = (0, 1, 2);
    let mut t = vec![
        (qa, a, qa, half()),
        (qa, a, qp, half()),
        (qa, b, qa, one()),
        (qa, d, rej, one()),
        (qb, a, qb, one()),
        (qb, b, qb, half()),
        (qb, b, rej, half()),
        (qb, d, qd, one()),
        (qp, a, qp, one()),
        (qp, b, qp, one()),
        (qp, d, qd, one()),
        (qd, a, rej, one()),
        (qd, b, rej, one()),
        (qd, d, qd, one()),
    ];
    t.extend((0..3).map(|x| (rej, x, rej, one())));
    build(
        "fig_a",
        &["q_a", "q_b", "q_+", "q_$", "q_rej"],
        &["a", "b", "$"],
        t,
        vec![(qa, half()), (qb, half())],
        &[qd],
        ProbKind::Weak,
    )
}

/// `P_λ`: `q_0` is initial and accepting; on `a` it stays with probability
/// `1 − λ` and moves to `q_1` with probability `λ`; `q_1` loops on `a` and
/// returns on `b`.
pub fn p_lambda(lambda: &Rational) -> Result<ProbAutomaton> {
    check_threshold(lambda)?;
    let one = Rational::one;
    let (q0, q1, rej) = (0, 1, 2);
    let (a, b) = (0, 1);
    let mut t = vec![
        (q0, a, q0, one() - lambda),
        (q0, a, q1, lambda.clone()),
        (q0, b, rej, one()),
        (q1, a, q1, one()),
        (q1, b, q0, one()),
    ];
    t.extend((0..2).map(|x| (rej, x, rej, one())));
    Ok(build("p_lambda", &["q_0", "q_1", "q_rej"], &["a", "b"], t, vec![(q0, one())], &[q0], ProbKind::Buchi))
}

/// `P̃_λ`: weak automaton with accepting sink `q_f`, whose almost-sure
/// language is `{a^{k_1} b a^{k_2} b … | ∏ (1 − (1−λ)^{k_i}) = 0}`.
pub fn p_tilde_lambda(lambda: &Rational) -> Result<ProbAutomaton> {
    check_threshold(lambda)?;
    let one = Rational::one;
    let (q0, q1, q2, qf, rej) = (0, 1, 2, 3, 4);
    let (a, b) = (0, 1);
    let mut t = vec![
        (q0, a, q1, lambda.clone()),
        (q0, a, q2, one() - lambda),
        (q0, b, rej, one()),
        (q1, a, q1, one()),
        (q1, b, q0, one()),
        (q2, a, q2, one() - lambda),
        (q2, a, q1, lambda.clone()),
        (q2, b, qf, one()),
        (qf, a, qf, one()),
        (qf, b, qf, one()),
    ];
    t.extend((0..2).map(|x| (rej, x, rej, one())));
    Ok(build(
        "p_tilde_lambda",
        &["q_0", "q_1", "q_2", "q_f", "q_rej"],
        &["a", "b"],
        t,
        vec![(q0, one())],
        &[qf],
        ProbKind::Weak,
    ))
}
