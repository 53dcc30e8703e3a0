//! Counter construction from generalized Büchi to Büchi acceptance.

use std::collections::BTreeSet;

use crate::automaton::{Acceptance, NondetAutomaton};
use crate::error::{Error, Result};

/// States `(q,i)` for `i ∈ 1..=k`. The counter moves from `i` to `i+1` (wrapping
/// from `k` to 1) when leaving a state of `F_i`; `(q,k)` with `q ∈ F_k` is
/// accepting. Büchi inputs are returned unchanged.
pub fn degeneralize(g: &NondetAutomaton) -> Result<NondetAutomaton> {
    let sets = match g.acceptance() {
        Acceptance::GeneralizedBuchi(sets) => sets,
        Acceptance::Buchi(_) => return Ok(g.clone()),
        _ => return Err(Error::Precondition("degeneralization needs generalized Büchi acceptance".into())),
    };
    let k = sets.len();
    if k == 0 {
        // no constraint: every infinite run accepts
        let all = (0..g.num_states()).collect();
        return NondetAutomaton::new(
            g.name(),
            g.state_names().to_vec(),
            g.alphabet().to_vec(),
            g.transitions(),
            g.initials().iter().copied(),
            Acceptance::Buchi(all),
        );
    }
    let n = g.num_states();
    let id = |q: usize, i: usize| q * k + i;
    let mut names = Vec::with_capacity(n * k);
    for q in 0..n {
        for i in 0..k {
            names.push(format!("({},{})", g.state_name(q), i + 1));
        }
    }
    let mut transitions = Vec::new();
    for (p, a, q) in g.transitions() {
        for i in 0..k {
            let j = if sets[i].contains(&p) { (i + 1) % k } else { i };
            transitions.push((id(p, i), a, id(q, j)));
        }
    }
    let accepting: BTreeSet<_> = sets[k - 1].iter().map(|&q| id(q, k - 1)).collect();
    NondetAutomaton::new(
        g.name(),
        names,
        g.alphabet().to_vec(),
        transitions,
        g.initials().iter().map(|&q| id(q, 0)),
        Acceptance::Buchi(accepting),
    )
}
