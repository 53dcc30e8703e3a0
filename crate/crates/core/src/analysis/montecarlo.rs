//! Seeded Monte Carlo estimation of acceptance probabilities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{ProbAutomaton, UltimatelyPeriodicWord};
use crate::error::{Error, Result};

use super::oracle::LassoChain;

/// Number of independent random streams; fixed so results do not depend on
/// the machine.
pub const STREAMS: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    /// Fraction of trajectories ending inside an accepting bottom component.
    pub estimate: f64,
    pub stderr: f64,
    /// Fraction of trajectories that passed a fork near the horizon.
    pub fork_tail_stat: f64,
}

struct Sampler<'a> {
    chain: &'a LassoChain,
    /// Cumulative distribution per node.
    cumulative: Vec<Vec<(usize, f64)>>,
    initial: Vec<(usize, f64)>,
    /// Per node: `Some(good)` inside a bottom component.
    bottom: Vec<Option<bool>>,
    /// Per node: no fork is reachable any more.
    settled: Vec<bool>,
}

fn cumulate(entries: impl Iterator<Item = (usize, f64)>) -> Vec<(usize, f64)> {
    let mut acc = 0.0;
    entries
        .map(|(v, p)| {
            acc += p;
            (v, acc)
        })
        .collect()
}

fn draw(table: &[(usize, f64)], rng: &mut ChaCha8Rng) -> usize {
    let x: f64 = rng.gen::<f64>() * table.last().map_or(1.0, |e| e.1);
    table.iter().find(|e| x < e.1).unwrap_or(table.last().expect("nonempty distribution")).0
}

impl<'a> Sampler<'a> {
    fn new(chain: &'a LassoChain, aut: &ProbAutomaton) -> Self {
        let to_f = |p: &crate::Rational| num_traits::ToPrimitive::to_f64(p).unwrap_or(0.0);
        let cumulative =
            (0..chain.len()).map(|v| cumulate(chain.edges(v).iter().map(|(w, p)| (*w, to_f(p))))).collect();
        let initial = cumulate(chain.initial().iter().map(|(w, p)| (*w, to_f(p))));
        let (comp_of, _, status) = chain.bottoms(aut);
        let bottom: Vec<Option<bool>> = comp_of.iter().map(|&c| status[c]).collect();
        // a node is settled when no fork is reachable from it
        let adj = chain.adjacency();
        let mut rev = vec![Vec::new(); chain.len()];
        for (v, ws) in adj.iter().enumerate() {
            for &w in ws {
                rev[w].push(v);
            }
        }
        let forks: Vec<usize> = (0..chain.len()).filter(|&v| chain.is_fork(v)).collect();
        let reaches_fork = crate::scc::reachable(&rev, forks);
        let settled = reaches_fork.into_iter().map(|b| !b).collect();
        Sampler { chain, cumulative, initial, bottom, settled }
    }

    /// One trajectory: (accepted, forked in tail window).
    fn run(&self, horizon: usize, tail: usize, rng: &mut ChaCha8Rng) -> (bool, bool) {
        let mut v = draw(&self.initial, rng);
        let mut forked = false;
        for step in 0..horizon {
            if self.settled[v] && self.bottom[v].is_some() {
                break;
            }
            if self.chain.is_fork(v) && step + tail >= horizon {
                forked = true;
            }
            v = draw(&self.cumulative[v], rng);
        }
        (self.bottom[v] == Some(true), forked)
    }
}

/// Samples `runs` trajectories of length `horizon` on the lasso chain of
/// `w`. A trajectory counts as accepting when it ends inside an accepting
/// bottom component. Runs are split over [`STREAMS`] generators seeded with
/// `seed + i`.
pub fn monte_carlo(
    pba: &ProbAutomaton,
    w: &UltimatelyPeriodicWord,
    runs: usize,
    horizon: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if runs == 0 {
        return Err(Error::Precondition("at least one run is required".into()));
    }
    if horizon < w.len() {
        return Err(Error::Precondition(format!("horizon must be at least {}", w.len())));
    }
    let chain = LassoChain::build(pba, w)?;
    let sampler = Sampler::new(&chain, pba);
    let tail = w.period().len() * 10;
    let counts: Vec<(usize, usize)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..STREAMS)
            .map(|i| {
                let share = runs / STREAMS as usize + usize::from((i as usize) < runs % STREAMS as usize);
                let sampler = &sampler;
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
                    let mut acc = 0;
                    let mut forks = 0;
                    for _ in 0..share {
                        let (a, f) = sampler.run(horizon, tail, &mut rng);
                        acc += usize::from(a);
                        forks += usize::from(f);
                    }
                    (acc, forks)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampler thread")).collect()
    });
    let accepted: usize = counts.iter().map(|c| c.0).sum();
    let forked: usize = counts.iter().map(|c| c.1).sum();
    let n = runs as f64;
    let estimate = accepted as f64 / n;
    Ok(MonteCarloEstimate {
        estimate,
        stderr: (estimate * (1.0 - estimate) / n).sqrt(),
        fork_tail_stat: forked as f64 / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::translate::gadgets;

    #[test]
    fn deterministic_for_fixed_seed() {
        let w = UltimatelyPeriodicWord::from_strs(&["a", "a", "b"], &["$"]).unwrap();
        let a = monte_carlo(&gadgets::fig_a(), &w, 2000, 50, 7).unwrap();
        let b = monte_carlo(&gadgets::fig_a(), &w, 2000, 50, 7).unwrap();
        assert_eq!(a, b);
        assert!((a.estimate - 0.625).abs() < 0.06);
    }

    #[test]
    fn rejects_short_horizon() {
        let w = UltimatelyPeriodicWord::from_strs(&["a", "a", "b"], &["$"]).unwrap();
        assert!(monte_carlo(&gadgets::fig_a(), &w, 10, 2, 0).is_err());
    }
}
