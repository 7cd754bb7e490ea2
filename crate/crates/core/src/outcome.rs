//! Exact outcome statistics of deterministic finite-memory profiles.

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arena::{Arena, StateId};
use crate::chain::{build_chain, build_chain_from, ChainEdge, ProfileChain};
use crate::lasso::Lasso;
use crate::linalg::{solve_vector, Matrix, SingularSystem};
use crate::preference::{OutcomeStat, Preference};
use crate::rational::Rational;
use crate::strategy::Profile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OutcomeError {
    #[error("the arena has no priorities")]
    MissingPriorities,
    #[error("the arena is not deterministic")]
    NotDeterministic,
    #[error(transparent)]
    Singular(#[from] SingularSystem),
}

fn is_even(p: u32) -> Rational {
    if p % 2 == 0 {
        Rational::one()
    } else {
        Rational::zero()
    }
}

fn class_index(chain: &ProfileChain, classes: &[Vec<usize>]) -> Vec<Option<usize>> {
    let mut class_of = vec![None; chain.len()];
    for (c, members) in classes.iter().enumerate() {
        for &u in members {
            class_of[u] = Some(c);
        }
    }
    class_of
}

/// Expected long-run average reward from every node.
pub fn chain_mean_payoff(chain: &ProfileChain) -> Result<Vec<Rational>, SingularSystem> {
    let classes = chain.recurrent_classes();
    let gains = chain.class_gains(&classes)?;
    chain.absorb(&class_index(chain, &classes), &gains)
}

/// Probability from every node that the largest priority seen infinitely often is even.
pub fn chain_parity(chain: &ProfileChain, priorities: &[u32]) -> Result<Vec<Rational>, SingularSystem> {
    let classes = chain.recurrent_classes();
    let wins: Vec<Rational> = classes
        .iter()
        .map(|c| is_even(c.iter().map(|&u| priorities[chain.node(u).state.0]).max().unwrap_or(0)))
        .collect();
    chain.absorb(&class_index(chain, &classes), &wins)
}

/// Probability from each initial node that the largest priority ever seen
/// (the starting state included) is even, via the running-maximum product.
pub fn chain_simple_parity(chain: &ProfileChain, priorities: &[u32]) -> Result<Vec<Rational>, SingularSystem> {
    let prio = |u: usize| priorities[chain.node(u).state.0];
    let mut index: HashMap<(usize, u32), usize> = HashMap::new();
    let mut keys: Vec<(usize, u32)> = Vec::new();
    let mut edges: Vec<Vec<ChainEdge>> = Vec::new();
    let mut starts = Vec::new();
    for &u0 in chain.initial() {
        let key = (u0, prio(u0));
        let id = *index.entry(key).or_insert_with(|| {
            keys.push(key);
            keys.len() - 1
        });
        starts.push(id);
        let mut i = edges.len();
        while i < keys.len() {
            let (u, m) = keys[i];
            let mut out = Vec::new();
            for e in chain.edges(u) {
                let next = (e.target, m.max(prio(e.target)));
                let j = *index.entry(next).or_insert_with(|| {
                    keys.push(next);
                    keys.len() - 1
                });
                out.push(ChainEdge {
                    target: j,
                    prob: e.prob.clone(),
                    reward: e.reward.clone(),
                    transition: e.transition,
                });
            }
            edges.push(out);
            i += 1;
        }
    }
    let nodes = keys.iter().map(|&(u, _)| chain.node(u)).collect();
    let product = ProfileChain::from_parts(nodes, edges, starts.clone());
    let classes = product.recurrent_classes();
    // the running maximum is constant on a closed class
    let wins: Vec<Rational> = classes.iter().map(|c| is_even(keys[c[0]].1)).collect();
    let values = product.absorb(&class_index(&product, &classes), &wins)?;
    Ok(starts.iter().map(|&s| values[s].clone()).collect())
}

/// Expected discounted sum from every node: the solution of `v = r̄ + βPv`.
pub fn chain_discounted(chain: &ProfileChain, beta: &Rational) -> Result<Vec<Rational>, SingularSystem> {
    let n = chain.len();
    let mut m = Matrix::identity(n);
    for u in 0..n {
        for e in chain.edges(u) {
            *m.get_mut(u, e.target) -= beta * &e.prob;
        }
    }
    solve_vector(&m, chain.expected_rewards())
}

/// The reward word of the unique run from `start` in a chain where every node
/// has a single successor.
pub fn chain_lasso(chain: &ProfileChain, start: usize) -> Result<Lasso, OutcomeError> {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut word = Vec::new();
    let mut u = start;
    loop {
        if let Some(&k) = seen.get(&u) {
            let cycle = word.split_off(k);
            return Ok(Lasso::new(word, cycle).expect("a revisited node closes a nonempty cycle"));
        }
        seen.insert(u, word.len());
        let [e] = chain.edges(u) else {
            return Err(OutcomeError::NotDeterministic);
        };
        word.push(e.reward.clone());
        u = e.target;
    }
}

fn priorities(arena: &Arena) -> Result<&[u32], OutcomeError> {
    arena.priorities().ok_or(OutcomeError::MissingPriorities)
}

pub fn mean_payoff_value(arena: &Arena, s0: StateId, p: &Profile) -> Result<Rational, OutcomeError> {
    let c = build_chain(arena, s0, p);
    Ok(chain_mean_payoff(&c)?.swap_remove(c.initial()[0]))
}

pub fn parity_value(arena: &Arena, s0: StateId, p: &Profile) -> Result<Rational, OutcomeError> {
    let pr = priorities(arena)?;
    let c = build_chain(arena, s0, p);
    Ok(chain_parity(&c, pr)?.swap_remove(c.initial()[0]))
}

pub fn simple_parity_value(arena: &Arena, s0: StateId, p: &Profile) -> Result<Rational, OutcomeError> {
    let pr = priorities(arena)?;
    let c = build_chain(arena, s0, p);
    Ok(chain_simple_parity(&c, pr)?.swap_remove(0))
}

pub fn discounted_value(arena: &Arena, s0: StateId, p: &Profile, beta: &Rational) -> Result<Rational, OutcomeError> {
    let c = build_chain(arena, s0, p);
    Ok(chain_discounted(&c, beta)?.swap_remove(c.initial()[0]))
}

/// The reward word of the unique play of a profile in a deterministic arena.
pub fn lasso_of(arena: &Arena, s0: StateId, p: &Profile) -> Result<Lasso, OutcomeError> {
    if !arena.is_deterministic() {
        return Err(OutcomeError::NotDeterministic);
    }
    let c = build_chain(arena, s0, p);
    chain_lasso(&c, c.initial()[0])
}

/// The outcome statistic of `p` from `s0` under `pref`.
pub fn evaluate(arena: &Arena, s0: StateId, p: &Profile, pref: &Preference) -> Result<OutcomeStat, OutcomeError> {
    Ok(evaluate_from(arena, &[s0], p, pref)?.swap_remove(0))
}

/// Outcome statistics from every state, in state order.
pub fn evaluate_all(arena: &Arena, p: &Profile, pref: &Preference) -> Result<Vec<OutcomeStat>, OutcomeError> {
    let starts: Vec<StateId> = arena.states().collect();
    evaluate_from(arena, &starts, p, pref)
}

/// Outcome statistics from each of `starts`, sharing one chain.
pub fn evaluate_from(arena: &Arena, starts: &[StateId], p: &Profile, pref: &Preference) -> Result<Vec<OutcomeStat>, OutcomeError> {
    if matches!(pref, Preference::Overtaking) && !arena.is_deterministic() {
        return Err(OutcomeError::NotDeterministic);
    }
    let c = build_chain_from(arena, starts, p);
    let per_node = |values: Vec<Rational>| c.initial().iter().map(|&u| OutcomeStat::Value(values[u].clone())).collect();
    Ok(match pref {
        Preference::MeanPayoff => per_node(chain_mean_payoff(&c)?),
        Preference::Parity => per_node(chain_parity(&c, priorities(arena)?)?),
        Preference::Discounted(beta) => per_node(chain_discounted(&c, beta)?),
        Preference::SimpleParity => chain_simple_parity(&c, priorities(arena)?)?
            .into_iter()
            .map(OutcomeStat::Value)
            .collect(),
        Preference::Overtaking => c
            .initial()
            .iter()
            .map(|&u| chain_lasso(&c, u).map(OutcomeStat::Lasso))
            .collect::<Result<_, _>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{ArenaBuilder, Player};
    use crate::gallery;
    use crate::rational::{int, ratio};
    use crate::strategy::{first_strategy, DSStrategy};

    fn forced(a: &Arena) -> Profile {
        Profile::new(first_strategy(a, Player::Max), first_strategy(a, Player::Min)).unwrap()
    }

    fn loop_arena(reward: Rational) -> Arena {
        let mut b = ArenaBuilder::new();
        let q = b.state_with_priority("q", Player::Max, 1);
        let a = b.action("a");
        b.transition(q, a, q, int(1), reward);
        b.build().unwrap()
    }

    /// Deterministic cycle through `labels.len()` states with the given rewards and priorities.
    fn cycle_arena(labels: &[i64], prios: &[u32]) -> Arena {
        let mut b = ArenaBuilder::new();
        let ids: Vec<_> = prios.iter().enumerate().map(|(i, &p)| b.state_with_priority(format!("c{i}"), Player::Max, p)).collect();
        let a = b.action("go");
        for (i, &r) in labels.iter().enumerate() {
            b.transition(ids[i], a, ids[(i + 1) % ids.len()], int(1), int(r));
        }
        b.build().unwrap()
    }

    /// Start state branching evenly to two absorbing loops.
    fn branch_arena(r: [i64; 2], prios: [u32; 3]) -> Arena {
        let mut b = ArenaBuilder::new();
        let s = b.state_with_priority("s", Player::Max, prios[0]);
        let l = b.state_with_priority("l", Player::Max, prios[1]);
        let h = b.state_with_priority("h", Player::Max, prios[2]);
        let a = b.action("a");
        b.transition(s, a, l, ratio(1, 2), int(0))
            .transition(s, a, h, ratio(1, 2), int(0))
            .transition(l, a, l, int(1), int(r[0]))
            .transition(h, a, h, int(1), int(r[1]));
        b.build().unwrap()
    }

    #[test]
    fn mean_payoff_examples() {
        let l = loop_arena(ratio(3, 7));
        assert_eq!(mean_payoff_value(&l, StateId(0), &forced(&l)).unwrap(), ratio(3, 7));
        let c = cycle_arena(&[0, 1, 1, 0], &[0, 0, 0, 0]);
        assert_eq!(mean_payoff_value(&c, StateId(0), &forced(&c)).unwrap(), ratio(1, 2));
        let b = branch_arena([0, 1], [0, 0, 0]);
        assert_eq!(mean_payoff_value(&b, StateId(0), &forced(&b)).unwrap(), ratio(1, 2));
    }

    #[test]
    fn parity_examples() {
        let c = cycle_arena(&[0, 0], &[1, 2]);
        assert_eq!(parity_value(&c, StateId(0), &forced(&c)).unwrap(), int(1));
        let l = loop_arena(int(0));
        assert_eq!(parity_value(&l, StateId(0), &forced(&l)).unwrap(), int(0));
        let b = branch_arena([0, 0], [0, 1, 2]);
        assert_eq!(parity_value(&b, StateId(0), &forced(&b)).unwrap(), ratio(1, 2));
        let mut no_prio = ArenaBuilder::new();
        let q = no_prio.state("q", Player::Max);
        let a = no_prio.action("a");
        no_prio.transition(q, a, q, int(1), int(0));
        let np = no_prio.build().unwrap();
        assert_eq!(parity_value(&np, q, &forced(&np)), Err(OutcomeError::MissingPriorities));
    }

    #[test]
    fn simple_parity_examples() {
        // 1 then 2 then a loop on priority 0
        let mut b = ArenaBuilder::new();
        let x = b.state_with_priority("x", Player::Max, 1);
        let y = b.state_with_priority("y", Player::Max, 2);
        let z = b.state_with_priority("z", Player::Max, 0);
        let go = b.action("go");
        b.transition(x, go, y, int(1), int(0))
            .transition(y, go, z, int(1), int(0))
            .transition(z, go, z, int(1), int(0));
        let a = b.build().unwrap();
        assert_eq!(simple_parity_value(&a, x, &forced(&a)).unwrap(), int(1));
        let l = loop_arena(int(0));
        assert_eq!(simple_parity_value(&l, StateId(0), &forced(&l)).unwrap(), int(0));
        let h = gallery::horn();
        let idle = DSStrategy::from_names(&h, Player::Max, &[("w", "idle")]).unwrap();
        let p = Profile::new(idle, first_strategy(&h, Player::Min)).unwrap();
        assert_eq!(simple_parity_value(&h, h.state_by_name("w").unwrap(), &p).unwrap(), int(0));
    }

    #[test]
    fn discounted_examples() {
        let beta = ratio(1, 2);
        let one = loop_arena(int(1));
        assert_eq!(discounted_value(&one, StateId(0), &forced(&one), &beta).unwrap(), int(2));
        let zero = loop_arena(int(0));
        assert_eq!(discounted_value(&zero, StateId(0), &forced(&zero), &beta).unwrap(), int(0));
        let two = cycle_arena(&[1, 0], &[0, 0]);
        assert_eq!(discounted_value(&two, StateId(0), &forced(&two), &beta).unwrap(), ratio(4, 3));
    }

    #[test]
    fn lasso_examples() {
        let o = gallery::overtaking();
        let q0 = o.state_by_name("q0").unwrap();
        let sigma = DSStrategy::from_names(&o, Player::Max, &[("q0", "c1")]).unwrap();
        let p = Profile::new(sigma, first_strategy(&o, Player::Min)).unwrap();
        assert_eq!(lasso_of(&o, q0, &p).unwrap(), Lasso::from_ints(&[], &[0, 1, 1, 0]).unwrap());
        let l = loop_arena(ratio(2, 3));
        assert_eq!(lasso_of(&l, StateId(0), &forced(&l)).unwrap(), Lasso::new(vec![], vec![ratio(2, 3)]).unwrap());
        // a chase x -> y -> y with rewards 5 then 1
        let mut b = ArenaBuilder::new();
        let x = b.state("x", Player::Max);
        let y = b.state("y", Player::Max);
        let go = b.action("go");
        b.transition(x, go, y, int(1), int(5)).transition(y, go, y, int(1), int(1));
        let chase = b.build().unwrap();
        assert_eq!(lasso_of(&chase, x, &forced(&chase)).unwrap(), Lasso::from_ints(&[5], &[1]).unwrap());
        let f = gallery::split_demo();
        assert_eq!(lasso_of(&f, StateId(0), &forced(&f)), Err(OutcomeError::NotDeterministic));
    }

    #[test]
    fn evaluate_all_matches_single_evaluations() {
        let a = gallery::split_demo();
        for pref in [Preference::MeanPayoff, Preference::Parity, Preference::SimpleParity, Preference::Discounted(ratio(2, 3))] {
            for sigma in crate::strategy::ds_enumerate(&a, Player::Max) {
                for tau in crate::strategy::ds_enumerate(&a, Player::Min) {
                    let p = Profile::new(sigma.clone(), tau).unwrap();
                    let all = evaluate_all(&a, &p, &pref).unwrap();
                    for s in a.states() {
                        assert_eq!(all[s.0], evaluate(&a, s, &p, &pref).unwrap());
                    }
                }
            }
        }
    }
}
