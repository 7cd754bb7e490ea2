//! Seeded generators for small arenas and ultimately periodic words.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arena::{Arena, ArenaBuilder, Player};
use crate::lasso::Lasso;
use crate::rational::{int, ratio};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArenaShape {
    pub min_states: usize,
    pub max_states: usize,
    /// Actions per state are drawn from `1..=max_actions`.
    pub max_actions: usize,
    /// Largest denominator of a transition probability.
    pub max_denominator: u32,
    /// Largest number of successors of one action.
    pub max_successors: usize,
    /// Rewards are integers in this closed range.
    pub rewards: (i64, i64),
    pub max_priority: u32,
}

impl Default for ArenaShape {
    fn default() -> Self {
        ArenaShape {
            min_states: 1,
            max_states: 5,
            max_actions: 3,
            max_denominator: 4,
            max_successors: 3,
            rewards: (-2, 3),
            max_priority: 3,
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Splits `d` into `k` positive parts uniformly among compositions.
fn composition(rng: &mut impl Rng, d: u32, k: usize) -> Vec<u32> {
    let mut cuts: Vec<u32> = (1..d).collect::<Vec<_>>();
    cuts.shuffle(rng);
    let mut cuts: Vec<u32> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(d)) {
        parts.push(c - prev);
        prev = c;
    }
    parts
}

/// A random arena with named states `s0, s1, …`, actions `a, b, c, …`, random
/// owners and priorities, and exact rational probabilities.
pub fn random_arena(rng: &mut impl Rng, shape: &ArenaShape) -> Arena {
    let n = rng.gen_range(shape.min_states.max(1)..=shape.max_states.max(shape.min_states.max(1)));
    let mut b = ArenaBuilder::new();
    let states: Vec<_> = (0..n)
        .map(|i| {
            let owner = if rng.gen_bool(0.5) { Player::Max } else { Player::Min };
            let prio = rng.gen_range(0..=shape.max_priority);
            b.state_with_priority(format!("s{i}"), owner, prio)
        })
        .collect();
    let actions: Vec<_> = (0..shape.max_actions.max(1))
        .map(|i| b.action(((b'a' + (i % 26) as u8) as char).to_string()))
        .collect();
    for &s in &states {
        let k = rng.gen_range(1..=actions.len());
        let mut avail = actions.clone();
        avail.shuffle(rng);
        avail.truncate(k);
        avail.sort();
        for a in avail {
            let j = rng.gen_range(1..=shape.max_successors.min(n).max(1));
            let d = rng.gen_range(j as u32..=shape.max_denominator.max(j as u32));
            let parts = composition(rng, d, j);
            let mut targets = states.clone();
            targets.shuffle(rng);
            for (t, p) in targets.into_iter().zip(parts) {
                let r = rng.gen_range(shape.rewards.0..=shape.rewards.1);
                b.transition(s, a, t, ratio(p as i64, d as i64), int(r));
            }
        }
    }
    b.build().expect("generated arenas are valid")
}

pub fn random_arena_seeded(seed: u64, shape: &ArenaShape) -> Arena {
    random_arena(&mut rng_from_seed(seed), shape)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoShape {
    pub max_prefix: usize,
    pub max_cycle: usize,
    /// Letters are integers in this closed range.
    pub letters: (i64, i64),
}

impl Default for LassoShape {
    fn default() -> Self {
        LassoShape {
            max_prefix: 4,
            max_cycle: 4,
            letters: (0, 3),
        }
    }
}

pub fn random_lasso(rng: &mut impl Rng, shape: &LassoShape) -> Lasso {
    let plen = rng.gen_range(0..=shape.max_prefix);
    let clen = rng.gen_range(1..=shape.max_cycle.max(1));
    let (lo, hi) = shape.letters;
    let prefix = (0..plen).map(|_| int(rng.gen_range(lo..=hi))).collect();
    let cycle = (0..clen).map(|_| int(rng.gen_range(lo..=hi))).collect();
    Lasso::new(prefix, cycle).expect("cycle is non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Control;

    #[test]
    fn arenas_respect_shape() {
        let shape = ArenaShape::default();
        let mut rng = rng_from_seed(7);
        let mut two_player = 0;
        for _ in 0..300 {
            let a = random_arena(&mut rng, &shape);
            assert!(a.num_states() <= 5);
            a.validate().unwrap();
            for s in a.states() {
                assert!((1..=3).contains(&a.num_available(s)));
            }
            for t in a.transitions() {
                assert!(t.prob.denom() <= &4.into());
            }
            if a.control() == Control::TwoPlayer {
                two_player += 1;
            }
        }
        assert!(two_player > 50, "{two_player}");
    }

    #[test]
    fn seeds_are_reproducible() {
        let shape = ArenaShape::default();
        assert_eq!(random_arena_seeded(3, &shape), random_arena_seeded(3, &shape));
        let mut r1 = rng_from_seed(1);
        let mut r2 = rng_from_seed(1);
        let ls = LassoShape::default();
        assert_eq!(random_lasso(&mut r1, &ls), random_lasso(&mut r2, &ls));
    }

    #[test]
    fn compositions_sum_up() {
        let mut rng = rng_from_seed(0);
        for d in 1..=6u32 {
            for k in 1..=d as usize {
                let parts = composition(&mut rng, d, k);
                assert_eq!(parts.len(), k);
                assert_eq!(parts.iter().sum::<u32>(), d);
                assert!(parts.iter().all(|&p| p > 0));
            }
        }
    }
}
