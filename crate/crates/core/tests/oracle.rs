use num_traits::ToPrimitive;
use rand::Rng;

use splitsolve_core::arena::{Arena, Player, StateId};
use splitsolve_core::outcome::{discounted_value, evaluate, mean_payoff_value};
use splitsolve_core::random::{random_arena_seeded, rng_from_seed, ArenaShape};
use splitsolve_core::rational::{ratio, Rational};
use splitsolve_core::solver::{all_saddles, brute_force_saddle, two_player_solve, verify_saddle, SolverConfig};
use splitsolve_core::strategy::{ds_enumerate, DSStrategy, Profile};
use splitsolve_core::{OutcomeStat, Preference};

fn f64_of(o: &OutcomeStat) -> f64 {
    o.value().and_then(ToPrimitive::to_f64).expect("numeric outcome")
}

/// Discounted game values by iterating the Shapley operator in floating point.
fn shapley_values(a: &Arena, beta: f64, rounds: usize) -> Vec<f64> {
    let mut v = vec![0.0; a.num_states()];
    for _ in 0..rounds {
        v = a
            .states()
            .map(|s| {
                let vals = a.moves(s).iter().map(|m| {
                    a.transitions()[m.transitions.clone()]
                        .iter()
                        .map(|t| t.prob.to_f64().unwrap() * (t.reward.to_f64().unwrap() + beta * v[t.target.0]))
                        .sum::<f64>()
                });
                match a.owner(s) {
                    Player::Max => vals.fold(f64::NEG_INFINITY, f64::max),
                    Player::Min => vals.fold(f64::INFINITY, f64::min),
                }
            })
            .collect();
    }
    v
}

#[test]
fn discounted_values_match_value_iteration() {
    let shape = ArenaShape::default();
    let cfg = SolverConfig::default();
    let pref = Preference::Discounted(ratio(1, 2));
    for seed in 0..150 {
        let a = random_arena_seeded(seed, &shape);
        let sol = two_player_solve(&a, &pref, &cfg).result.unwrap();
        let vi = shapley_values(&a, 0.5, 200);
        for s in a.states() {
            let exact = f64_of(&sol.values[s.0]);
            assert!((exact - vi[s.0]).abs() < 1e-9, "seed {seed} state {s:?}: {exact} vs {}", vi[s.0]);
        }
    }
}

#[test]
fn returned_pairs_are_saddles_and_saddles_exchange() {
    let shape = ArenaShape::default();
    let cfg = SolverConfig::default();
    for seed in 0..60 {
        let a = random_arena_seeded(seed, &shape);
        for pref in [Preference::MeanPayoff, Preference::Parity, Preference::Discounted(ratio(1, 2))] {
            let sol = two_player_solve(&a, &pref, &cfg).result.unwrap();
            assert_eq!(verify_saddle(&a, &pref, &sol.max_strategy, &sol.min_strategy, &cfg).unwrap(), None);
            let saddles = all_saddles(&a, &pref, &cfg).unwrap();
            assert!(!saddles.is_empty());
            assert_eq!(saddles[0], brute_force_saddle(&a, &pref, &cfg).unwrap());
            for s1 in &saddles {
                assert_eq!(s1.values, sol.values, "seed {seed} {pref}: saddle values differ");
                for s2 in saddles.iter().take(8) {
                    let crossed = verify_saddle(&a, &pref, &s1.max_strategy, &s2.min_strategy, &cfg).unwrap();
                    assert_eq!(crossed, None, "seed {seed} {pref}: crossed pair is not a saddle");
                }
            }
        }
    }
}

/// The mean payoff is the Abel limit `(1-β) v_β` as `β → 1`; discounted values
/// come from a direct linear solve without any recurrence analysis.
#[test]
fn mean_payoff_is_abel_limit_of_discounted() {
    let shape = ArenaShape::default();
    let beta = Rational::from_integer(1.into()) - ratio(1, 1_000_000_000);
    let one_minus = ratio(1, 1_000_000_000);
    for seed in 0..40 {
        let a = random_arena_seeded(seed, &shape);
        let sigma = ds_enumerate(&a, Player::Max).last().unwrap();
        let tau = ds_enumerate(&a, Player::Min).next().unwrap();
        let p = Profile::stationary(&sigma, &tau).unwrap();
        for s in a.states() {
            let g = mean_payoff_value(&a, s, &p).unwrap();
            let abel = &one_minus * discounted_value(&a, s, &p, &beta).unwrap();
            let diff = (g - abel).to_f64().unwrap().abs();
            assert!(diff < 1e-4, "seed {seed}: {diff}");
        }
    }
}

fn simulate(a: &Arena, s0: StateId, sigma: &DSStrategy, tau: &DSStrategy, steps: usize, rng: &mut impl Rng) -> Vec<StateId> {
    let mut s = s0;
    let mut path = vec![s];
    for _ in 0..steps {
        let strat = if a.owner(s) == Player::Max { sigma } else { tau };
        let act = strat.action(s).unwrap();
        let mut u: f64 = rng.gen();
        let outs = a.outcomes(s, act);
        let mut next = outs.last().unwrap().target;
        for t in outs {
            let p = t.prob.to_f64().unwrap();
            if u < p {
                next = t.target;
                break;
            }
            u -= p;
        }
        s = next;
        path.push(s);
    }
    path
}

#[test]
fn parity_values_agree_with_simulation() {
    let shape = ArenaShape::default();
    let mut rng = rng_from_seed(42);
    let (runs, steps) = (1500, 1500);
    for seed in 0..12 {
        let a = random_arena_seeded(seed, &shape);
        let prio = a.priorities().unwrap().to_vec();
        let sigma = ds_enumerate(&a, Player::Max).next().unwrap();
        let tau = ds_enumerate(&a, Player::Min).last().unwrap();
        let p = Profile::stationary(&sigma, &tau).unwrap();
        let s0 = StateId(0);
        let (mut par, mut simple) = (0usize, 0usize);
        for _ in 0..runs {
            let path = simulate(&a, s0, &sigma, &tau, steps, &mut rng);
            let tail_max = path[steps / 2..].iter().map(|s| prio[s.0]).max().unwrap();
            let all_max = path.iter().map(|s| prio[s.0]).max().unwrap();
            par += usize::from(tail_max % 2 == 0);
            simple += usize::from(all_max % 2 == 0);
        }
        let exact_par = f64_of(&evaluate(&a, s0, &p, &Preference::Parity).unwrap());
        let exact_simple = f64_of(&evaluate(&a, s0, &p, &Preference::SimpleParity).unwrap());
        assert!((par as f64 / runs as f64 - exact_par).abs() < 0.06, "seed {seed}: parity {exact_par}");
        assert!((simple as f64 / runs as f64 - exact_simple).abs() < 0.06, "seed {seed}: simple parity {exact_simple}");
    }
}
