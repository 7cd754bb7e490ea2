//! Small reference arenas with known, exactly reproducible facts.

use std::fmt;

use crate::arena::{Arena, ArenaBuilder, Player, TransitionKey};
use crate::outcome::{evaluate, lasso_of};
use crate::preference::{overtaking_compare, Comparison, OutcomeStat, Preference};
use crate::rational::{format_rational, int, ratio, Rational};
use crate::solver::{brute_force_saddle, one_player_solve, two_player_solve, SolveError, SolverConfig};
use crate::split::split;
use crate::strategy::{ds_enumerate, first_strategy, FMStrategy, Profile};

/// Two states `s` (Max) and `ω` (Min), actions `a` and `b`.
///
/// `ω` plays `a` to reach `s` or stay with probability 1/2 each, or `b` to reach
/// `s` surely; `s` loops on `a` (reward 1) or moves to `ω` on `b`. All other rewards
/// are 0. Priorities: `s` ↦ 2, `ω` ↦ 1.
pub fn split_demo() -> Arena {
    let mut b = ArenaBuilder::new();
    let s = b.state_with_priority("s", Player::Max, 2);
    let w = b.state_with_priority("ω", Player::Min, 1);
    let a = b.action("a");
    let bb = b.action("b");
    b.transition(w, a, s, ratio(1, 2), int(0))
        .transition(w, a, w, ratio(1, 2), int(0))
        .transition(w, bb, s, int(1), int(0))
        .transition(s, a, s, int(1), int(1))
        .transition(s, bb, w, int(1), int(0));
    b.build().expect("split demo arena is valid")
}

/// A single state with a single self-loop.
pub fn one_loop() -> Arena {
    let mut b = ArenaBuilder::new();
    let q = b.state_with_priority("q", Player::Max, 0);
    let stay = b.action("stay");
    b.transition(q, stay, q, int(1), int(0));
    b.build().expect("one-loop arena is valid")
}

/// Simple parity counterexample to stationary optimality in stochastic one-player games.
///
/// All states belong to Max, only `w`
/// has a choice. `try` moves to `g` (reward 1) or `b` (reward 2) with probability
/// 1/2 each, `idle` loops on `w` with reward 0, and `g`, `b` return to `w` with
/// reward 0. Priorities `w` ↦ 1, `g` ↦ 2, `b` ↦ 3, so the supremum of visited
/// priorities is even exactly when reward 1 was seen and reward 2 never was.
pub fn horn() -> Arena {
    let mut b = ArenaBuilder::new();
    let w = b.state_with_priority("w", Player::Max, 1);
    let g = b.state_with_priority("g", Player::Max, 2);
    let bad = b.state_with_priority("b", Player::Max, 3);
    let try_ = b.action("try");
    let idle = b.action("idle");
    let back = b.action("back");
    b.transition(w, try_, g, ratio(1, 2), int(1))
        .transition(w, try_, bad, ratio(1, 2), int(2))
        .transition(w, idle, w, int(1), int(0))
        .transition(g, back, w, int(1), int(0))
        .transition(bad, back, w, int(1), int(0));
    b.build().expect("horn arena is valid")
}

/// Two deterministic 4-cycles through `q0`, labelled 0,1,1,0 (action `c1`)
/// and 1,0,0,1 (action `c2`). Every state belongs to Max.
pub fn overtaking() -> Arena {
    let mut b = ArenaBuilder::new();
    let q0 = b.state("q0", Player::Max);
    let c1 = b.action("c1");
    let c2 = b.action("c2");
    let next = b.action("next");
    for (first, labels, prefix) in [(c1, [0, 1, 1, 0], "p"), (c2, [1, 0, 0, 1], "r")] {
        let cycle: Vec<_> = (1..=3).map(|i| b.state(format!("{prefix}{i}"), Player::Max)).collect();
        b.transition(q0, first, cycle[0], int(1), int(labels[0]));
        b.transition(cycle[0], next, cycle[1], int(1), int(labels[1]));
        b.transition(cycle[1], next, cycle[2], int(1), int(labels[2]));
        b.transition(cycle[2], next, q0, int(1), int(labels[3]));
    }
    b.build().expect("overtaking arena is valid")
}

/// Remembers whether `try` already led to `g`: tries until then, idles afterwards.
pub fn horn_memory_strategy(horn: &Arena) -> FMStrategy {
    let w = horn.state_by_name("w").expect("horn has w");
    let g = horn.state_by_name("g").expect("horn has g");
    let try_ = horn.action_by_name("try").expect("horn has try");
    let idle = horn.action_by_name("idle").expect("horn has idle");
    let back = horn.action_by_name("back").expect("horn has back");
    let reached_g = horn
        .transition_index(TransitionKey::new(w, try_, g))
        .expect("horn has w -try-> g");
    let nt = horn.transitions().len();
    let update = vec![(0..nt).map(|t| usize::from(t == reached_g)).collect(), vec![1; nt]];
    let row = |at_w| {
        horn.states()
            .map(|s| Some(if s == w { at_w } else { back }))
            .collect::<Vec<_>>()
    };
    FMStrategy::new(horn, Player::Max, 0, update, vec![row(try_), row(idle)]).expect("valid memory strategy")
}

/// A documented property of a gallery arena.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fact {
    /// Splitting on `state` gives these state names and this many transitions.
    SplitShape {
        state: &'static str,
        states: Vec<&'static str>,
        transitions: usize,
    },
    /// Both solvers find these values, and Max plays `max_choices`.
    Values {
        payoff: Preference,
        values: Vec<(&'static str, Rational)>,
        max_choices: Vec<(&'static str, &'static str)>,
    },
    /// No stationary strategy is optimal, and a finite-memory one reaches `memory` from `state`
    /// where the stationary optimum is `stationary`.
    MemoryBeatsStationary {
        payoff: Preference,
        state: &'static str,
        stationary: Rational,
        memory: Rational,
    },
    /// No stationary pair is a saddle point.
    NoSaddle { payoff: Preference },
    /// From `state`, the plays of the stationary strategies have pairwise incomparable rewards.
    IncomparablePlays { state: &'static str },
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::SplitShape { state, states, transitions } => {
                write!(f, "split on {state} has states {{{}}} and {transitions} transitions", states.join(", "))
            }
            Fact::Values { payoff, values, .. } => {
                let vs: Vec<String> = values.iter().map(|(s, v)| format!("{s}={}", format_rational(v))).collect();
                write!(f, "{payoff} values {}", vs.join(", "))
            }
            Fact::MemoryBeatsStationary {
                payoff,
                state,
                stationary,
                memory,
            } => write!(
                f,
                "{payoff}: best stationary value from {state} is {}, a finite-memory strategy gets {}",
                format_rational(stationary),
                format_rational(memory)
            ),
            Fact::NoSaddle { payoff } => write!(f, "{payoff}: no stationary saddle point"),
            Fact::IncomparablePlays { state } => write!(f, "plays from {state} are pairwise incomparable under overtaking"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub arena: Arena,
    /// Payoff used when the entry is solved without an explicit choice.
    pub payoff: Preference,
    pub facts: Vec<Fact>,
}

pub fn entries() -> Vec<GalleryEntry> {
    vec![
        GalleryEntry {
            name: "split-demo",
            summary: "two-state arena split on its Min state",
            arena: split_demo(),
            payoff: Preference::MeanPayoff,
            facts: vec![
                Fact::SplitShape {
                    state: "ω",
                    states: vec!["ω", "s_a", "s_b"],
                    transitions: 7,
                },
                Fact::Values {
                    payoff: Preference::MeanPayoff,
                    values: vec![("s", int(1)), ("ω", int(1))],
                    max_choices: vec![("s", "a")],
                },
                Fact::Values {
                    payoff: Preference::Discounted(ratio(1, 2)),
                    values: vec![("s", int(2)), ("ω", ratio(2, 3))],
                    max_choices: vec![("s", "a")],
                },
            ],
        },
        GalleryEntry {
            name: "one-loop",
            summary: "a single self-loop",
            arena: one_loop(),
            payoff: Preference::MeanPayoff,
            facts: vec![
                Fact::SplitShape {
                    state: "q",
                    states: vec!["q"],
                    transitions: 1,
                },
                Fact::Values {
                    payoff: Preference::MeanPayoff,
                    values: vec![("q", int(0))],
                    max_choices: vec![],
                },
            ],
        },
        GalleryEntry {
            name: "horn",
            summary: "simple parity where memory beats every stationary strategy",
            arena: horn(),
            payoff: Preference::SimpleParity,
            facts: vec![Fact::MemoryBeatsStationary {
                payoff: Preference::SimpleParity,
                state: "w",
                stationary: int(0),
                memory: ratio(1, 2),
            }],
        },
        GalleryEntry {
            name: "overtaking",
            summary: "two cycles with equal averages that overtake each other forever",
            arena: overtaking(),
            payoff: Preference::Overtaking,
            facts: vec![
                Fact::NoSaddle {
                    payoff: Preference::Overtaking,
                },
                Fact::IncomparablePlays { state: "q0" },
            ],
        },
    ]
}

pub fn entry(name: &str) -> Option<GalleryEntry> {
    entries().into_iter().find(|e| e.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactCheck {
    pub fact: String,
    pub passed: bool,
    pub detail: String,
}

fn check_fact(a: &Arena, fact: &Fact, config: &SolverConfig) -> Result<String, String> {
    let id = |name: &str| a.state_by_name(name).ok_or_else(|| format!("no state '{name}'"));
    match fact {
        Fact::SplitShape { state, states, transitions } => {
            let sr = split(a, id(state)?).map_err(|e| e.to_string())?;
            sr.check_separation().map_err(|e| e.to_string())?;
            let names: Vec<&str> = sr.arena().state_names().iter().map(String::as_str).collect();
            if names != *states || sr.arena().transitions().len() != *transitions {
                return Err(format!("got states {names:?} and {} transitions", sr.arena().transitions().len()));
            }
            Ok("exact match".into())
        }
        Fact::Values {
            payoff,
            values,
            max_choices,
        } => {
            let rec = two_player_solve(a, payoff, config).result.map_err(|e| e.to_string())?;
            let bf = brute_force_saddle(a, payoff, config).map_err(|e| e.to_string())?;
            if rec.values != bf.values {
                return Err("recursive and brute-force values differ".into());
            }
            for (s, v) in values {
                let got = &rec.values[id(s)?.0];
                if got != &OutcomeStat::Value(v.clone()) {
                    return Err(format!("{s}: expected {}, got {got}", format_rational(v)));
                }
            }
            for (s, x) in max_choices {
                let got = rec.max_strategy.action(id(s)?).map(|x| a.action_name(x));
                if got != Some(*x) {
                    return Err(format!("{s}: expected action {x}, got {got:?}"));
                }
            }
            Ok("recursive solver and brute force agree".into())
        }
        Fact::MemoryBeatsStationary {
            payoff,
            state,
            stationary,
            memory,
        } => {
            let s = id(state)?;
            let probe = one_player_solve(a, Player::Max, payoff, config);
            if !matches!(probe, Err(SolveError::NoUniformOptimum { .. })) {
                return Err(format!("expected no stationary optimum, got {probe:?}"));
            }
            let plain = SolverConfig {
                memory_probe: false,
                ..config.clone()
            };
            let best = one_player_solve(a, Player::Max, payoff, &plain).map_err(|e| e.to_string())?;
            if best.values[s.0] != OutcomeStat::Value(stationary.clone()) {
                return Err(format!("best stationary value is {}", best.values[s.0]));
            }
            let fm = horn_memory_strategy(a);
            let p = Profile::new(fm, first_strategy(a, Player::Min)).map_err(|e| e.to_string())?;
            let got = evaluate(a, s, &p, payoff).map_err(|e| e.to_string())?;
            if got != OutcomeStat::Value(memory.clone()) {
                return Err(format!("memory strategy gets {got}"));
            }
            Ok(format!("stationary {}, memory {}", format_rational(stationary), format_rational(memory)))
        }
        Fact::NoSaddle { payoff } => match brute_force_saddle(a, payoff, config) {
            Err(SolveError::NoSaddle) => Ok("brute force finds no saddle".into()),
            other => Err(format!("expected NoSaddle, got {other:?}")),
        },
        Fact::IncomparablePlays { state } => {
            let s = id(state)?;
            let plays: Vec<_> = ds_enumerate(a, Player::Max)
                .map(|sigma| {
                    let p = Profile::stationary(&sigma, &first_strategy(a, Player::Min)).expect("owners match");
                    lasso_of(a, s, &p).map_err(|e| e.to_string())
                })
                .collect::<Result<_, _>>()?;
            for (i, l1) in plays.iter().enumerate() {
                for l2 in &plays[i + 1..] {
                    if overtaking_compare(l1, l2) != Comparison::Incomparable {
                        return Err(format!("{l1} and {l2} are comparable"));
                    }
                }
            }
            let shown: Vec<String> = plays.iter().map(ToString::to_string).collect();
            Ok(shown.join(" vs "))
        }
    }
}

/// Checks every fact of an entry.
pub fn check_entry(e: &GalleryEntry, config: &SolverConfig) -> Vec<FactCheck> {
    e.facts
        .iter()
        .map(|f| {
            let (passed, detail) = match check_fact(&e.arena, f, config) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            FactCheck {
                fact: f.to_string(),
                passed,
                detail,
            }
        })
        .collect()
}
