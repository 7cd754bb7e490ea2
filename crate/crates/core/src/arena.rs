//! Finite perfect-information stochastic arenas.
//!
//! States and actions are dense indices with a name table. Transitions are
//! kept sorted by `(source, action, target)` so that every `(state, action)`
//! group is a contiguous slice and iteration order is reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl ActionId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// The two players: Max maximises the outcome, Min minimises it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Max,
    Min,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Max => Player::Min,
            Player::Min => Player::Max,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Max => f.write_str("Max"),
            Player::Min => f.write_str("Min"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionKey {
    pub source: StateId,
    pub action: ActionId,
    pub target: StateId,
}

impl TransitionKey {
    pub fn new(source: StateId, action: ActionId, target: StateId) -> Self {
        TransitionKey { source, action, target }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: StateId,
    pub action: ActionId,
    pub target: StateId,
    pub prob: Rational,
    pub reward: Rational,
}

impl Transition {
    pub fn key(&self) -> TransitionKey {
        TransitionKey::new(self.source, self.action, self.target)
    }
}

/// An action available at some state together with the slice of transitions it triggers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Move {
    pub action: ActionId,
    pub transitions: Range<usize>,
}

/// Which player, if any, has a real choice in an arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    MaxControlled,
    MinControlled,
    TwoPlayer,
    NoChoice,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("state '{state}' has no available action")]
    EmptyActionSet { state: String },
    #[error("transitions of ({state}, {action}) carry total probability {}", format_rational(.total))]
    ProbabilityMass {
        state: String,
        action: String,
        total: Rational,
    },
    #[error("transition ({state}, {action}, {target}) has non-positive probability {}", format_rational(.prob))]
    NonPositiveProbability {
        state: String,
        action: String,
        target: String,
        prob: Rational,
    },
    #[error("transition ({state}, {action}, {target}) is listed twice")]
    DuplicateTransition {
        state: String,
        action: String,
        target: String,
    },
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("unknown action '{0}'")]
    UnknownAction(String),
    #[error("state name '{0}' is used twice")]
    DuplicateState(String),
    #[error("action name '{0}' is used twice")]
    DuplicateAction(String),
    #[error("priorities given for {given} of {states} states")]
    PriorityCount { given: usize, states: usize },
    #[error("({state}, {action}, {target}) is not a transition of the arena")]
    NotATransition {
        state: String,
        action: String,
        target: String,
    },
    #[error("subarena keeps only part of the transitions of ({state}, {action})")]
    PartialActionRemoval { state: String, action: String },
    #[error("subarena leaves state '{state}' without an action")]
    DeadState { state: String },
    #[error("action '{action}' is not available at state '{state}'")]
    UnavailableAction { state: String, action: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arena {
    state_names: Vec<String>,
    owners: Vec<Player>,
    priorities: Option<Vec<u32>>,
    action_names: Vec<String>,
    transitions: Vec<Transition>,
    moves: Vec<Vec<Move>>,
}

/// Incremental construction of an [`Arena`]; `build` validates.
#[derive(Debug, Clone, Default)]
pub struct ArenaBuilder {
    state_names: Vec<String>,
    owners: Vec<Player>,
    priorities: Vec<Option<u32>>,
    action_names: Vec<String>,
    transitions: Vec<Transition>,
}

impl ArenaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&mut self, name: impl Into<String>, owner: Player) -> StateId {
        self.state_names.push(name.into());
        self.owners.push(owner);
        self.priorities.push(None);
        StateId(self.state_names.len() - 1)
    }

    pub fn state_with_priority(&mut self, name: impl Into<String>, owner: Player, priority: u32) -> StateId {
        let id = self.state(name, owner);
        self.priorities[id.0] = Some(priority);
        id
    }

    pub fn action(&mut self, name: impl Into<String>) -> ActionId {
        self.action_names.push(name.into());
        ActionId(self.action_names.len() - 1)
    }

    pub fn transition(&mut self, source: StateId, action: ActionId, target: StateId, prob: Rational, reward: Rational) -> &mut Self {
        self.transitions.push(Transition {
            source,
            action,
            target,
            prob,
            reward,
        });
        self
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name).map(StateId)
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.action_names.iter().position(|n| n == name).map(ActionId)
    }

    /// Assembles the arena without checking the probability invariants.
    /// Structural problems (dangling indices, duplicates, name clashes) are still rejected.
    pub fn build_unchecked(self) -> Result<Arena, ArenaError> {
        let mut seen = BTreeSet::new();
        for name in &self.state_names {
            if !seen.insert(name.as_str()) {
                return Err(ArenaError::DuplicateState(name.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for name in &self.action_names {
            if !seen.insert(name.as_str()) {
                return Err(ArenaError::DuplicateAction(name.clone()));
            }
        }
        let given = self.priorities.iter().filter(|p| p.is_some()).count();
        let priorities = match given {
            0 => None,
            g if g == self.state_names.len() => Some(self.priorities.iter().map(|p| p.unwrap_or(0)).collect()),
            g => {
                return Err(ArenaError::PriorityCount {
                    given: g,
                    states: self.state_names.len(),
                })
            }
        };
        for t in &self.transitions {
            for s in [t.source, t.target] {
                if s.0 >= self.state_names.len() {
                    return Err(ArenaError::UnknownState(format!("#{}", s.0)));
                }
            }
            if t.action.0 >= self.action_names.len() {
                return Err(ArenaError::UnknownAction(format!("#{}", t.action.0)));
            }
        }
        Arena::from_parts(self.state_names, self.owners, priorities, self.action_names, self.transitions)
    }

    pub fn build(self) -> Result<Arena, ArenaError> {
        let arena = self.build_unchecked()?;
        arena.validate()?;
        Ok(arena)
    }
}

impl Arena {
    fn from_parts(
        state_names: Vec<String>,
        owners: Vec<Player>,
        priorities: Option<Vec<u32>>,
        action_names: Vec<String>,
        mut transitions: Vec<Transition>,
    ) -> Result<Arena, ArenaError> {
        transitions.sort_by_key(|t| t.key());
        for w in transitions.windows(2) {
            if w[0].key() == w[1].key() {
                return Err(ArenaError::DuplicateTransition {
                    state: state_names[w[0].source.0].clone(),
                    action: action_names[w[0].action.0].clone(),
                    target: state_names[w[0].target.0].clone(),
                });
            }
        }
        let mut moves: Vec<Vec<Move>> = vec![Vec::new(); state_names.len()];
        let mut i = 0;
        while i < transitions.len() {
            let (s, a) = (transitions[i].source, transitions[i].action);
            let start = i;
            while i < transitions.len() && transitions[i].source == s && transitions[i].action == a {
                i += 1;
            }
            moves[s.0].push(Move {
                action: a,
                transitions: start..i,
            });
        }
        Ok(Arena {
            state_names,
            owners,
            priorities,
            action_names,
            transitions,
            moves,
        })
    }

    /// Checks every arena invariant: nonempty action sets, positive
    /// probabilities and unit probability mass per `(state, action)`.
    pub fn validate(&self) -> Result<(), ArenaError> {
        for s in self.states() {
            if self.moves[s.0].is_empty() {
                return Err(ArenaError::EmptyActionSet {
                    state: self.state_name(s).to_string(),
                });
            }
            for mv in &self.moves[s.0] {
                let mut total = Rational::zero();
                for t in &self.transitions[mv.transitions.clone()] {
                    if !t.prob.is_positive() {
                        return Err(ArenaError::NonPositiveProbability {
                            state: self.state_name(t.source).to_string(),
                            action: self.action_name(t.action).to_string(),
                            target: self.state_name(t.target).to_string(),
                            prob: t.prob.clone(),
                        });
                    }
                    total += &t.prob;
                }
                if !total.is_one() {
                    return Err(ArenaError::ProbabilityMass {
                        state: self.state_name(s).to_string(),
                        action: self.action_name(mv.action).to_string(),
                        total,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_actions(&self) -> usize {
        self.action_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + Clone {
        (0..self.state_names.len()).map(StateId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s.0]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.action_names[a.0]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn action_names(&self) -> &[String] {
        &self.action_names
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name).map(StateId)
    }

    pub fn action_by_name(&self, name: &str) -> Option<ActionId> {
        self.action_names.iter().position(|n| n == name).map(ActionId)
    }

    pub fn owner(&self, s: StateId) -> Player {
        self.owners[s.0]
    }

    pub fn priorities(&self) -> Option<&[u32]> {
        self.priorities.as_deref()
    }

    pub fn priority(&self, s: StateId) -> Option<u32> {
        self.priorities.as_ref().map(|p| p[s.0])
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, index: usize) -> &Transition {
        &self.transitions[index]
    }

    /// Index of a transition in [`Arena::transitions`], if present.
    pub fn transition_index(&self, key: TransitionKey) -> Option<usize> {
        self.transitions.binary_search_by_key(&key, |t| t.key()).ok()
    }

    pub fn moves(&self, s: StateId) -> &[Move] {
        &self.moves[s.0]
    }

    pub fn num_available(&self, s: StateId) -> usize {
        self.moves[s.0].len()
    }

    /// Transitions triggered by playing `a` in `s`; empty if `a` is unavailable.
    pub fn outcomes(&self, s: StateId, a: ActionId) -> &[Transition] {
        match self.move_of(s, a) {
            Some(mv) => &self.transitions[mv.transitions.clone()],
            None => &[],
        }
    }

    pub fn move_of(&self, s: StateId, a: ActionId) -> Option<&Move> {
        self.moves[s.0].iter().find(|m| m.action == a)
    }

    pub fn is_available(&self, s: StateId, a: ActionId) -> bool {
        self.move_of(s, a).is_some()
    }

    /// The set A(s) of actions available at `s`, in index order.
    pub fn available_actions(&self, s: StateId) -> Result<Vec<ActionId>, ArenaError> {
        if s.0 >= self.num_states() {
            return Err(ArenaError::UnknownState(format!("#{}", s.0)));
        }
        Ok(self.moves[s.0].iter().map(|m| m.action).collect())
    }

    /// Σ_s (|A(s)| − 1), the induction measure for the recursive solver.
    pub fn size(&self) -> usize {
        self.moves.iter().map(|m| m.len().saturating_sub(1)).sum()
    }

    pub fn control(&self) -> Control {
        let has_choice = |p: Player| self.states().any(|s| self.owner(s) == p && self.num_available(s) >= 2);
        match (has_choice(Player::Max), has_choice(Player::Min)) {
            (false, false) => Control::NoChoice,
            (true, false) => Control::MaxControlled,
            (false, true) => Control::MinControlled,
            (true, true) => Control::TwoPlayer,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        self.transitions.iter().all(|t| t.prob.is_one())
    }

    /// The subarena whose transition set is exactly `keep`.
    pub fn subarena(&self, keep: &BTreeSet<TransitionKey>) -> Result<Arena, ArenaError> {
        for key in keep {
            if key.source.0 >= self.num_states() || key.target.0 >= self.num_states() || key.action.0 >= self.num_actions() || self.transition_index(*key).is_none() {
                return Err(ArenaError::NotATransition {
                    state: self.state_names.get(key.source.0).cloned().unwrap_or_else(|| format!("#{}", key.source.0)),
                    action: self.action_names.get(key.action.0).cloned().unwrap_or_else(|| format!("#{}", key.action.0)),
                    target: self.state_names.get(key.target.0).cloned().unwrap_or_else(|| format!("#{}", key.target.0)),
                });
            }
        }
        for s in self.states() {
            let mut alive = false;
            for mv in &self.moves[s.0] {
                let group = &self.transitions[mv.transitions.clone()];
                let kept = group.iter().filter(|t| keep.contains(&t.key())).count();
                if kept != 0 && kept != group.len() {
                    return Err(ArenaError::PartialActionRemoval {
                        state: self.state_name(s).to_string(),
                        action: self.action_name(mv.action).to_string(),
                    });
                }
                alive |= kept != 0;
            }
            if !alive {
                return Err(ArenaError::DeadState {
                    state: self.state_name(s).to_string(),
                });
            }
        }
        let transitions = self.transitions.iter().filter(|t| keep.contains(&t.key())).cloned().collect();
        Arena::from_parts(
            self.state_names.clone(),
            self.owners.clone(),
            self.priorities.clone(),
            self.action_names.clone(),
            transitions,
        )
    }

    /// Subarena keeping, at each listed state, only the listed action.
    pub fn restrict(&self, choices: &BTreeMap<StateId, ActionId>) -> Result<Arena, ArenaError> {
        for (&s, &a) in choices {
            if s.0 >= self.num_states() {
                return Err(ArenaError::UnknownState(format!("#{}", s.0)));
            }
            if !self.is_available(s, a) {
                return Err(ArenaError::UnavailableAction {
                    state: self.state_name(s).to_string(),
                    action: self.action_names.get(a.0).cloned().unwrap_or_else(|| format!("#{}", a.0)),
                });
            }
        }
        let transitions = self
            .transitions
            .iter()
            .filter(|t| choices.get(&t.source).map_or(true, |&a| a == t.action))
            .cloned()
            .collect();
        Arena::from_parts(
            self.state_names.clone(),
            self.owners.clone(),
            self.priorities.clone(),
            self.action_names.clone(),
            transitions,
        )
    }

    /// Subarena with a single action kept at `s`.
    pub fn restrict_action(&self, s: StateId, a: ActionId) -> Result<Arena, ArenaError> {
        self.restrict(&BTreeMap::from([(s, a)]))
    }

    /// Available-action signature: per state, the sorted list of available actions.
    /// Two subarenas of a common arena are equal iff their signatures are.
    pub fn action_signature(&self) -> Vec<Vec<ActionId>> {
        self.moves.iter().map(|ms| ms.iter().map(|m| m.action).collect()).collect()
    }

    pub fn with_priorities(mut self, priorities: Vec<u32>) -> Result<Arena, ArenaError> {
        if priorities.len() != self.num_states() {
            return Err(ArenaError::PriorityCount {
                given: priorities.len(),
                states: self.num_states(),
            });
        }
        self.priorities = Some(priorities);
        Ok(self)
    }

    pub fn with_owners(mut self, owners: Vec<Player>) -> Arena {
        assert_eq!(owners.len(), self.num_states());
        self.owners = owners;
        self
    }

    /// Rebuilds an arena from already-checked components (used by the split).
    pub(crate) fn assemble(
        state_names: Vec<String>,
        owners: Vec<Player>,
        priorities: Option<Vec<u32>>,
        action_names: Vec<String>,
        transitions: Vec<Transition>,
    ) -> Result<Arena, ArenaError> {
        Arena::from_parts(state_names, owners, priorities, action_names, transitions)
    }
}
