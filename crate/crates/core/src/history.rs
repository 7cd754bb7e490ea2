//! Finite histories `s₁ a₁ s₂ … sₙ`.

use std::fmt;

use thiserror::Error;

use crate::arena::{ActionId, Arena, StateId, TransitionKey};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct History {
    states: Vec<StateId>,
    actions: Vec<ActionId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HistoryError {
    #[error("history has {states} states but {actions} actions")]
    NotAlternating { states: usize, actions: usize },
    #[error("step {step} of the history is not a transition of the arena")]
    NotATransition { step: usize },
    #[error("history mentions an unknown state")]
    UnknownState,
}

impl History {
    pub fn new(start: StateId) -> Self {
        History {
            states: vec![start],
            actions: Vec::new(),
        }
    }

    /// Builds a history from its two interleaved sequences.
    pub fn from_parts(states: Vec<StateId>, actions: Vec<ActionId>) -> Result<Self, HistoryError> {
        if states.is_empty() || states.len() != actions.len() + 1 {
            return Err(HistoryError::NotAlternating {
                states: states.len(),
                actions: actions.len(),
            });
        }
        Ok(History { states, actions })
    }

    /// Parses a comma separated list of alternating state and action names.
    pub fn parse(arena: &Arena, text: &str) -> Option<History> {
        let tokens: Vec<&str> = text.split(',').map(str::trim).collect();
        if tokens.len() % 2 == 0 {
            return None;
        }
        let mut states = Vec::new();
        let mut actions = Vec::new();
        for (i, tok) in tokens.iter().enumerate() {
            if i % 2 == 0 {
                states.push(arena.state_by_name(tok)?);
            } else {
                actions.push(arena.action_by_name(tok)?);
            }
        }
        History::from_parts(states, actions).ok()
    }

    pub fn push(&mut self, action: ActionId, state: StateId) {
        self.actions.push(action);
        self.states.push(state);
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    pub fn first(&self) -> StateId {
        self.states[0]
    }

    pub fn last(&self) -> StateId {
        *self.states.last().expect("histories are nonempty")
    }

    /// Number of transitions.
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn steps(&self) -> impl Iterator<Item = TransitionKey> + '_ {
        self.actions
            .iter()
            .enumerate()
            .map(move |(i, &a)| TransitionKey::new(self.states[i], a, self.states[i + 1]))
    }

    /// Checks that every step is a transition of `arena`.
    pub fn check(&self, arena: &Arena) -> Result<(), HistoryError> {
        if self.states.iter().any(|s| s.0 >= arena.num_states()) {
            return Err(HistoryError::UnknownState);
        }
        for (step, key) in self.steps().enumerate() {
            if key.action.0 >= arena.num_actions() || arena.transition_index(key).is_none() {
                return Err(HistoryError::NotATransition { step });
            }
        }
        Ok(())
    }

    pub fn display<'a>(&'a self, arena: &'a Arena) -> impl fmt::Display + 'a {
        HistoryDisplay { history: self, arena }
    }
}

struct HistoryDisplay<'a> {
    history: &'a History,
    arena: &'a Arena,
}

impl fmt::Display for HistoryDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.history;
        write!(f, "{}", self.arena.state_name(h.states[0]))?;
        for (i, a) in h.actions.iter().enumerate() {
            write!(f, ",{},{}", self.arena.action_name(*a), self.arena.state_name(h.states[i + 1]))?;
        }
        Ok(())
    }
}

/// Every history of `arena` with exactly `len` transitions starting at `start`.
pub fn enumerate_histories(arena: &Arena, start: StateId, len: usize) -> Vec<History> {
    let mut frontier = vec![History::new(start)];
    for _ in 0..len {
        let mut next = Vec::new();
        for h in &frontier {
            for mv in arena.moves(h.last()) {
                for t in &arena.transitions()[mv.transitions.clone()] {
                    let mut h2 = h.clone();
                    h2.push(t.action, t.target);
                    next.push(h2);
                }
            }
        }
        frontier = next;
    }
    frontier
}
