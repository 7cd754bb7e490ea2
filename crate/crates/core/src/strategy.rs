//! Deterministic strategies: stationary maps and finite-memory machines.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arena::{ActionId, Arena, ArenaBuilder, Player, StateId};
use crate::history::History;
use crate::rational::{format_rational, Rational};
use crate::split::SplitResult;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("unknown action '{0}'")]
    UnknownAction(String),
    #[error("state '{state}' is not controlled by {owner}")]
    NotOwned { state: String, owner: Player },
    #[error("no action given for state '{state}'")]
    MissingChoice { state: String },
    #[error("action '{action}' is not available at state '{state}'")]
    UnavailableAction { state: String, action: String },
    #[error("strategy plays '{action}' at '{state}', which the subarena removed")]
    Incompatible { state: String, action: String },
    #[error("memory table does not match the arena ({0})")]
    BadMemory(String),
    #[error("profile expects a {expected} strategy but got one for {got}")]
    WrongOwner { expected: Player, got: Player },
    #[error("'{0}' is not a 'state=action' assignment")]
    Syntax(String),
}

/// A memoryless deterministic strategy: one action per owned state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DSStrategy {
    owner: Player,
    choice: Vec<Option<ActionId>>,
}

impl DSStrategy {
    pub fn new(arena: &Arena, owner: Player, choice: Vec<Option<ActionId>>) -> Result<Self, StrategyError> {
        if choice.len() != arena.num_states() {
            return Err(StrategyError::BadMemory(format!(
                "{} choices for {} states",
                choice.len(),
                arena.num_states()
            )));
        }
        for s in arena.states() {
            match (arena.owner(s) == owner, choice[s.0]) {
                (true, None) => {
                    return Err(StrategyError::MissingChoice {
                        state: arena.state_name(s).to_string(),
                    })
                }
                (true, Some(a)) if !arena.is_available(s, a) => {
                    return Err(StrategyError::UnavailableAction {
                        state: arena.state_name(s).to_string(),
                        action: name_of_action(arena, a),
                    })
                }
                (false, Some(_)) => {
                    return Err(StrategyError::NotOwned {
                        state: arena.state_name(s).to_string(),
                        owner,
                    })
                }
                _ => {}
            }
        }
        Ok(DSStrategy { owner, choice })
    }

    pub fn from_fn(arena: &Arena, owner: Player, f: impl Fn(StateId) -> ActionId) -> Result<Self, StrategyError> {
        let choice = arena.states().map(|s| (arena.owner(s) == owner).then(|| f(s))).collect();
        Self::new(arena, owner, choice)
    }

    /// Builds a strategy from `(state, action)` name pairs. Owned states with a
    /// single available action may be omitted.
    pub fn from_names(arena: &Arena, owner: Player, pairs: &[(&str, &str)]) -> Result<Self, StrategyError> {
        let mut choice: Vec<Option<ActionId>> = vec![None; arena.num_states()];
        for &(s, a) in pairs {
            let sid = arena.state_by_name(s).ok_or_else(|| StrategyError::UnknownState(s.to_string()))?;
            let aid = arena.action_by_name(a).ok_or_else(|| StrategyError::UnknownAction(a.to_string()))?;
            choice[sid.0] = Some(aid);
        }
        for s in arena.states() {
            if arena.owner(s) == owner && choice[s.0].is_none() && arena.num_available(s) == 1 {
                choice[s.0] = Some(arena.moves(s)[0].action);
            }
        }
        Self::new(arena, owner, choice)
    }

    /// Parses `"s=a, t=b"`; see [`DSStrategy::from_names`].
    pub fn parse(arena: &Arena, owner: Player, text: &str) -> Result<Self, StrategyError> {
        let mut pairs = Vec::new();
        for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (s, a) = item.split_once('=').ok_or_else(|| StrategyError::Syntax(item.to_string()))?;
            pairs.push((s.trim(), a.trim()));
        }
        Self::from_names(arena, owner, &pairs)
    }

    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn action(&self, s: StateId) -> Option<ActionId> {
        self.choice.get(s.0).copied().flatten()
    }

    pub fn choices(&self) -> &[Option<ActionId>] {
        &self.choice
    }

    /// One `state -> action` line per owned state, in state order.
    pub fn dump(&self, arena: &Arena) -> String {
        let mut out = String::new();
        for s in arena.states() {
            if let Some(a) = self.action(s) {
                let _ = writeln!(out, "{} -> {}", arena.state_name(s), arena.action_name(a));
            }
        }
        out
    }

    /// Compact `s=a,t=b` form, accepted by [`DSStrategy::parse`].
    pub fn compact(&self, arena: &Arena) -> String {
        arena
            .states()
            .filter_map(|s| self.action(s).map(|a| format!("{}={}", arena.state_name(s), arena.action_name(a))))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// The same choices viewed as a one-state memory machine.
    pub fn to_finite_memory(&self, arena: &Arena) -> FMStrategy {
        FMStrategy {
            owner: self.owner,
            initial: 0,
            update: vec![vec![0; arena.transitions().len()]],
            choice: vec![self.choice.clone()],
        }
    }
}

/// A deterministic strategy driven by a finite memory updated on every transition.
///
/// At history `s₁a₁…sₙ` the memory is `update(…update(m₀, (s₁,a₁,s₂))…)` and the
/// action is `choice(memory, sₙ)`. Transitions are referenced by their index in
/// [`Arena::transitions`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FMStrategy {
    owner: Player,
    initial: usize,
    update: Vec<Vec<usize>>,
    choice: Vec<Vec<Option<ActionId>>>,
}

impl FMStrategy {
    pub fn new(
        arena: &Arena,
        owner: Player,
        initial: usize,
        update: Vec<Vec<usize>>,
        choice: Vec<Vec<Option<ActionId>>>,
    ) -> Result<Self, StrategyError> {
        let size = update.len();
        if size == 0 || choice.len() != size || initial >= size {
            return Err(StrategyError::BadMemory("memory tables have inconsistent sizes".into()));
        }
        for row in &update {
            if row.len() != arena.transitions().len() || row.iter().any(|&m| m >= size) {
                return Err(StrategyError::BadMemory("update table does not cover the transitions".into()));
            }
        }
        for row in &choice {
            DSStrategy::new(arena, owner, row.clone())?;
        }
        Ok(FMStrategy {
            owner,
            initial,
            update,
            choice,
        })
    }

    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn memory_size(&self) -> usize {
        self.update.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn action(&self, memory: usize, s: StateId) -> Option<ActionId> {
        self.choice[memory][s.0]
    }

    pub fn next(&self, memory: usize, transition: usize) -> usize {
        self.update[memory][transition]
    }

    /// Memory reached after reading the history.
    pub fn memory_after(&self, arena: &Arena, h: &History) -> usize {
        h.steps().fold(self.initial, |m, key| {
            let t = arena.transition_index(key).expect("history belongs to the arena");
            self.update[m][t]
        })
    }

    /// Memory successor along transition `t`, or `None` when the strategy
    /// itself would never take `t` from memory `m`.
    fn consistent_next(&self, arena: &Arena, m: usize, t: usize) -> Option<usize> {
        let tr = arena.transition(t);
        let plays = arena.owner(tr.source) != self.owner || self.choice[m][tr.source.0] == Some(tr.action);
        plays.then_some(self.update[m][t])
    }

    /// Canonical form with respect to the histories consistent with the
    /// strategy: keeps the memories reachable along such histories, merges
    /// memories with identical future behaviour (Moore partition refinement)
    /// and numbers the result in breadth-first order. Memory never changes on
    /// transitions the strategy excludes. Strategies that agree on every
    /// consistent history minimise to equal values.
    pub fn minimized(&self, arena: &Arena) -> FMStrategy {
        let nt = arena.transitions().len();
        let succ = |m: usize| (0..nt).filter_map(move |t| self.consistent_next(arena, m, t));
        let reach = bfs_order(self.initial, self.update.len(), succ);
        let mut block: Vec<usize> = vec![usize::MAX; self.update.len()];
        {
            let mut ids: HashMap<&Vec<Option<ActionId>>, usize> = HashMap::new();
            for &m in &reach {
                let n = ids.len();
                block[m] = *ids.entry(&self.choice[m]).or_insert(n);
            }
        }
        let mut count = reach.iter().map(|&m| block[m]).max().map_or(0, |b| b + 1);
        loop {
            let mut ids: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
            let mut next = block.clone();
            for &m in &reach {
                let sig = (block[m], (0..nt).map(|t| self.consistent_next(arena, m, t).map(|n| block[n])).collect::<Vec<_>>());
                let n = ids.len();
                next[m] = *ids.entry(sig).or_insert(n);
            }
            let new_count = ids.len();
            block = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut rep = vec![usize::MAX; count];
        for &m in &reach {
            if rep[block[m]] == usize::MAX {
                rep[block[m]] = m;
            }
        }
        let quotient: Vec<Vec<Option<usize>>> = rep
            .iter()
            .map(|&m| (0..nt).map(|t| self.consistent_next(arena, m, t).map(|n| block[n])).collect())
            .collect();
        let start = block[self.initial];
        let order = bfs_order(start, count, |b| quotient[b].iter().flatten().copied());
        let mut rename = vec![0; count];
        for (i, &b) in order.iter().enumerate() {
            rename[b] = i;
        }
        FMStrategy {
            owner: self.owner,
            initial: 0,
            update: order
                .iter()
                .map(|&b| quotient[b].iter().map(|t| rename[t.unwrap_or(b)]).collect())
                .collect(),
            choice: order.iter().map(|&b| self.choice[rep[b]].clone()).collect(),
        }
    }

    pub fn dump(&self, arena: &Arena) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "memory {} (initial m{})", self.memory_size(), self.initial);
        for m in 0..self.memory_size() {
            for s in arena.states() {
                if let Some(a) = self.choice[m][s.0] {
                    let _ = writeln!(out, "m{m}: {} -> {}", arena.state_name(s), arena.action_name(a));
                }
            }
        }
        for m in 0..self.memory_size() {
            for (i, t) in arena.transitions().iter().enumerate() {
                let n = self.update[m][i];
                if n != m {
                    let _ = writeln!(
                        out,
                        "m{m} --({},{},{})--> m{n}",
                        arena.state_name(t.source),
                        arena.action_name(t.action),
                        arena.state_name(t.target)
                    );
                }
            }
        }
        out
    }
}

fn bfs_order<I: Iterator<Item = usize>>(start: usize, n: usize, succ: impl Fn(usize) -> I) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut order = vec![start];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        for t in succ(m) {
            if !seen[t] {
                seen[t] = true;
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    order
}

fn name_of_action(arena: &Arena, a: ActionId) -> String {
    arena.action_names().get(a.0).cloned().unwrap_or_else(|| format!("#{}", a.0))
}

/// Either kind of deterministic strategy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Strategy {
    Stationary(DSStrategy),
    FiniteMemory(FMStrategy),
}

impl From<DSStrategy> for Strategy {
    fn from(s: DSStrategy) -> Self {
        Strategy::Stationary(s)
    }
}

impl From<FMStrategy> for Strategy {
    fn from(s: FMStrategy) -> Self {
        Strategy::FiniteMemory(s)
    }
}

impl Strategy {
    pub fn owner(&self) -> Player {
        match self {
            Strategy::Stationary(s) => s.owner(),
            Strategy::FiniteMemory(s) => s.owner(),
        }
    }

    pub fn memory_size(&self) -> usize {
        match self {
            Strategy::Stationary(_) => 1,
            Strategy::FiniteMemory(s) => s.memory_size(),
        }
    }

    pub fn initial_memory(&self) -> usize {
        match self {
            Strategy::Stationary(_) => 0,
            Strategy::FiniteMemory(s) => s.initial(),
        }
    }

    pub fn action(&self, memory: usize, s: StateId) -> Option<ActionId> {
        match self {
            Strategy::Stationary(d) => d.action(s),
            Strategy::FiniteMemory(f) => f.action(memory, s),
        }
    }

    pub fn next_memory(&self, memory: usize, transition: usize) -> usize {
        match self {
            Strategy::Stationary(_) => 0,
            Strategy::FiniteMemory(f) => f.next(memory, transition),
        }
    }

    pub fn as_stationary(&self) -> Option<&DSStrategy> {
        match self {
            Strategy::Stationary(d) => Some(d),
            Strategy::FiniteMemory(_) => None,
        }
    }

    pub fn to_finite_memory(&self, arena: &Arena) -> FMStrategy {
        match self {
            Strategy::Stationary(d) => d.to_finite_memory(arena),
            Strategy::FiniteMemory(f) => f.clone(),
        }
    }

    /// Minimal machine (see [`FMStrategy::minimized`]); collapses to a
    /// stationary strategy when one memory state suffices.
    pub fn simplified(&self, arena: &Arena) -> Strategy {
        match self {
            Strategy::Stationary(d) => Strategy::Stationary(d.clone()),
            Strategy::FiniteMemory(f) => {
                let m = f.minimized(arena);
                if m.memory_size() == 1 {
                    Strategy::Stationary(DSStrategy {
                        owner: m.owner,
                        choice: m.choice[0].clone(),
                    })
                } else {
                    Strategy::FiniteMemory(m)
                }
            }
        }
    }

    /// Same behaviour on every history consistent with the strategies.
    pub fn equivalent(&self, other: &Strategy, arena: &Arena) -> bool {
        self.owner() == other.owner() && self.to_finite_memory(arena).minimized(arena) == other.to_finite_memory(arena).minimized(arena)
    }

    /// Action prescribed after a history ending in an owned state.
    pub fn play(&self, arena: &Arena, h: &History) -> Option<ActionId> {
        match self {
            Strategy::Stationary(d) => d.action(h.last()),
            Strategy::FiniteMemory(f) => f.action(f.memory_after(arena, h), h.last()),
        }
    }

    /// Whether every move the owner made along `h` is the one prescribed.
    pub fn is_consistent(&self, arena: &Arena, h: &History) -> bool {
        let mut m = self.initial_memory();
        for key in h.steps() {
            if arena.owner(key.source) == self.owner() && self.action(m, key.source) != Some(key.action) {
                return false;
            }
            match arena.transition_index(key) {
                Some(t) => m = self.next_memory(m, t),
                None => return false,
            }
        }
        true
    }

    pub fn dump(&self, arena: &Arena) -> String {
        match self {
            Strategy::Stationary(d) => d.dump(arena),
            Strategy::FiniteMemory(f) => f.dump(arena),
        }
    }
}

/// A pair of strategies, one per player, on a common arena.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    pub max: Strategy,
    pub min: Strategy,
}

impl Profile {
    pub fn new(max: impl Into<Strategy>, min: impl Into<Strategy>) -> Result<Self, StrategyError> {
        let (max, min) = (max.into(), min.into());
        if max.owner() != Player::Max {
            return Err(StrategyError::WrongOwner {
                expected: Player::Max,
                got: max.owner(),
            });
        }
        if min.owner() != Player::Min {
            return Err(StrategyError::WrongOwner {
                expected: Player::Min,
                got: min.owner(),
            });
        }
        Ok(Profile { max, min })
    }

    pub fn stationary(max: &DSStrategy, min: &DSStrategy) -> Result<Self, StrategyError> {
        Profile::new(max.clone(), min.clone())
    }

    pub fn of(&self, p: Player) -> &Strategy {
        match p {
            Player::Max => &self.max,
            Player::Min => &self.min,
        }
    }

    pub fn is_stationary(&self) -> bool {
        self.max.as_stationary().is_some() && self.min.as_stationary().is_some()
    }
}

/// Lexicographic enumeration of every stationary strategy of one player.
///
/// Owned states are the digits in increasing index order; the first owned state
/// is the most significant digit and actions are tried in increasing index order.
#[derive(Debug, Clone)]
pub struct DsEnumeration {
    owner: Player,
    num_states: usize,
    digits: Vec<(StateId, Vec<ActionId>)>,
    counter: Vec<usize>,
    done: bool,
}

impl DsEnumeration {
    pub fn new(arena: &Arena, owner: Player) -> Self {
        let digits = arena
            .states()
            .filter(|&s| arena.owner(s) == owner)
            .map(|s| (s, arena.moves(s).iter().map(|m| m.action).collect::<Vec<_>>()))
            .collect::<Vec<_>>();
        DsEnumeration {
            owner,
            num_states: arena.num_states(),
            counter: vec![0; digits.len()],
            digits,
            done: false,
        }
    }

    /// Number of strategies (saturating).
    pub fn total(&self) -> u128 {
        self.digits.iter().fold(1u128, |acc, (_, acts)| acc.saturating_mul(acts.len() as u128))
    }

    /// The `index`-th strategy in enumeration order.
    pub fn nth_strategy(&self, mut index: u128) -> Option<DSStrategy> {
        if index >= self.total() {
            return None;
        }
        let mut choice = vec![None; self.num_states];
        for (s, acts) in self.digits.iter().rev() {
            let base = acts.len() as u128;
            choice[s.0] = Some(acts[(index % base) as usize]);
            index /= base;
        }
        Some(DSStrategy { owner: self.owner, choice })
    }

    fn current(&self) -> DSStrategy {
        let mut choice = vec![None; self.num_states];
        for ((s, acts), &c) in self.digits.iter().zip(&self.counter) {
            choice[s.0] = Some(acts[c]);
        }
        DSStrategy { owner: self.owner, choice }
    }
}

impl Iterator for DsEnumeration {
    type Item = DSStrategy;

    fn next(&mut self) -> Option<DSStrategy> {
        if self.done {
            return None;
        }
        let out = self.current();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.counter[i] += 1;
            if self.counter[i] < self.digits[i].1.len() {
                break;
            }
            self.counter[i] = 0;
        }
        Some(out)
    }
}

pub fn ds_enumerate(arena: &Arena, owner: Player) -> DsEnumeration {
    DsEnumeration::new(arena, owner)
}

/// The first stationary strategy in enumeration order; the only one when the
/// player has no choice.
pub fn first_strategy(arena: &Arena, owner: Player) -> DSStrategy {
    DsEnumeration::new(arena, owner).current()
}

/// Restriction of a strategy of `arena` to the subarena `sub` (same state set).
pub fn restrict_to_subarena(strategy: &Strategy, arena: &Arena, sub: &Arena) -> Result<Strategy, StrategyError> {
    let incompatible = |s: StateId, a: ActionId| StrategyError::Incompatible {
        state: arena.state_name(s).to_string(),
        action: arena.action_name(a).to_string(),
    };
    match strategy {
        Strategy::Stationary(d) => {
            for s in sub.states() {
                if let Some(a) = d.action(s) {
                    if !sub.is_available(s, a) {
                        return Err(incompatible(s, a));
                    }
                }
            }
            Ok(Strategy::Stationary(d.clone()))
        }
        Strategy::FiniteMemory(f) => {
            let origin: Vec<usize> = sub
                .transitions()
                .iter()
                .map(|t| arena.transition_index(t.key()).ok_or_else(|| StrategyError::BadMemory("not a subarena".into())))
                .collect::<Result<_, _>>()?;
            let reach = bfs_order(f.initial, f.memory_size(), |m| origin.iter().map(move |&i| f.update[m][i]));
            for &m in &reach {
                for s in sub.states() {
                    if let Some(a) = f.action(m, s) {
                        if !sub.is_available(s, a) {
                            return Err(incompatible(s, a));
                        }
                    }
                }
            }
            // memories only reachable through removed transitions keep arbitrary (still available) choices
            let fallback = first_strategy(sub, f.owner);
            let reachable: std::collections::HashSet<usize> = reach.into_iter().collect();
            let choice = (0..f.memory_size())
                .map(|m| if reachable.contains(&m) { f.choice[m].clone() } else { fallback.choice.clone() })
                .collect();
            let update = f.update.iter().map(|row| origin.iter().map(|&i| row[i]).collect()).collect();
            Ok(Strategy::FiniteMemory(FMStrategy {
                owner: f.owner,
                initial: f.initial,
                update,
                choice,
            }))
        }
    }
}

/// Extends a strategy of the subarena `sub` back to `arena`. Memory is kept
/// unchanged on transitions that only exist in `arena`.
pub fn embed_from_subarena(strategy: &Strategy, sub: &Arena, arena: &Arena) -> Strategy {
    match strategy {
        Strategy::Stationary(d) => Strategy::Stationary(d.clone()),
        Strategy::FiniteMemory(f) => {
            let update = (0..f.memory_size())
                .map(|m| {
                    arena
                        .transitions()
                        .iter()
                        .map(|t| sub.transition_index(t.key()).map_or(m, |j| f.update[m][j]))
                        .collect()
                })
                .collect();
            Strategy::FiniteMemory(FMStrategy {
                owner: f.owner,
                initial: f.initial,
                update,
                choice: f.choice.clone(),
            })
        }
    }
}

/// Extends a stationary strategy of the copy subarena `Â_e` to the whole split:
/// every copy `s_x` plays what `s_e` plays, and the separation state plays `e`
/// when it belongs to the strategy's owner.
pub fn extend_from_copy(sr: &SplitResult, sigma_e: &DSStrategy, e: ActionId) -> Result<DSStrategy, StrategyError> {
    let split = sr.arena();
    let omega = sr.separation_hat();
    if !sr.separation_actions().contains(&e) {
        return Err(StrategyError::UnavailableAction {
            state: split.state_name(omega).to_string(),
            action: name_of_action(split, e),
        });
    }
    let copy = sr.copy_subarena(e).map_err(|err| StrategyError::BadMemory(err.to_string()))?;
    let owner = sigma_e.owner();
    let mut choice = vec![None; split.num_states()];
    for s_hat in split.states() {
        if split.owner(s_hat) != owner {
            continue;
        }
        if s_hat == omega {
            choice[s_hat.0] = Some(e);
            continue;
        }
        let in_copy = sr.copy_of(sr.project_state(s_hat), e);
        let local = copy.local_state(in_copy).expect("copy e contains every s_e");
        choice[s_hat.0] = Some(sigma_e.action(local).ok_or_else(|| StrategyError::MissingChoice {
            state: split.state_name(in_copy).to_string(),
        })?);
    }
    DSStrategy::new(split, owner, choice)
}

/// Reassembles one stationary strategy of the split from per-copy strategies
/// given on the original state space: `s_x` plays `per_copy[x](s)`.
pub fn assemble_from_copies(
    sr: &SplitResult,
    owner: Player,
    per_copy: &BTreeMap<ActionId, DSStrategy>,
) -> Result<DSStrategy, StrategyError> {
    let split = sr.arena();
    let mut choice = vec![None; split.num_states()];
    for s_hat in split.states() {
        if split.owner(s_hat) != owner {
            continue;
        }
        let s = sr.project_state(s_hat);
        let strat = match sr.copy_index(s_hat) {
            Some(x) => per_copy.get(&x),
            // the separation state keeps the choice of the first copy
            None => per_copy.values().next(),
        }
        .ok_or_else(|| StrategyError::MissingChoice {
            state: split.state_name(s_hat).to_string(),
        })?;
        choice[s_hat.0] = strat.action(s);
    }
    DSStrategy::new(split, owner, choice)
}

/// A stationary strategy that draws its action at random. No evaluator exists
/// for it; [`RandomizedStationary::freeze`] turns the arena into one where the
/// owner's states carry the mixed distribution as a single action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomizedStationary {
    owner: Player,
    weights: Vec<Vec<(ActionId, Rational)>>,
}

impl RandomizedStationary {
    /// `weights[s]` lists the action probabilities at each owned state and must be empty elsewhere.
    pub fn new(arena: &Arena, owner: Player, weights: Vec<Vec<(ActionId, Rational)>>) -> Result<Self, StrategyError> {
        if weights.len() != arena.num_states() {
            return Err(StrategyError::BadMemory("one distribution per state is required".into()));
        }
        for s in arena.states() {
            let name = || arena.state_name(s).to_string();
            let w = &weights[s.0];
            if arena.owner(s) != owner {
                if !w.is_empty() {
                    return Err(StrategyError::NotOwned { state: name(), owner });
                }
                continue;
            }
            if w.is_empty() {
                return Err(StrategyError::MissingChoice { state: name() });
            }
            let mut total = Rational::zero();
            for (a, p) in w {
                if !arena.is_available(s, *a) || !p.is_positive() {
                    return Err(StrategyError::UnavailableAction {
                        state: name(),
                        action: arena.action_name(*a).to_string(),
                    });
                }
                total += p;
            }
            if !total.is_one() {
                return Err(StrategyError::BadMemory(format!("weights at '{}' sum to {}", name(), format_rational(&total))));
            }
        }
        Ok(RandomizedStationary { owner, weights })
    }

    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn weights(&self, s: StateId) -> &[(ActionId, Rational)] {
        &self.weights[s.0]
    }

    /// The arena in which every owned state has the single action `mix`
    /// (primed until fresh) whose transitions average the mixed actions.
    pub fn freeze(&self, arena: &Arena) -> Arena {
        let mut b = ArenaBuilder::new();
        for s in arena.states() {
            match arena.priority(s) {
                Some(p) => b.state_with_priority(arena.state_name(s), arena.owner(s), p),
                None => b.state(arena.state_name(s), arena.owner(s)),
            };
        }
        for name in arena.action_names() {
            b.action(name.clone());
        }
        let mut mix_name = String::from("mix");
        while arena.action_by_name(&mix_name).is_some() {
            mix_name.push('\'');
        }
        let mix = b.action(mix_name);
        for s in arena.states() {
            if arena.owner(s) != self.owner {
                for t in arena.transitions().iter().filter(|t| t.source == s) {
                    b.transition(s, t.action, t.target, t.prob.clone(), t.reward.clone());
                }
                continue;
            }
            // Same target with different rewards cannot be merged into one transition,
            // so rewards are averaged by probability mass.
            let mut mass: BTreeMap<StateId, (Rational, Rational)> = BTreeMap::new();
            for (a, w) in &self.weights[s.0] {
                for t in arena.outcomes(s, *a) {
                    let e = mass.entry(t.target).or_insert_with(|| (Rational::zero(), Rational::zero()));
                    let p = w * &t.prob;
                    e.1 += &p * &t.reward;
                    e.0 += p;
                }
            }
            for (target, (p, weighted)) in mass {
                let r = &weighted / &p;
                b.transition(s, mix, target, p, r);
            }
        }
        b.build().expect("mixing preserves validity")
    }
}
