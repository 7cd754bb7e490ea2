//! Splitting an arena on a separation state ω.
//!
//! The split `Â` keeps ω once and duplicates every other state `s` into copies
//! `s_x`, one per action `x ∈ A(ω)`. The copy index records the last action
//! played in ω, so a play only moves from one family of copies to another by
//! passing through ω.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::arena::{ActionId, Arena, ArenaError, StateId, Transition, TransitionKey};
use crate::history::{History, HistoryError};
use crate::strategy::{DSStrategy, FMStrategy, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("action '{action}' is not available at separation state '{state}'")]
    UnavailableAction { state: String, action: String },
    #[error("invalid history: {0}")]
    InvalidHistory(#[from] HistoryError),
    #[error("separation violated along {}", .path.join(" -> "))]
    SeparationViolated { path: Vec<String> },
    #[error("strategy belongs to another arena")]
    ForeignStrategy,
    #[error(transparent)]
    Arena(#[from] ArenaError),
}

/// The split of an arena on a separation state, with its projection and copy index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    arena: Arena,
    original: Arena,
    separation: StateId,
    separation_hat: StateId,
    separation_actions: Vec<ActionId>,
    projection: Vec<StateId>,
    copy_index: Vec<Option<ActionId>>,
    /// `copies[k][s]` is `s_x` for the `k`-th action `x` of ω (ω itself maps to ω̂).
    copies: Vec<Vec<StateId>>,
    /// Index in the original arena of the transition each split transition projects to.
    transition_origin: Vec<Option<usize>>,
}

/// Splits `arena` on `omega`.
pub fn split(arena: &Arena, omega: StateId) -> Result<SplitResult, SplitError> {
    if omega.0 >= arena.num_states() {
        return Err(SplitError::UnknownState(format!("#{}", omega.0)));
    }
    let xs = arena.available_actions(omega)?;
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut names = vec![arena.state_name(omega).to_string()];
    taken.insert(names[0].clone());
    let mut owners = vec![arena.owner(omega)];
    let mut projection = vec![omega];
    let mut copy_index = vec![None];
    let mut copies = vec![vec![StateId(0); arena.num_states()]; xs.len()];
    for (k, &x) in xs.iter().enumerate() {
        for s in arena.states() {
            if s == omega {
                continue;
            }
            let mut name = format!("{}_{}", arena.state_name(s), arena.action_name(x));
            while taken.contains(&name) {
                name.push('\'');
            }
            taken.insert(name.clone());
            copies[k][s.0] = StateId(names.len());
            names.push(name);
            owners.push(arena.owner(s));
            projection.push(s);
            copy_index.push(Some(x));
        }
    }
    let priorities = arena.priorities().map(|p| projection.iter().map(|s| p[s.0]).collect());
    let copy_pos = |x: ActionId| xs.iter().position(|&y| y == x).expect("x is available at ω");
    let hat = |s: StateId, k: usize| if s == omega { StateId(0) } else { copies[k][s.0] };
    let mut transitions = Vec::new();
    for t in arena.transitions() {
        let ks: Vec<usize> = if t.source == omega { vec![copy_pos(t.action)] } else { (0..xs.len()).collect() };
        for k in ks {
            transitions.push(Transition {
                source: hat(t.source, k),
                action: t.action,
                target: hat(t.target, k),
                prob: t.prob.clone(),
                reward: t.reward.clone(),
            });
        }
    }
    let split_arena = Arena::assemble(names, owners, priorities, arena.action_names().to_vec(), transitions)?;
    let transition_origin = split_arena
        .transitions()
        .iter()
        .map(|t| arena.transition_index(TransitionKey::new(projection[t.source.0], t.action, projection[t.target.0])))
        .collect();
    Ok(SplitResult {
        arena: split_arena,
        original: arena.clone(),
        separation: omega,
        separation_hat: StateId(0),
        separation_actions: xs,
        projection,
        copy_index,
        copies,
        transition_origin,
    })
}

impl SplitResult {
    /// Wraps a hand-built arena as a split of `original` on `omega`. No shape
    /// checks are made beyond table sizes; use [`SplitResult::check_separation`].
    pub fn from_parts(
        original: &Arena,
        omega: StateId,
        arena: Arena,
        projection: Vec<StateId>,
        copy_index: Vec<Option<ActionId>>,
    ) -> Result<SplitResult, SplitError> {
        if projection.len() != arena.num_states() || copy_index.len() != arena.num_states() {
            return Err(SplitError::UnknownState("projection tables do not match the arena".into()));
        }
        let separation_hat = StateId(
            (0..arena.num_states())
                .find(|&i| projection[i] == omega && copy_index[i].is_none())
                .ok_or_else(|| SplitError::UnknownState(original.state_name(omega).to_string()))?,
        );
        let xs = original.available_actions(omega)?;
        let mut copies = vec![vec![separation_hat; original.num_states()]; xs.len()];
        for (i, (&s, x)) in projection.iter().zip(&copy_index).enumerate() {
            if let Some(x) = x {
                if let Some(k) = xs.iter().position(|y| y == x) {
                    copies[k][s.0] = StateId(i);
                }
            }
        }
        let transition_origin = arena
            .transitions()
            .iter()
            .map(|t| original.transition_index(TransitionKey::new(projection[t.source.0], t.action, projection[t.target.0])))
            .collect();
        Ok(SplitResult {
            arena,
            original: original.clone(),
            separation: omega,
            separation_hat,
            separation_actions: xs,
            projection,
            copy_index,
            copies,
            transition_origin,
        })
    }

    /// The split arena `Â`.
    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn original(&self) -> &Arena {
        &self.original
    }

    /// ω in the original arena.
    pub fn separation(&self) -> StateId {
        self.separation
    }

    /// ω in the split arena.
    pub fn separation_hat(&self) -> StateId {
        self.separation_hat
    }

    /// `A(ω)`, in index order.
    pub fn separation_actions(&self) -> &[ActionId] {
        &self.separation_actions
    }

    /// π(ŝ).
    pub fn project_state(&self, s_hat: StateId) -> StateId {
        self.projection[s_hat.0]
    }

    pub fn projection(&self) -> &[StateId] {
        &self.projection
    }

    /// The `x` of `s_x`; `None` for ω.
    pub fn copy_index(&self, s_hat: StateId) -> Option<ActionId> {
        self.copy_index[s_hat.0]
    }

    fn copy_position(&self, x: ActionId) -> Option<usize> {
        self.separation_actions.iter().position(|&y| y == x)
    }

    /// `s_x`; ω is its own copy for every `x`.
    pub fn copy_of(&self, s: StateId, x: ActionId) -> StateId {
        if s == self.separation {
            return self.separation_hat;
        }
        let k = self.copy_position(x).expect("x is available at ω");
        self.copies[k][s.0]
    }

    /// `Ŝ_x`, in original state order.
    pub fn copy_states(&self, x: ActionId) -> Vec<StateId> {
        self.original.states().filter(|&s| s != self.separation).map(|s| self.copy_of(s, x)).collect()
    }

    /// Original transition index of a split transition.
    pub fn transition_origin(&self, split_transition: usize) -> Option<usize> {
        self.transition_origin[split_transition]
    }

    fn check_x(&self, x: ActionId) -> Result<(), SplitError> {
        if self.copy_position(x).is_none() {
            return Err(SplitError::UnavailableAction {
                state: self.original.state_name(self.separation).to_string(),
                action: self.original.action_names().get(x.0).cloned().unwrap_or_else(|| format!("#{}", x.0)),
            });
        }
        Ok(())
    }

    /// π applied state by state.
    pub fn project_history(&self, h: &History) -> Result<History, SplitError> {
        h.check(&self.arena)?;
        let states = h.states().iter().map(|&s| self.project_state(s)).collect();
        Ok(History::from_parts(states, h.actions().to_vec())?)
    }

    /// φ_x: the unique history of `Â` projecting onto `h` whose first state is `s_x`.
    pub fn lift_history(&self, x: ActionId, h: &History) -> Result<History, SplitError> {
        self.check_x(x)?;
        h.check(&self.original)?;
        let mut copy = x;
        let mut states = vec![self.copy_of(h.first(), copy)];
        for key in h.steps() {
            if key.source == self.separation {
                copy = key.action;
            }
            states.push(self.copy_of(key.target, copy));
        }
        Ok(History::from_parts(states, h.actions().to_vec())?)
    }

    /// Π(σ) = σ ∘ π. Stationary strategies stay stationary; finite-memory ones
    /// keep their memory and read projected transitions.
    pub fn lift_strategy(&self, sigma: &Strategy) -> Result<Strategy, SplitError> {
        match sigma {
            Strategy::Stationary(d) => {
                let choice = self.arena.states().map(|s| d.action(self.project_state(s))).collect();
                Ok(DSStrategy::new(&self.arena, d.owner(), choice).map_err(|_| SplitError::ForeignStrategy)?.into())
            }
            Strategy::FiniteMemory(f) => {
                let n = f.memory_size();
                let origin: Vec<usize> = self
                    .transition_origin
                    .iter()
                    .map(|o| o.ok_or(SplitError::ForeignStrategy))
                    .collect::<Result<_, _>>()?;
                let update = (0..n).map(|m| origin.iter().map(|&i| f.next(m, i)).collect()).collect();
                let choice = (0..n)
                    .map(|m| self.arena.states().map(|s| f.action(m, self.project_state(s))).collect())
                    .collect();
                Ok(FMStrategy::new(&self.arena, f.owner(), f.initial(), update, choice)
                    .map_err(|_| SplitError::ForeignStrategy)?
                    .into())
            }
        }
    }

    /// Φ_x(σ̂) = σ̂ ∘ φ_x, as a machine whose memory pairs the last action
    /// played in ω (initially `x`) with the memory of σ̂. The result is minimised,
    /// so it is stationary whenever the projection does not need memory.
    pub fn project_strategy(&self, x: ActionId, sigma_hat: &Strategy) -> Result<Strategy, SplitError> {
        self.check_x(x)?;
        let orig = &self.original;
        let k_count = self.separation_actions.len();
        let m_count = sigma_hat.memory_size();
        let node = |k: usize, m: usize| k * m_count + m;
        let mut update = vec![vec![0; orig.transitions().len()]; k_count * m_count];
        let mut choice = vec![vec![None; orig.num_states()]; k_count * m_count];
        for (k, &c) in self.separation_actions.iter().enumerate() {
            for m in 0..m_count {
                for s in orig.states() {
                    choice[node(k, m)][s.0] = sigma_hat.action(m, self.copy_of(s, c));
                }
                for (i, t) in orig.transitions().iter().enumerate() {
                    let next_c = if t.source == self.separation { t.action } else { c };
                    let key = TransitionKey::new(self.copy_of(t.source, c), t.action, self.copy_of(t.target, next_c));
                    let j = self.arena.transition_index(key).ok_or(SplitError::ForeignStrategy)?;
                    let next_k = self.copy_position(next_c).expect("actions at ω are copies");
                    update[node(k, m)][i] = node(next_k, sigma_hat.next_memory(m, j));
                }
            }
        }
        let initial = node(self.copy_position(x).expect("checked"), sigma_hat.initial_memory());
        let fm = FMStrategy::new(orig, sigma_hat.owner(), initial, update, choice).map_err(|_| SplitError::ForeignStrategy)?;
        Ok(Strategy::FiniteMemory(fm).simplified(orig))
    }

    /// Verifies by graph search that no path leads from one family of copies
    /// to another without visiting ω.
    pub fn check_separation(&self) -> Result<(), SplitError> {
        let a = &self.arena;
        let n = a.num_states();
        for start in a.states() {
            let Some(x) = self.copy_index(start) else { continue };
            let mut parent: Vec<Option<StateId>> = vec![None; n];
            let mut seen = vec![false; n];
            seen[start.0] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for t in a.transitions().iter().filter(|t| t.source == u) {
                    let v = t.target;
                    if v == self.separation_hat || seen[v.0] {
                        continue;
                    }
                    seen[v.0] = true;
                    parent[v.0] = Some(u);
                    if self.copy_index(v) != Some(x) {
                        let mut path = vec![v];
                        let mut cur = v;
                        while let Some(p) = parent[cur.0] {
                            path.push(p);
                            cur = p;
                        }
                        path.reverse();
                        return Err(SplitError::SeparationViolated {
                            path: path.iter().map(|&s| a.state_name(s).to_string()).collect(),
                        });
                    }
                    queue.push_back(v);
                }
            }
        }
        Ok(())
    }

    /// The subarena `Â_x`: ω limited to `x` together with the copies `Ŝ_x`.
    /// Its states are ω followed by `Ŝ_x` in original order.
    pub fn copy_subarena(&self, x: ActionId) -> Result<CopySubarena, SplitError> {
        self.check_x(x)?;
        let mut to_split = vec![self.separation_hat];
        to_split.extend(self.copy_states(x));
        let mut from_split = vec![None; self.arena.num_states()];
        for (i, &s) in to_split.iter().enumerate() {
            from_split[s.0] = Some(StateId(i));
        }
        let transitions = self
            .arena
            .transitions()
            .iter()
            .filter(|t| t.source != self.separation_hat || t.action == x)
            .filter_map(|t| {
                let source = from_split[t.source.0]?;
                let target = from_split[t.target.0]?;
                Some(Transition {
                    source,
                    action: t.action,
                    target,
                    prob: t.prob.clone(),
                    reward: t.reward.clone(),
                })
            })
            .collect();
        let names = to_split.iter().map(|&s| self.arena.state_name(s).to_string()).collect();
        let owners = to_split.iter().map(|&s| self.arena.owner(s)).collect();
        let priorities = self.arena.priorities().map(|p| to_split.iter().map(|s| p[s.0]).collect());
        let arena = Arena::assemble(names, owners, priorities, self.arena.action_names().to_vec(), transitions)?;
        arena.validate()?;
        Ok(CopySubarena { arena, to_split, from_split })
    }

    /// `Â` with only `x` kept at ω; a genuine subarena of `Â` on the same states.
    pub fn restrict_separation(&self, x: ActionId) -> Result<Arena, SplitError> {
        self.check_x(x)?;
        Ok(self.arena.restrict_action(self.separation_hat, x)?)
    }
}

/// The copy `Â_x` with its own dense state indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopySubarena {
    arena: Arena,
    to_split: Vec<StateId>,
    from_split: Vec<Option<StateId>>,
}

impl CopySubarena {
    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    /// The split state behind a local state.
    pub fn split_state(&self, local: StateId) -> StateId {
        self.to_split[local.0]
    }

    /// The local state of a split state, if it belongs to this copy.
    pub fn local_state(&self, split_state: StateId) -> Option<StateId> {
        self.from_split.get(split_state.0).copied().flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{ArenaBuilder, Player};
    use crate::gallery;
    use crate::history::enumerate_histories;
    use crate::rational::{format_rational, int};
    use crate::strategy::ds_enumerate;

    fn swapped_demo() -> Arena {
        gallery::split_demo().with_owners(vec![Player::Max, Player::Max])
    }

    fn listing(a: &Arena) -> Vec<String> {
        a.transitions()
            .iter()
            .map(|t| {
                format!(
                    "({},{},{}) {}",
                    a.state_name(t.source),
                    a.action_name(t.action),
                    a.state_name(t.target),
                    format_rational(&t.prob)
                )
            })
            .collect()
    }

    #[test]
    fn demo_split_matches_the_right_hand_arena() {
        let a = gallery::split_demo();
        let sr = split(&a, a.state_by_name("ω").unwrap()).unwrap();
        let s = sr.arena();
        assert_eq!(s.state_names(), ["ω", "s_a", "s_b"]);
        let mut got = listing(s);
        got.sort();
        let mut want = vec![
            "(ω,a,s_a) 1/2",
            "(ω,a,ω) 1/2",
            "(ω,b,s_b) 1/1",
            "(s_a,a,s_a) 1/1",
            "(s_a,b,ω) 1/1",
            "(s_b,a,s_b) 1/1",
            "(s_b,b,ω) 1/1",
        ];
        want.sort();
        assert_eq!(got, want);
        assert!(s.validate().is_ok());
        assert!(sr.check_separation().is_ok());
        assert_eq!(s.owner(StateId(1)), Player::Max);
        assert_eq!(s.priorities(), Some(&[1, 2, 2][..]));
    }

    #[test]
    fn single_copy_splits_are_isomorphic() {
        let l = gallery::one_loop();
        let sr = split(&l, StateId(0)).unwrap();
        assert_eq!(sr.arena(), &l);
        let a = swapped_demo();
        let w = a.state_by_name("ω").unwrap();
        let b = a.action_by_name("b").unwrap();
        let one = a.restrict_action(w, b).unwrap();
        let sr = split(&one, w).unwrap();
        assert_eq!(sr.arena().num_states(), 2);
        assert_eq!(sr.arena().transitions().len(), one.transitions().len());
        assert!(sr.check_separation().is_ok());
    }

    #[test]
    fn unknown_state_is_rejected() {
        assert!(matches!(split(&gallery::one_loop(), StateId(3)), Err(SplitError::UnknownState(_))));
    }

    #[test]
    fn projection_examples() {
        let a = gallery::split_demo();
        let sr = split(&a, a.state_by_name("ω").unwrap()).unwrap();
        let h = History::parse(sr.arena(), "s_a,a,s_a,b,ω").unwrap();
        assert_eq!(sr.project_history(&h).unwrap().display(&a).to_string(), "s,a,s,b,ω");
        let h = History::parse(sr.arena(), "s_b").unwrap();
        assert_eq!(sr.project_history(&h).unwrap().display(&a).to_string(), "s");
        let h = History::parse(sr.arena(), "ω,a,ω").unwrap();
        assert_eq!(sr.project_history(&h).unwrap().display(&a).to_string(), "ω,a,ω");
        let bad = History::parse(sr.arena(), "s_a,a,s_b").unwrap();
        assert!(matches!(sr.project_history(&bad), Err(SplitError::InvalidHistory(_))));
    }

    /// The two-state arena with the labels of `s` swapped: `a` leaves to ω, `b` loops.
    fn swapped() -> Arena {
        let mut b = ArenaBuilder::new();
        let s = b.state("s", Player::Max);
        let w = b.state("ω", Player::Min);
        let a = b.action("a");
        let bb = b.action("b");
        b.transition(w, a, s, crate::rational::ratio(1, 2), int(0))
            .transition(w, a, w, crate::rational::ratio(1, 2), int(0))
            .transition(w, bb, s, int(1), int(0))
            .transition(s, a, w, int(1), int(0))
            .transition(s, bb, s, int(1), int(1));
        b.build().unwrap()
    }

    #[test]
    fn lifting_example() {
        let a = swapped();
        let sr = split(&a, a.state_by_name("ω").unwrap()).unwrap();
        let x = a.action_by_name("a").unwrap();
        let h = History::parse(&a, "s,a,ω,b,s,b,s,b,s").unwrap();
        let lifted = sr.lift_history(x, &h).unwrap();
        assert_eq!(lifted.display(sr.arena()).to_string(), "s_a,a,ω,b,s_b,b,s_b,b,s_b");
        // the same word is not a history of the unswapped arena
        let demo = gallery::split_demo();
        let sr2 = split(&demo, demo.state_by_name("ω").unwrap()).unwrap();
        let h2 = History::parse(&demo, "s,a,ω,b,s,b,s,b,s").unwrap();
        assert!(matches!(sr2.lift_history(x, &h2), Err(SplitError::InvalidHistory(_))));
    }

    #[test]
    fn lifting_single_states() {
        let a = gallery::split_demo();
        let w = a.state_by_name("ω").unwrap();
        let s = a.state_by_name("s").unwrap();
        let sr = split(&a, w).unwrap();
        for &x in sr.separation_actions() {
            assert_eq!(sr.lift_history(x, &History::new(s)).unwrap().states(), [sr.copy_of(s, x)]);
            assert_eq!(sr.lift_history(x, &History::new(w)).unwrap().states(), [sr.separation_hat()]);
        }
        assert!(matches!(sr.lift_history(ActionId(7), &History::new(s)), Err(SplitError::UnavailableAction { .. })));
    }

    #[test]
    fn projection_inverts_lifting_exhaustively() {
        let a = gallery::split_demo();
        let w = a.state_by_name("ω").unwrap();
        let sr = split(&a, w).unwrap();
        for &x in sr.separation_actions() {
            for s in a.states() {
                for len in 0..=6 {
                    for h in enumerate_histories(&a, s, len) {
                        let lifted = sr.lift_history(x, &h).unwrap();
                        assert!(lifted.check(sr.arena()).is_ok());
                        assert_eq!(sr.project_history(&lifted).unwrap(), h);
                    }
                }
            }
        }
        // and lifting inverts projection on histories starting in a copy
        for s_hat in sr.arena().states() {
            let x = sr.copy_index(s_hat).unwrap_or(sr.separation_actions()[0]);
            for h in enumerate_histories(sr.arena(), s_hat, 5) {
                assert_eq!(sr.lift_history(x, &sr.project_history(&h).unwrap()).unwrap(), h);
            }
        }
    }

    #[test]
    fn stationary_lifting_composes_with_projection() {
        let a = gallery::split_demo();
        let sr = split(&a, a.state_by_name("ω").unwrap()).unwrap();
        let sigma = DSStrategy::from_names(&a, Player::Max, &[("s", "a")]).unwrap();
        let lifted = sr.lift_strategy(&sigma.into()).unwrap();
        let d = lifted.as_stationary().unwrap();
        assert_eq!(d.compact(sr.arena()), "s_a=a,s_b=a");
    }

    #[test]
    fn projection_of_stationary_strategies() {
        let a = swapped_demo();
        let sr = split(&a, a.state_by_name("ω").unwrap()).unwrap();
        let sh = sr.arena();
        let x_a = a.action_by_name("a").unwrap();
        let x_b = a.action_by_name("b").unwrap();
        let sigma_hat: Strategy = DSStrategy::from_names(sh, Player::Max, &[("ω", "a"), ("s_a", "b"), ("s_b", "a")]).unwrap().into();
        let p = sr.project_strategy(x_a, &sigma_hat).unwrap();
        assert_eq!(p.memory_size(), 1);
        assert_eq!(p.as_stationary().unwrap().compact(&a), "s=b,ω=a");
        let q = sr.project_strategy(x_b, &sigma_hat).unwrap();
        assert_eq!(q.memory_size(), 2);
        assert!(q.as_stationary().is_none());
    }

    #[test]
    fn projection_round_trips_lifting() {
        let a = swapped_demo();
        let sr = split(&a, a.state_by_name("ω").unwrap()).unwrap();
        for sigma in ds_enumerate(&a, Player::Max) {
            let sigma: Strategy = sigma.into();
            let lifted = sr.lift_strategy(&sigma).unwrap();
            for &x in sr.separation_actions() {
                let back = sr.project_strategy(x, &lifted).unwrap();
                assert_eq!(back, sigma);
            }
        }
    }

    #[test]
    fn projected_strategies_act_through_lifting() {
        let a = swapped_demo();
        let sr = split(&a, a.state_by_name("ω").unwrap()).unwrap();
        for sigma_hat in ds_enumerate(sr.arena(), Player::Max) {
            let sigma_hat: Strategy = sigma_hat.into();
            for &x in sr.separation_actions() {
                let p = sr.project_strategy(x, &sigma_hat).unwrap();
                for s in a.states() {
                    for h in enumerate_histories(&a, s, 5).into_iter().filter(|h| p.is_consistent(&a, h)) {
                        let lifted = sr.lift_history(x, &h).unwrap();
                        assert_eq!(p.play(&a, &h), sigma_hat.play(sr.arena(), &lifted));
                    }
                }
            }
        }
    }

    #[test]
    fn negative_control_breaks_separation() {
        let a = gallery::split_demo();
        let w = a.state_by_name("ω").unwrap();
        let sr = split(&a, w).unwrap();
        let sh = sr.arena();
        let s_a = sh.state_by_name("s_a").unwrap();
        let s_b = sh.state_by_name("s_b").unwrap();
        let act_a = sh.action_by_name("a").unwrap();
        // redirect the self-loop of s_a to s_b
        let transitions: Vec<Transition> = sh
            .transitions()
            .iter()
            .map(|t| {
                let mut t = t.clone();
                if t.source == s_a && t.action == act_a {
                    t.target = s_b;
                }
                t
            })
            .collect();
        let broken = Arena::assemble(
            sh.state_names().to_vec(),
            sh.states().map(|s| sh.owner(s)).collect(),
            sh.priorities().map(<[u32]>::to_vec),
            sh.action_names().to_vec(),
            transitions,
        )
        .unwrap();
        let fake = SplitResult::from_parts(&a, w, broken, sr.projection().to_vec(), sh.states().map(|s| sr.copy_index(s)).collect()).unwrap();
        match fake.check_separation() {
            Err(SplitError::SeparationViolated { path }) => assert_eq!(path, ["s_a", "s_b"]),
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn copy_subarenas_are_smaller() {
        let a = gallery::split_demo();
        let w = a.state_by_name("ω").unwrap();
        let sr = split(&a, w).unwrap();
        let x_a = a.action_by_name("a").unwrap();
        let copy = sr.copy_subarena(x_a).unwrap();
        assert_eq!(copy.arena().state_names(), ["ω", "s_a"]);
        assert_eq!(copy.arena().size(), 1);
        assert!(copy.arena().size() < a.size());
        assert_eq!(sr.restrict_separation(x_a).unwrap().size(), 2);
        assert_eq!(copy.local_state(StateId(2)), None);
        assert_eq!(copy.split_state(StateId(1)), StateId(1));
    }

    #[test]
    fn name_clashes_are_disambiguated() {
        let mut b = ArenaBuilder::new();
        let w = b.state("s_x", Player::Max);
        let s = b.state("s", Player::Max);
        let x = b.action("x");
        let y = b.action("y");
        b.transition(w, x, s, int(1), int(0))
            .transition(w, y, s, int(1), int(0))
            .transition(s, x, w, int(1), int(0));
        let a = b.build().unwrap();
        let sr = split(&a, w).unwrap();
        assert_eq!(sr.arena().state_names(), ["s_x", "s_x'", "s_y"]);
    }
}
