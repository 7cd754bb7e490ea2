//! One-player solving by enumeration, the recursive split solver for two-player
//! games, and the brute-force saddle-point oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arena::{ActionId, Arena, ArenaBuilder, ArenaError, Control, Player, StateId};
use crate::outcome::{evaluate_all, evaluate_from, OutcomeError};
use crate::preference::{Comparison, OutcomeStat, Preference, PreferenceError};
use crate::split::{split, SplitError};
use crate::strategy::{assemble_from_copies, ds_enumerate, extend_from_copy, first_strategy, DSStrategy, Profile, Strategy, StrategyError};

/// Default bound on the number of stationary profiles an enumeration may visit.
pub const DEFAULT_MAX_PROFILES: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// Upper bound on enumerated stationary strategies or profiles.
    pub max_profiles: u128,
    /// For simple parity, also look for running-maximum memory strategies that
    /// beat every stationary one.
    pub memory_probe: bool,
    /// Check the final pair of the recursive solver against all stationary deviations.
    pub verify: bool,
    /// Worker threads for profile enumeration; 1 keeps everything on the calling thread.
    pub jobs: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_profiles: DEFAULT_MAX_PROFILES,
            memory_probe: true,
            verify: true,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("no stationary strategy of {owner} is optimal from every state: {detail}")]
    NoUniformOptimum { owner: Player, state: String, detail: String },
    #[error("the preference leaves outcomes at state '{state}' incomparable, so no optimum can be selected")]
    PreferenceNotTotalEnough { state: String },
    #[error("no pair of stationary strategies is a saddle point")]
    NoSaddle,
    #[error("enumeration of {profiles} strategies exceeds the bound {bound}")]
    EnumerationBoundExceeded { profiles: u128, bound: u128 },
    #[error("{0} is not the only player with choices")]
    NotOnePlayer(Player),
    #[error("the recursive construction produced a pair that is not a saddle point: {0}")]
    NotASaddle(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Outcome(#[from] OutcomeError),
    #[error(transparent)]
    Preference(#[from] PreferenceError),
}

impl SolveError {
    /// Failures that express a property of the game rather than a malfunction.
    pub fn is_no_optimum(&self) -> bool {
        matches!(
            self,
            SolveError::NoUniformOptimum { .. }
                | SolveError::PreferenceNotTotalEnough { .. }
                | SolveError::NoSaddle
                | SolveError::NotASaddle(_)
        )
    }
}

impl From<SplitError> for SolveError {
    fn from(e: SplitError) -> Self {
        SolveError::Invariant(e.to_string())
    }
}

impl From<StrategyError> for SolveError {
    fn from(e: StrategyError) -> Self {
        SolveError::Invariant(e.to_string())
    }
}

impl From<ArenaError> for SolveError {
    fn from(e: ArenaError) -> Self {
        SolveError::Invariant(e.to_string())
    }
}

/// An optimal pair with the outcome it yields from every state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub max_strategy: DSStrategy,
    pub min_strategy: DSStrategy,
    pub values: Vec<OutcomeStat>,
}

/// Optimal stationary strategy of the only player with choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnePlayerSolution {
    pub strategy: DSStrategy,
    pub values: Vec<OutcomeStat>,
    /// Number of stationary strategies evaluated.
    pub evaluated: u128,
}

fn better_for(owner: Player, c: Comparison) -> Comparison {
    match owner {
        Player::Max => c,
        Player::Min => c.reverse(),
    }
}

fn opponent_profile(arena: &Arena, owner: Player, sigma: DSStrategy) -> Profile {
    let other = first_strategy(arena, owner.opponent());
    let (max, min) = match owner {
        Player::Max => (sigma, other),
        Player::Min => (other, sigma),
    };
    Profile::new(max, min).expect("owners are consistent")
}

/// Optimal stationary strategy for `owner` in an arena where the opponent has
/// no choice, found by exhaustive enumeration.
///
/// The result is optimal among stationary strategies from every state at
/// once; among several such strategies the first in enumeration order is
/// returned. For simple parity an additional probe compares against
/// strategies remembering the largest priority seen so far.
pub fn one_player_solve(arena: &Arena, owner: Player, pref: &Preference, config: &SolverConfig) -> Result<OnePlayerSolution, SolveError> {
    let control = arena.control();
    let opponent_has_choice = match owner {
        Player::Max => matches!(control, Control::MinControlled | Control::TwoPlayer),
        Player::Min => matches!(control, Control::MaxControlled | Control::TwoPlayer),
    };
    if opponent_has_choice {
        return Err(SolveError::NotOnePlayer(owner));
    }
    let solution = stationary_optimum(arena, owner, pref, config)?;
    if config.memory_probe && matches!(pref, Preference::SimpleParity) {
        probe_running_max(arena, owner, pref, config, &solution)?;
    }
    Ok(solution)
}

fn stationary_optimum(arena: &Arena, owner: Player, pref: &Preference, config: &SolverConfig) -> Result<OnePlayerSolution, SolveError> {
    let enumeration = ds_enumerate(arena, owner);
    let total = enumeration.total();
    if total > config.max_profiles {
        return Err(SolveError::EnumerationBoundExceeded {
            profiles: total,
            bound: config.max_profiles,
        });
    }
    let eval = |sigma: &DSStrategy| evaluate_all(arena, &opponent_profile(arena, owner, sigma.clone()), pref);
    // Small enumerations keep every value vector; larger ones evaluate twice.
    let keep = total <= 1 << 14;
    let mut stored: Vec<(DSStrategy, Vec<OutcomeStat>)> = Vec::new();
    let mut best: Option<Vec<OutcomeStat>> = None;
    for sigma in enumeration.clone() {
        let values = eval(&sigma)?;
        match &mut best {
            None => best = Some(values.clone()),
            Some(b) => {
                for (bs, v) in b.iter_mut().zip(&values) {
                    if better_for(owner, pref.compare(v, bs)?) == Comparison::Greater {
                        *bs = v.clone();
                    }
                }
            }
        }
        if keep {
            stored.push((sigma, values));
        }
    }
    let best = best.expect("at least one stationary strategy exists");
    let mut chosen: Option<(DSStrategy, Vec<OutcomeStat>)> = None;
    let mut check = |sigma: DSStrategy, values: Vec<OutcomeStat>| -> Result<(), SolveError> {
        let mut optimal_here = true;
        for (s, (bs, v)) in best.iter().zip(&values).enumerate() {
            match better_for(owner, pref.compare(v, bs)?) {
                Comparison::Less => optimal_here = false,
                Comparison::Equal => {}
                Comparison::Greater => return Err(SolveError::Invariant("running optimum was not maximal".into())),
                Comparison::Incomparable => {
                    return Err(SolveError::PreferenceNotTotalEnough {
                        state: arena.state_name(StateId(s)).to_string(),
                    })
                }
            }
        }
        if optimal_here && chosen.is_none() {
            chosen = Some((sigma, values));
        }
        Ok(())
    };
    if keep {
        for (sigma, values) in stored {
            check(sigma, values)?;
        }
    } else {
        for sigma in enumeration {
            let values = eval(&sigma)?;
            check(sigma, values)?;
        }
    }
    match chosen {
        Some((strategy, values)) => Ok(OnePlayerSolution {
            strategy,
            values,
            evaluated: if keep { total } else { 2 * total },
        }),
        None => {
            let state = arena
                .states()
                .next()
                .map(|s| arena.state_name(s).to_string())
                .unwrap_or_default();
            Err(SolveError::NoUniformOptimum {
                owner,
                state,
                detail: format!(
                    "the best stationary values [{}] are not achieved by a single strategy",
                    best.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                ),
            })
        }
    }
}

/// The product of `arena` with the running maximum of visited priorities.
/// State `(s, m)` is named `s@m`, has priority `m`, and `(s, β(s))` is where a
/// play starting in `s` begins.
pub fn running_max_product(arena: &Arena) -> Result<(Arena, Vec<StateId>), OutcomeError> {
    let prio = arena.priorities().ok_or(OutcomeError::MissingPriorities)?;
    let mut levels: Vec<u32> = prio.to_vec();
    levels.sort_unstable();
    levels.dedup();
    let mut b = ArenaBuilder::new();
    let mut ids: BTreeMap<(StateId, u32), StateId> = BTreeMap::new();
    for s in arena.states() {
        for &m in levels.iter().filter(|&&m| m >= prio[s.0]) {
            let id = b.state_with_priority(format!("{}@{m}", arena.state_name(s)), arena.owner(s), m);
            ids.insert((s, m), id);
        }
    }
    for name in arena.action_names() {
        b.action(name.clone());
    }
    for (&(s, m), &id) in &ids {
        for t in arena.transitions().iter().filter(|t| t.source == s) {
            let target = ids[&(t.target, m.max(prio[t.target.0]))];
            b.transition(id, t.action, target, t.prob.clone(), t.reward.clone());
        }
    }
    let product = b.build().expect("the product of a valid arena is valid");
    let starts = arena.states().map(|s| ids[&(s, prio[s.0])]).collect();
    Ok((product, starts))
}

fn probe_running_max(
    arena: &Arena,
    owner: Player,
    pref: &Preference,
    config: &SolverConfig,
    stationary: &OnePlayerSolution,
) -> Result<(), SolveError> {
    let (product, starts) = running_max_product(arena)?;
    if ds_enumerate(&product, owner).total() > config.max_profiles {
        return Ok(());
    }
    let with_memory = stationary_optimum(&product, owner, pref, config)?;
    let profile = opponent_profile(&product, owner, with_memory.strategy.clone());
    let memory_values = evaluate_from(&product, &starts, &profile, pref)?;
    for s in arena.states() {
        let (v_ds, v_mem) = (&stationary.values[s.0], &memory_values[s.0]);
        if better_for(owner, pref.compare(v_mem, v_ds)?) == Comparison::Greater {
            return Err(SolveError::NoUniformOptimum {
                owner,
                state: arena.state_name(s).to_string(),
                detail: format!(
                    "the best stationary strategy ({}) yields {v_ds} from '{}' while a strategy remembering the largest priority seen yields {v_mem}",
                    stationary.strategy.compact(arena),
                    arena.state_name(s)
                ),
            });
        }
    }
    Ok(())
}

/// Which half of the recursive step produced a trace entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pass {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceKind {
    /// Every state has a single action.
    NoChoice,
    /// Solved directly as a one-player game.
    OnePlayer { owner: Player },
    /// Reused an earlier solution of the same subgame.
    Memo,
    /// Split on a separation state.
    Split {
        pass: Pass,
        separation: String,
        /// Per action at the separation state: the size of the copy subarena.
        copy_sizes: Vec<(String, usize)>,
        /// Action picked at the separation state by the one-player solution.
        chosen: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub size: usize,
    /// Actions kept at each state, as a compact label.
    pub subgame: String,
    #[serde(flatten)]
    pub kind: TraceKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub subgames_solved: usize,
    pub memo_hits: usize,
    pub one_player_calls: usize,
    pub strategies_evaluated: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub result: Result<Solution, SolveError>,
    pub trace: Vec<TraceEntry>,
    pub stats: SolveStats,
}

type Pair = (DSStrategy, DSStrategy);

struct Recursion<'a> {
    pref: &'a Preference,
    config: &'a SolverConfig,
    memo: HashMap<Vec<Vec<ActionId>>, Pair>,
    trace: Vec<TraceEntry>,
    stats: SolveStats,
}

fn subgame_label(a: &Arena) -> String {
    a.states()
        .map(|s| {
            let acts: Vec<&str> = a.moves(s).iter().map(|m| a.action_name(m.action)).collect();
            format!("{}:{}", a.state_name(s), acts.join("|"))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl Recursion<'_> {
    fn record(&mut self, parent: Option<usize>, depth: usize, a: &Arena, kind: TraceKind) -> usize {
        let id = self.trace.len();
        self.trace.push(TraceEntry {
            id,
            parent,
            depth,
            size: a.size(),
            subgame: subgame_label(a),
            kind,
        });
        id
    }

    fn one_player(&mut self, a: &Arena, owner: Player) -> Result<OnePlayerSolution, SolveError> {
        self.stats.one_player_calls += 1;
        let sol = one_player_solve(a, owner, self.pref, self.config)?;
        self.stats.strategies_evaluated += sol.evaluated;
        Ok(sol)
    }

    fn solve(&mut self, a: &Arena, parent: Option<usize>, depth: usize) -> Result<Pair, SolveError> {
        let key = a.action_signature();
        if let Some(pair) = self.memo.get(&key) {
            let pair = pair.clone();
            self.stats.memo_hits += 1;
            self.record(parent, depth, a, TraceKind::Memo);
            return Ok(pair);
        }
        self.stats.subgames_solved += 1;
        let pair = match a.control() {
            Control::NoChoice => {
                self.record(parent, depth, a, TraceKind::NoChoice);
                (first_strategy(a, Player::Max), first_strategy(a, Player::Min))
            }
            Control::MaxControlled => {
                self.record(parent, depth, a, TraceKind::OnePlayer { owner: Player::Max });
                (self.one_player(a, Player::Max)?.strategy, first_strategy(a, Player::Min))
            }
            Control::MinControlled => {
                self.record(parent, depth, a, TraceKind::OnePlayer { owner: Player::Min });
                (first_strategy(a, Player::Max), self.one_player(a, Player::Min)?.strategy)
            }
            Control::TwoPlayer => {
                let sigma = self.pass(a, Player::Max, parent, depth)?;
                let tau = self.pass(a, Player::Min, parent, depth)?;
                (sigma, tau)
            }
        };
        self.memo.insert(key, pair.clone());
        Ok(pair)
    }

    /// One half of the inductive step: returns an optimal stationary strategy
    /// for `player`, built from a split on that player's first state with a choice.
    fn pass(&mut self, a: &Arena, player: Player, parent: Option<usize>, depth: usize) -> Result<DSStrategy, SolveError> {
        let omega = a
            .states()
            .find(|&s| a.owner(s) == player && a.num_available(s) >= 2)
            .ok_or_else(|| SolveError::Invariant(format!("{player} has no state with a choice")))?;
        let pass = match player {
            Player::Max => Pass::Max,
            Player::Min => Pass::Min,
        };
        let entry = self.record(
            parent,
            depth,
            a,
            TraceKind::Split {
                pass,
                separation: a.state_name(omega).to_string(),
                copy_sizes: Vec::new(),
                chosen: String::new(),
            },
        );
        let sr = split(a, omega)?;
        let xs = sr.separation_actions().to_vec();
        let mut sub: BTreeMap<ActionId, Pair> = BTreeMap::new();
        let mut copy_sizes = Vec::new();
        for &x in &xs {
            let g_x = a.restrict_action(omega, x)?;
            let copy_size = sr.copy_subarena(x)?.arena().size();
            if g_x.size() >= a.size() || copy_size >= a.size() {
                return Err(SolveError::Invariant(format!(
                    "restricting '{}' to '{}' does not shrink the game",
                    a.state_name(omega),
                    a.action_name(x)
                )));
            }
            copy_sizes.push((a.action_name(x).to_string(), copy_size));
            let pair = self.solve(&g_x, Some(entry), depth + 1)?;
            sub.insert(x, pair);
        }
        // The opponent's strategy on the split, copy by copy.
        let opponent = player.opponent();
        let per_copy: BTreeMap<ActionId, DSStrategy> = sub
            .iter()
            .map(|(&x, (s, t))| (x, if opponent == Player::Min { t.clone() } else { s.clone() }))
            .collect();
        let frozen = assemble_from_copies(&sr, opponent, &per_copy)?;
        let choices: BTreeMap<StateId, ActionId> = sr
            .arena()
            .states()
            .filter_map(|s| frozen.action(s).map(|act| (s, act)))
            .collect();
        let one_player_arena = sr.arena().restrict(&choices)?;
        let zeta = self.one_player(&one_player_arena, player)?.strategy;
        let e = zeta
            .action(sr.separation_hat())
            .ok_or_else(|| SolveError::Invariant("one-player solution leaves the separation state open".into()))?;
        // Own strategy of the chosen copy, transported to the copy subarena.
        let own_e = match player {
            Player::Max => &sub[&e].0,
            Player::Min => &sub[&e].1,
        };
        let copy = sr.copy_subarena(e)?;
        let local = DSStrategy::from_fn(copy.arena(), player, |l| {
            own_e.action(sr.project_state(copy.split_state(l))).expect("owned state has a choice")
        })?;
        let extended = extend_from_copy(&sr, &local, e)?;
        let projected = sr.project_strategy(e, &Strategy::Stationary(extended))?;
        let result = projected
            .as_stationary()
            .cloned()
            .ok_or_else(|| SolveError::Invariant("projection of the extended strategy is not stationary".into()))?;
        let direct = DSStrategy::from_fn(a, player, |s| if s == omega { e } else { own_e.action(s).expect("owned state has a choice") })?;
        if result != direct {
            return Err(SolveError::Invariant("projected strategy differs from the copied strategy".into()));
        }
        if let TraceKind::Split {
            copy_sizes: sizes,
            chosen,
            ..
        } = &mut self.trace[entry].kind
        {
            *sizes = copy_sizes;
            *chosen = a.action_name(e).to_string();
        }
        Ok(result)
    }
}

/// Solves a two-player game by recursion on its size, splitting on a state of
/// each player in turn and delegating one-player games to [`one_player_solve`].
pub fn two_player_solve(arena: &Arena, pref: &Preference, config: &SolverConfig) -> SolveReport {
    let mut rec = Recursion {
        pref,
        config,
        memo: HashMap::new(),
        trace: Vec::new(),
        stats: SolveStats::default(),
    };
    let result = rec.solve(arena, None, 0).and_then(|(sigma, tau)| {
        let profile = Profile::stationary(&sigma, &tau)?;
        let values = evaluate_all(arena, &profile, pref)?;
        if config.verify {
            if let Some(w) = verify_saddle(arena, pref, &sigma, &tau, config)? {
                return Err(SolveError::NotASaddle(w.describe(arena)));
            }
        }
        Ok(Solution {
            max_strategy: sigma,
            min_strategy: tau,
            values,
        })
    });
    SolveReport {
        result,
        trace: rec.trace,
        stats: rec.stats,
    }
}

/// A profitable stationary deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaddleWitness {
    pub player: Player,
    pub state: StateId,
    pub deviation: DSStrategy,
    pub value: OutcomeStat,
    pub deviation_value: OutcomeStat,
    pub comparison: Comparison,
}

impl SaddleWitness {
    pub fn describe(&self, arena: &Arena) -> String {
        format!(
            "{} deviates to [{}] from '{}': {} instead of {} ({:?})",
            self.player,
            self.deviation.compact(arena),
            arena.state_name(self.state),
            self.deviation_value,
            self.value,
            self.comparison
        )
    }
}

impl fmt::Display for SaddleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} deviation at state #{}: {} vs {}",
            self.player, self.state.0, self.deviation_value, self.value
        )
    }
}

fn check_bound(count: u128, config: &SolverConfig) -> Result<(), SolveError> {
    if count > config.max_profiles {
        return Err(SolveError::EnumerationBoundExceeded {
            profiles: count,
            bound: config.max_profiles,
        });
    }
    Ok(())
}

/// Checks both saddle inequalities against every stationary deviation from
/// every state. Returns the first violation found, Max deviations first.
pub fn verify_saddle(
    arena: &Arena,
    pref: &Preference,
    sigma: &DSStrategy,
    tau: &DSStrategy,
    config: &SolverConfig,
) -> Result<Option<SaddleWitness>, SolveError> {
    let (max_all, min_all) = (ds_enumerate(arena, Player::Max), ds_enumerate(arena, Player::Min));
    check_bound(max_all.total().saturating_add(min_all.total()), config)?;
    let values = evaluate_all(arena, &Profile::stationary(sigma, tau)?, pref)?;
    for dev in max_all {
        let dv = evaluate_all(arena, &Profile::stationary(&dev, tau)?, pref)?;
        for s in arena.states() {
            let c = pref.compare(&dv[s.0], &values[s.0])?;
            if !c.is_le() {
                return Ok(Some(SaddleWitness {
                    player: Player::Max,
                    state: s,
                    deviation: dev,
                    value: values[s.0].clone(),
                    deviation_value: dv[s.0].clone(),
                    comparison: c,
                }));
            }
        }
    }
    for dev in min_all {
        let dv = evaluate_all(arena, &Profile::stationary(sigma, &dev)?, pref)?;
        for s in arena.states() {
            let c = pref.compare(&values[s.0], &dv[s.0])?;
            if !c.is_le() {
                return Ok(Some(SaddleWitness {
                    player: Player::Min,
                    state: s,
                    deviation: dev,
                    value: values[s.0].clone(),
                    deviation_value: dv[s.0].clone(),
                    comparison: c,
                }));
            }
        }
    }
    Ok(None)
}

/// Outcome table of every stationary profile, indexed `[max][min][state]`.
struct ProfileTable {
    max: Vec<DSStrategy>,
    min: Vec<DSStrategy>,
    values: Vec<Vec<Vec<OutcomeStat>>>,
}

fn profile_table(arena: &Arena, pref: &Preference, config: &SolverConfig) -> Result<ProfileTable, SolveError> {
    let (me, ne) = (ds_enumerate(arena, Player::Max), ds_enumerate(arena, Player::Min));
    check_bound(me.total().saturating_mul(ne.total()), config)?;
    let max: Vec<DSStrategy> = me.collect();
    let min: Vec<DSStrategy> = ne.collect();
    let row = |s: &DSStrategy| {
        min.iter()
            .map(|t| Ok(evaluate_all(arena, &Profile::stationary(s, t)?, pref)?))
            .collect::<Result<Vec<_>, SolveError>>()
    };
    let values = if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| SolveError::Invariant(e.to_string()))?;
        pool.install(|| max.par_iter().map(row).collect::<Result<Vec<_>, _>>())?
    } else {
        max.iter().map(row).collect::<Result<Vec<_>, _>>()?
    };
    Ok(ProfileTable { max, min, values })
}

impl ProfileTable {
    fn is_saddle(&self, pref: &Preference, i: usize, j: usize) -> Result<bool, SolveError> {
        let v = &self.values[i][j];
        for row in &self.values {
            for (a, b) in row[j].iter().zip(v) {
                if !pref.compare(a, b)?.is_le() {
                    return Ok(false);
                }
            }
        }
        for col in &self.values[i] {
            for (a, b) in v.iter().zip(col) {
                if !pref.compare(a, b)?.is_le() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The first stationary pair, in enumeration order of Max then Min strategies,
/// satisfying both saddle inequalities at every state against every stationary deviation.
pub fn brute_force_saddle(arena: &Arena, pref: &Preference, config: &SolverConfig) -> Result<Solution, SolveError> {
    let table = profile_table(arena, pref, config)?;
    for i in 0..table.max.len() {
        for j in 0..table.min.len() {
            if table.is_saddle(pref, i, j)? {
                return Ok(Solution {
                    max_strategy: table.max[i].clone(),
                    min_strategy: table.min[j].clone(),
                    values: table.values[i][j].clone(),
                });
            }
        }
    }
    Err(SolveError::NoSaddle)
}

/// Every stationary saddle pair, in enumeration order.
pub fn all_saddles(arena: &Arena, pref: &Preference, config: &SolverConfig) -> Result<Vec<Solution>, SolveError> {
    let table = profile_table(arena, pref, config)?;
    let mut out = Vec::new();
    for i in 0..table.max.len() {
        for j in 0..table.min.len() {
            if table.is_saddle(pref, i, j)? {
                out.push(Solution {
                    max_strategy: table.max[i].clone(),
                    min_strategy: table.min[j].clone(),
                    values: table.values[i][j].clone(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::rational::{int, ratio};

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn values(sol: &Solution) -> Vec<String> {
        sol.values.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn split_demo_mean_payoff() {
        let a = gallery::split_demo();
        let report = two_player_solve(&a, &Preference::MeanPayoff, &cfg());
        let sol = report.result.unwrap();
        assert_eq!(sol.max_strategy.compact(&a), "s=a");
        assert_eq!(values(&sol), ["1/1", "1/1"]);
        let oracle = brute_force_saddle(&a, &Preference::MeanPayoff, &cfg()).unwrap();
        assert_eq!(oracle.values, sol.values);
        assert!(report.trace.iter().any(|t| matches!(t.kind, TraceKind::Split { .. })));
    }

    #[test]
    fn one_player_examples() {
        let l = gallery::one_loop();
        let sol = one_player_solve(&l, Player::Max, &Preference::MeanPayoff, &cfg()).unwrap();
        assert_eq!(sol.strategy, first_strategy(&l, Player::Max));

        let mut b = ArenaBuilder::new();
        let q = b.state("q", Player::Max);
        let zero = b.action("zero");
        let one = b.action("one");
        b.transition(q, zero, q, int(1), int(0)).transition(q, one, q, int(1), int(1));
        let a = b.build().unwrap();
        let sol = one_player_solve(&a, Player::Max, &Preference::MeanPayoff, &cfg()).unwrap();
        assert_eq!(sol.strategy.compact(&a), "q=one");
        assert_eq!(sol.values, vec![OutcomeStat::Value(int(1))]);
        let sol = one_player_solve(&a.clone().with_owners(vec![Player::Min]), Player::Min, &Preference::MeanPayoff, &cfg()).unwrap();
        assert_eq!(sol.values, vec![OutcomeStat::Value(int(0))]);
        assert_eq!(
            one_player_solve(&gallery::split_demo(), Player::Max, &Preference::MeanPayoff, &cfg()),
            Err(SolveError::NotOnePlayer(Player::Max))
        );
    }

    #[test]
    fn horn_has_no_stationary_optimum() {
        let h = gallery::horn();
        match one_player_solve(&h, Player::Max, &Preference::SimpleParity, &cfg()) {
            Err(SolveError::NoUniformOptimum { state, detail, .. }) => {
                assert_eq!(state, "w");
                assert!(detail.contains("yields 0/1"), "{detail}");
                assert!(detail.contains("yields 1/2"), "{detail}");
            }
            other => panic!("expected NoUniformOptimum, got {other:?}"),
        }
        let no_probe = SolverConfig {
            memory_probe: false,
            ..cfg()
        };
        let sol = one_player_solve(&h, Player::Max, &Preference::SimpleParity, &no_probe).unwrap();
        assert_eq!(sol.values[0], OutcomeStat::Value(int(0)));
    }

    #[test]
    fn overtaking_has_no_saddle() {
        let o = gallery::overtaking();
        assert_eq!(brute_force_saddle(&o, &Preference::Overtaking, &cfg()), Err(SolveError::NoSaddle));
    }

    #[test]
    fn no_choice_arena() {
        let l = gallery::one_loop();
        let sol = brute_force_saddle(&l, &Preference::MeanPayoff, &cfg()).unwrap();
        let rep = two_player_solve(&l, &Preference::MeanPayoff, &cfg());
        assert_eq!(rep.result.unwrap(), sol);
        assert_eq!(verify_saddle(&l, &Preference::MeanPayoff, &sol.max_strategy, &sol.min_strategy, &cfg()).unwrap(), None);
    }

    #[test]
    fn perturbed_strategy_is_caught() {
        let a = gallery::split_demo();
        let tau = DSStrategy::from_names(&a, Player::Min, &[("ω", "a")]).unwrap();
        let bad = DSStrategy::from_names(&a, Player::Max, &[("s", "b")]).unwrap();
        let w = verify_saddle(&a, &Preference::MeanPayoff, &bad, &tau, &cfg()).unwrap().unwrap();
        assert_eq!(w.player, Player::Max);
        assert_eq!(a.state_name(w.state), "s");
        assert_eq!(w.deviation.compact(&a), "s=a");
    }

    #[test]
    fn parallel_table_is_identical() {
        let a = gallery::split_demo();
        let par = SolverConfig { jobs: 4, ..cfg() };
        for pref in [Preference::MeanPayoff, Preference::Parity] {
            assert_eq!(all_saddles(&a, &pref, &par).unwrap(), all_saddles(&a, &pref, &cfg()).unwrap());
        }
    }

    #[test]
    fn enumeration_bound() {
        let a = gallery::split_demo();
        let tight = SolverConfig { max_profiles: 3, ..cfg() };
        assert!(matches!(
            brute_force_saddle(&a, &Preference::MeanPayoff, &tight),
            Err(SolveError::EnumerationBoundExceeded { profiles: 4, bound: 3 })
        ));
    }

    #[test]
    fn discounted_and_parity_on_split_demo() {
        let a = gallery::split_demo();
        for pref in [Preference::Discounted(ratio(1, 2)), Preference::Parity] {
            let rep = two_player_solve(&a, &pref, &cfg());
            let sol = rep.result.unwrap();
            assert_eq!(sol.values, brute_force_saddle(&a, &pref, &cfg()).unwrap().values);
        }
    }

    #[test]
    fn running_max_product_shape() {
        let h = gallery::horn();
        let (p, starts) = running_max_product(&h).unwrap();
        assert_eq!(p.state_names(), ["w@1", "w@2", "w@3", "g@2", "g@3", "b@3"]);
        assert_eq!(starts, vec![StateId(0), StateId(3), StateId(5)]);
    }
}
