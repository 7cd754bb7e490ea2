//! Exact solving of finite zero-sum perfect-information stochastic games.
//!
//! Arenas carry exact rational probabilities and rewards. Deterministic
//! stationary and finite-memory strategy profiles are evaluated through the
//! Markov chains they induce, and two-player games are solved by splitting an
//! arena on a state, solving smaller subgames recursively and combining their
//! strategies.

pub mod arena;
pub mod chain;
pub mod gallery;
pub mod history;
pub mod io;
pub mod lasso;
pub mod linalg;
pub mod outcome;
pub mod preference;
pub mod props;
pub mod random;
pub mod rational;
pub mod solver;
pub mod split;
pub mod strategy;

pub use arena::{ActionId, Arena, ArenaBuilder, ArenaError, Control, Player, StateId, Transition, TransitionKey};
pub use lasso::Lasso;
pub use preference::{Comparison, OutcomeStat, Preference};
pub use rational::Rational;
pub use solver::{brute_force_saddle, one_player_solve, two_player_solve, verify_saddle, Solution, SolveError, SolveReport, SolverConfig};
pub use split::{split, SplitResult};
pub use strategy::{DSStrategy, FMStrategy, Profile, Strategy};
