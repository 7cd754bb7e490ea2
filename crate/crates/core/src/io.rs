//! JSON arena documents, solve reports and DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{Arena, ArenaBuilder, ArenaError, Player};
use crate::preference::{OutcomeStat, Preference};
use crate::rational::{format_rational, parse_rational, RationalParseError};
use crate::solver::{Solution, SolveReport, SolveStats, TraceEntry};
use crate::split::SplitResult;
use crate::strategy::DSStrategy;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("malformed arena document: {0}")]
    Json(String),
    #[error("transition #{index}: field '{field}': {source}")]
    Rational {
        index: usize,
        field: &'static str,
        #[source]
        source: RationalParseError,
    },
    #[error("transition #{index} refers to unknown {kind} '{name}'")]
    UnknownName { index: usize, kind: &'static str, name: String },
    #[error(transparent)]
    Arena(#[from] ArenaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub name: String,
    pub owner: Player,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub from: String,
    pub action: String,
    pub to: String,
    pub prob: String,
    pub reward: String,
}

/// On-disk arena: probabilities and rewards are exact rational strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArenaDoc {
    pub states: Vec<StateDoc>,
    pub actions: Vec<String>,
    pub transitions: Vec<TransitionDoc>,
}

impl ArenaDoc {
    pub fn from_arena(a: &Arena) -> Self {
        ArenaDoc {
            states: a
                .states()
                .map(|s| StateDoc {
                    name: a.state_name(s).to_string(),
                    owner: a.owner(s),
                    priority: a.priority(s),
                })
                .collect(),
            actions: a.action_names().to_vec(),
            transitions: a
                .transitions()
                .iter()
                .map(|t| TransitionDoc {
                    from: a.state_name(t.source).to_string(),
                    action: a.action_name(t.action).to_string(),
                    to: a.state_name(t.target).to_string(),
                    prob: format_rational(&t.prob),
                    reward: format_rational(&t.reward),
                })
                .collect(),
        }
    }

    pub fn to_arena(&self) -> Result<Arena, FormatError> {
        let mut b = ArenaBuilder::new();
        for s in &self.states {
            match s.priority {
                Some(p) => b.state_with_priority(s.name.clone(), s.owner, p),
                None => b.state(s.name.clone(), s.owner),
            };
        }
        for a in &self.actions {
            b.action(a.clone());
        }
        for (index, t) in self.transitions.iter().enumerate() {
            let state = |name: &str| {
                b.state_id(name).ok_or_else(|| FormatError::UnknownName {
                    index,
                    kind: "state",
                    name: name.to_string(),
                })
            };
            let (from, to) = (state(&t.from)?, state(&t.to)?);
            let action = b.action_id(&t.action).ok_or_else(|| FormatError::UnknownName {
                index,
                kind: "action",
                name: t.action.clone(),
            })?;
            let prob = parse_rational(&t.prob).map_err(|source| FormatError::Rational {
                index,
                field: "prob",
                source,
            })?;
            let reward = parse_rational(&t.reward).map_err(|source| FormatError::Rational {
                index,
                field: "reward",
                source,
            })?;
            b.transition(from, action, to, prob, reward);
        }
        Ok(b.build()?)
    }
}

pub fn parse_arena(text: &str) -> Result<Arena, FormatError> {
    let doc: ArenaDoc = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    doc.to_arena()
}

pub fn arena_to_json(a: &Arena) -> String {
    let mut s = serde_json::to_string_pretty(&ArenaDoc::from_arena(a)).expect("arena documents serialize");
    s.push('\n');
    s
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: Max states are boxes, Min states ellipses. When the
/// arena is a split, nodes are colored by copy and the separation state is doubled.
pub fn to_dot(a: &Arena, split: Option<&SplitResult>) -> String {
    let mut out = String::from("digraph arena {\n  rankdir=LR;\n");
    for s in a.states() {
        let shape = match a.owner(s) {
            Player::Max => "box",
            Player::Min => "ellipse",
        };
        let mut label = a.state_name(s).to_string();
        if let Some(p) = a.priority(s) {
            let _ = write!(label, " [{p}]");
        }
        let mut attrs = format!("shape={shape}, label=\"{}\"", dot_escape(&label));
        if let Some(sr) = split {
            match sr.copy_index(s) {
                Some(x) => {
                    let pos = sr.separation_actions().iter().position(|&y| y == x).unwrap_or(0);
                    let _ = write!(attrs, ", color=\"{}\", fontcolor=\"{}\"", PALETTE[pos % PALETTE.len()], PALETTE[pos % PALETTE.len()]);
                }
                None => attrs.push_str(", peripheries=2"),
            }
        }
        let _ = writeln!(out, "  n{} [{attrs}];", s.0);
    }
    for t in a.transitions() {
        let _ = writeln!(
            out,
            "  n{} -> n{} [label=\"{} {} / {}\"];",
            t.source.0,
            t.target.0,
            dot_escape(a.action_name(t.action)),
            format_rational(&t.prob),
            format_rational(&t.reward)
        );
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateLine {
    pub state: String,
    pub owner: Player,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
}

/// Machine-readable form of a solve run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportDoc {
    pub payoff: String,
    pub mode: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub states: Vec<StateLine>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<SolveStats>,
}

fn outcome_text(o: &OutcomeStat) -> String {
    o.to_string()
}

pub fn state_lines(a: &Arena, sol: &Solution) -> Vec<StateLine> {
    a.states()
        .map(|s| {
            let strat: &DSStrategy = match a.owner(s) {
                Player::Max => &sol.max_strategy,
                Player::Min => &sol.min_strategy,
            };
            StateLine {
                state: a.state_name(s).to_string(),
                owner: a.owner(s),
                value: outcome_text(&sol.values[s.0]),
                action: strat.action(s).map(|x| a.action_name(x).to_string()),
            }
        })
        .collect()
}

impl ReportDoc {
    pub fn new(a: &Arena, pref: &Preference, mode: &str, result: &Result<Solution, String>, report: Option<&SolveReport>) -> Self {
        let (status, error, states) = match result {
            Ok(sol) => ("solved".to_string(), None, state_lines(a, sol)),
            Err(e) => ("failed".to_string(), Some(e.clone()), Vec::new()),
        };
        ReportDoc {
            payoff: pref.to_string(),
            mode: mode.to_string(),
            status,
            error,
            states,
            trace: report.map(|r| r.trace.clone()).unwrap_or_default(),
            stats: report.map(|r| r.stats.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Human-readable rendering with aligned columns.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "payoff: {}", self.payoff);
        let _ = writeln!(out, "mode:   {}", self.mode);
        let _ = writeln!(out, "status: {}", self.status);
        if let Some(e) = &self.error {
            let _ = writeln!(out, "reason: {e}");
        }
        if !self.states.is_empty() {
            let w = self.states.iter().map(|l| l.state.chars().count()).max().unwrap_or(0).max(5);
            let _ = writeln!(out, "\n{:<w$}  owner  action  value", "state");
            for l in &self.states {
                let _ = writeln!(
                    out,
                    "{:<w$}  {:<5}  {:<6}  {}",
                    l.state,
                    l.owner.to_string(),
                    l.action.as_deref().unwrap_or("-"),
                    l.value
                );
            }
        }
        if !self.trace.is_empty() {
            let _ = writeln!(out, "\ntrace:");
            for t in &self.trace {
                let indent = "  ".repeat(t.depth + 1);
                let what = match &t.kind {
                    crate::solver::TraceKind::NoChoice => "no choice".to_string(),
                    crate::solver::TraceKind::OnePlayer { owner } => format!("one-player ({owner})"),
                    crate::solver::TraceKind::Memo => "reused".to_string(),
                    crate::solver::TraceKind::Split {
                        pass,
                        separation,
                        copy_sizes,
                        chosen,
                    } => {
                        let sizes: BTreeMap<&str, usize> = copy_sizes.iter().map(|(x, n)| (x.as_str(), *n)).collect();
                        format!("{pass:?} pass: split on {separation}, copy sizes {sizes:?}, chose {chosen}")
                    }
                };
                let _ = writeln!(out, "{indent}#{} size {}: {what}", t.id, t.size);
            }
        }
        if let Some(s) = &self.stats {
            let _ = writeln!(
                out,
                "\nstats: {} subgames solved, {} reused, {} one-player calls, {} strategies evaluated",
                s.subgames_solved, s.memo_hits, s.one_player_calls, s.strategies_evaluated
            );
        }
        out
    }
}
