use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use splitsolve_core::gallery::{self, GalleryEntry};
use splitsolve_core::io::{arena_to_json, parse_arena, to_dot, ReportDoc};
use splitsolve_core::outcome::OutcomeError;
use splitsolve_core::props::{run_suite, WordPayoff};
use splitsolve_core::random::{random_arena_seeded, ArenaShape};
use splitsolve_core::solver::{brute_force_saddle, two_player_solve, verify_saddle, SolveError, SolverConfig};
use splitsolve_core::{split, Arena, DSStrategy, Player, Preference};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NoOptimum(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::NoOptimum(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        let msg = e.to_string();
        match e {
            _ if e.is_no_optimum() => CliError::NoOptimum(msg),
            SolveError::EnumerationBoundExceeded { .. }
            | SolveError::Outcome(OutcomeError::MissingPriorities)
            | SolveError::Outcome(OutcomeError::NotDeterministic) => CliError::Input(msg),
            _ => CliError::Internal(msg),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "splitsolve", version, about = "Exact solver for finite zero-sum stochastic games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game: per-state values, optimal stationary strategies and the recursion trace.
    Solve(SolveArgs),
    /// Split an arena on one state and write the result as JSON and DOT.
    Split(SplitArgs),
    /// Compare the recursive solver with brute force on seeded random arenas.
    Oracle(OracleArgs),
    /// Check a pair of stationary strategies against every stationary deviation.
    Verify(VerifyArgs),
    /// Test a payoff on words for prefix independence and sub-mixing.
    Props(PropsArgs),
    /// Reference arenas with known facts.
    #[command(subcommand)]
    Gallery(GalleryCommand),
}

#[derive(Args, Clone)]
struct SolverFlags {
    /// Largest number of stationary strategies or profiles to enumerate.
    #[arg(long, default_value_t = splitsolve_core::solver::DEFAULT_MAX_PROFILES)]
    max_profiles: u128,
    /// Worker threads for brute-force enumeration.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl SolverFlags {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            max_profiles: self.max_profiles,
            jobs: self.jobs.max(1),
            ..SolverConfig::default()
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    Recursive,
    Oracle,
    Both,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SolveArgs {
    /// Arena file, or `gallery:<name>`.
    arena: String,
    /// mean, parity, simple-parity, discounted:<num/den> or overtaking.
    #[arg(long)]
    payoff: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Recursive)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct SplitArgs {
    /// Arena file, or `gallery:<name>`.
    arena: String,
    /// Name of the separation state.
    #[arg(long)]
    state: String,
    /// Where to write the split arena; standard output by default.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the DOT graph; defaults to the output path with a `.dot` extension.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Number of random arenas.
    #[arg(long, default_value_t = 100)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Payoffs to compare on; repeatable.
    #[arg(long, default_values_t = ["mean".to_string(), "parity".to_string(), "discounted:1/2".to_string()])]
    payoff: Vec<String>,
    /// Print one line per arena and payoff.
    #[arg(long)]
    verbose: bool,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct VerifyArgs {
    /// Arena file, or `gallery:<name>`.
    arena: String,
    #[arg(long)]
    payoff: Option<String>,
    /// Max strategy as `state=action,…`; states with a single action may be omitted.
    #[arg(long = "max", default_value = "")]
    max_strategy: String,
    /// Min strategy as `state=action,…`.
    #[arg(long = "min", default_value = "")]
    min_strategy: String,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct PropsArgs {
    /// mean, liminf-mean, parity or first-letter, optionally prefixed by `neg-`.
    #[arg(long, default_value = "mean")]
    payoff: String,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// List the entries.
    List,
    /// Check every documented fact of an entry.
    Run {
        name: String,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Print an entry as an arena document, or as DOT.
    Export {
        name: String,
        #[arg(long)]
        dot: bool,
    },
}

fn gallery_entry(name: &str) -> Result<GalleryEntry> {
    gallery::entry(name).ok_or_else(|| {
        let names: Vec<&str> = gallery::entries().iter().map(|e| e.name).collect();
        CliError::Input(format!("no gallery entry '{name}' (available: {})", names.join(", ")))
    })
}

/// Loads an arena and, for gallery arenas, the entry's default payoff.
fn load_arena(source: &str) -> Result<(Arena, Option<Preference>)> {
    if let Some(name) = source.strip_prefix("gallery:") {
        let e = gallery_entry(name)?;
        return Ok((e.arena, Some(e.payoff)));
    }
    let text = fs::read_to_string(source).map_err(|e| CliError::Input(format!("cannot read {source}: {e}")))?;
    let arena = parse_arena(&text).map_err(|e| CliError::Input(format!("{source}: {e}")))?;
    Ok((arena, None))
}

fn payoff(flag: Option<&str>, fallback: Option<Preference>) -> Result<Preference> {
    match flag {
        Some(p) => p.parse().map_err(|e: splitsolve_core::preference::PreferenceError| CliError::Input(e.to_string())),
        None => Ok(fallback.unwrap_or(Preference::MeanPayoff)),
    }
}

fn check_priorities(arena: &Arena, pref: &Preference) -> Result<()> {
    if pref.needs_priorities() && arena.priorities().is_none() {
        return Err(CliError::Input(format!("payoff {pref} needs a priority on every state")));
    }
    Ok(())
}

fn emit(doc: &ReportDoc, format: Format) {
    match format {
        Format::Text => print!("{}", doc.to_text()),
        Format::Json => print!("{}", doc.to_json()),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let (arena, default) = load_arena(&args.arena)?;
    let pref = payoff(args.payoff.as_deref(), default)?;
    check_priorities(&arena, &pref)?;
    let config = args.solver.config();
    let (mode, result, report) = match args.mode {
        Mode::Oracle => ("oracle", brute_force_saddle(&arena, &pref, &config), None),
        Mode::Recursive | Mode::Both => {
            let report = two_player_solve(&arena, &pref, &config);
            let mode = if args.mode == Mode::Both { "both" } else { "recursive" };
            (mode, report.result.clone(), Some(report))
        }
    };
    let shown = result.clone().map_err(|e| e.to_string());
    emit(&ReportDoc::new(&arena, &pref, mode, &shown, report.as_ref()), args.format);
    let sol = result?;
    if args.mode == Mode::Both {
        let oracle = brute_force_saddle(&arena, &pref, &config)?;
        if oracle.values != sol.values {
            return Err(CliError::Internal(format!(
                "recursive values [{}] differ from brute-force values [{}]",
                join(&sol.values),
                join(&oracle.values)
            )));
        }
        if args.format == Format::Text {
            println!("\noracle: brute-force values agree");
        }
    }
    Ok(())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn cmd_split(args: &SplitArgs) -> Result<()> {
    let (arena, _) = load_arena(&args.arena)?;
    let omega = arena
        .state_by_name(&args.state)
        .ok_or_else(|| CliError::Input(format!("unknown state '{}'", args.state)))?;
    let sr = split(&arena, omega).map_err(|e| CliError::Internal(e.to_string()))?;
    sr.check_separation().map_err(|e| CliError::Internal(e.to_string()))?;
    let json = arena_to_json(sr.arena());
    let dot = to_dot(sr.arena(), Some(&sr));
    match &args.out {
        Some(out) => {
            write_file(out, &json)?;
            let dot_path = args.dot.clone().unwrap_or_else(|| out.with_extension("dot"));
            write_file(&dot_path, &dot)?;
            println!("wrote {} and {}", out.display(), dot_path.display());
        }
        None => {
            print!("{json}");
            if let Some(d) = &args.dot {
                write_file(d, &dot)?;
            }
        }
    }
    Ok(())
}

fn cmd_oracle(args: &OracleArgs) -> Result<()> {
    let prefs = args
        .payoff
        .iter()
        .map(|p| payoff(Some(p), None))
        .collect::<Result<Vec<_>>>()?;
    let config = args.solver.config();
    let shape = ArenaShape::default();
    let mut mismatches = 0usize;
    for i in 0..args.count {
        let seed = args.seed.wrapping_add(i);
        let arena = random_arena_seeded(seed, &shape);
        for pref in &prefs {
            let rec = two_player_solve(&arena, pref, &config).result;
            let bf = brute_force_saddle(&arena, pref, &config);
            let line = match (&rec, &bf) {
                (Ok(r), Ok(b)) if r.values == b.values => format!("agree [{}]", join(&r.values)),
                (Ok(r), Ok(b)) => format!("MISMATCH recursive [{}] brute force [{}]", join(&r.values), join(&b.values)),
                (Err(e), _) => format!("MISMATCH recursive solver failed: {e}"),
                (_, Err(e)) => format!("MISMATCH brute force failed: {e}"),
            };
            if line.starts_with("MISMATCH") {
                mismatches += 1;
            }
            if args.verbose || line.starts_with("MISMATCH") {
                println!("seed {seed} size {} {pref}: {line}", arena.size());
            }
        }
    }
    let total = args.count as usize * prefs.len();
    println!(
        "{} arenas, payoffs [{}]: {} of {} comparisons agree",
        args.count,
        join(&prefs),
        total - mismatches,
        total
    );
    if mismatches > 0 {
        return Err(CliError::Internal(format!("{mismatches} comparisons disagree")));
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let (arena, default) = load_arena(&args.arena)?;
    let pref = payoff(args.payoff.as_deref(), default)?;
    check_priorities(&arena, &pref)?;
    let parse = |owner, text: &str| DSStrategy::parse(&arena, owner, text).map_err(|e| CliError::Input(format!("{owner} strategy: {e}")));
    let sigma = parse(Player::Max, &args.max_strategy)?;
    let tau = parse(Player::Min, &args.min_strategy)?;
    match verify_saddle(&arena, &pref, &sigma, &tau, &args.solver.config())? {
        None => {
            println!("pass: no stationary deviation improves on ({}; {})", sigma.compact(&arena), tau.compact(&arena));
            Ok(())
        }
        Some(w) => {
            println!("witness: {}", w.describe(&arena));
            Err(CliError::NoOptimum("the pair is not a saddle point".into()))
        }
    }
}

fn cmd_props(args: &PropsArgs) -> Result<()> {
    let f: WordPayoff = args.payoff.parse().map_err(|e: splitsolve_core::props::UnknownWordPayoff| CliError::Input(e.to_string()))?;
    print!("{}", run_suite(&f, args.samples, args.seed));
    Ok(())
}

fn cmd_gallery(cmd: &GalleryCommand) -> Result<()> {
    match cmd {
        GalleryCommand::List => {
            for e in gallery::entries() {
                println!("{:<12} {:<14} {}", e.name, e.payoff.to_string(), e.summary);
            }
            Ok(())
        }
        GalleryCommand::Run { name, solver } => {
            let e = gallery_entry(name)?;
            println!("{}: {}", e.name, e.summary);
            let mut failed = 0;
            for c in gallery::check_entry(&e, &solver.config()) {
                println!("[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.fact, c.detail);
                failed += usize::from(!c.passed);
            }
            if failed > 0 {
                return Err(CliError::Internal(format!("{failed} expected fact(s) do not hold")));
            }
            Ok(())
        }
        GalleryCommand::Export { name, dot } => {
            let e = gallery_entry(name)?;
            if *dot {
                print!("{}", to_dot(&e.arena, None));
            } else {
                print!("{}", arena_to_json(&e.arena));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Split(a) => cmd_split(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Props(a) => cmd_props(a),
        Command::Gallery(c) => cmd_gallery(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
