//! Command line frontend: generate, solve, verify and benchmark parity games.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 timeout, 3 node budget
//! exhausted, 4 verification mismatch.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use pgsym::fleet::{self, BenchRecord, RecordedOutcome};
use pgsym::generator::{generate, GenSpec};
use pgsym::oracle;
use pgsym::pgsolver::{parse_pgsolver, write_pgsolver, ExplicitGame};
use pgsym::solvers::{solve, Algorithm, Outcome, SolverOptions};
use pgsym::symbolic::SymbolicGame;

const EXIT_USAGE: u8 = 1;
const EXIT_TIMEOUT: u8 = 2;
const EXIT_OOM: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "pgsym", version, about = "Symbolic parity game toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random game in PGSolver format.
    Gen(GenArgs),
    /// Solve a game file with one algorithm.
    Solve(SolveArgs),
    /// Cross-check all solvers and oracles on a game file or a random fleet.
    Verify(VerifyArgs),
    /// Run a benchmark fleet and emit CSV records.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of vertices.
    #[arg(long)]
    n: u64,
    /// Priorities are drawn uniformly from 0..P.
    #[arg(long, default_value_t = 8)]
    p: u64,
    /// Minimum out-degree.
    #[arg(long, default_value_t = 1)]
    l: u64,
    /// Maximum out-degree (clamped when self-loops are excluded).
    #[arg(long, default_value_t = 2)]
    h: u64,
    /// Never generate an edge from a vertex to itself.
    #[arg(long)]
    no_self_loops: bool,
    /// Generator seed; defaults to $PGSYM_SEED or 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Game file in PGSolver format.
    input: PathBuf,
    /// zielonka, pp, fi or apt.
    #[arg(long, default_value = "zielonka")]
    alg: Algorithm,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Game file; mutually exclusive with --fleet.
    input: Option<PathBuf>,
    /// Verify this many seeded random fleet games instead of a file.
    #[arg(long, conflicts_with = "input")]
    fleet: Option<u64>,
    /// First seed of the fleet; defaults to $PGSYM_SEED or 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Test hook: corrupt the first solution before comparing.
    #[arg(long, hide = true)]
    corrupt: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Number of fleet games to run.
    #[arg(long, default_value_t = 20)]
    count: u64,
    /// First seed of the fleet; defaults to $PGSYM_SEED or 0.
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct LimitArgs {
    /// Wall-clock limit per solver run, in milliseconds.
    #[arg(long)]
    timeout: Option<u64>,
    /// Maximum live BDD nodes per run.
    #[arg(long)]
    node_budget: Option<usize>,
}

impl LimitArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            timeout: self.timeout.map(Duration::from_millis),
            check_invariants: false,
            fi_reset_optimization: false,
        }
    }
}

fn env_seed() -> u64 {
    std::env::var("PGSYM_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's help/version on stdout with success, everything
            // else is a usage error
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign { ExitCode::SUCCESS } else { ExitCode::from(EXIT_USAGE) };
        }
    };
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn load_game(path: &PathBuf) -> anyhow::Result<ExplicitGame> {
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    parse_pgsolver(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<u8> {
    let spec = GenSpec {
        vertices: args.n,
        priority_bound: args.p,
        min_degree: args.l,
        max_degree: args.h,
        self_loop_free: args.no_self_loops,
        seed: args.seed.unwrap_or_else(env_seed),
    };
    let game = generate(&spec)?;
    let text = write_pgsolver(&game);
    match args.output {
        Some(path) => fs::write(&path, text)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<u8> {
    let explicit = load_game(&args.input)?;
    let game = match SymbolicGame::encode_with(&explicit, args.limits.node_budget) {
        Ok(game) => game,
        Err(_) => {
            println!("outcome: oom (while encoding)");
            return Ok(EXIT_OOM);
        }
    };
    match solve(&game, args.alg, &args.limits.options()) {
        Outcome::Solved { solution, stats } => {
            let w0 = game.decode_set(&solution.w0)?;
            let w1 = game.decode_set(&solution.w1)?;
            println!("W0: {}", join(&w0));
            println!("W1: {}", join(&w1));
            println!(
                "stats: time_ms={} peak_nodes={}",
                stats.wall_time.as_millis(),
                stats.peak_live_nodes
            );
            Ok(0)
        }
        Outcome::Timeout => {
            println!("outcome: timeout");
            Ok(EXIT_TIMEOUT)
        }
        Outcome::OutOfMemory => {
            println!("outcome: oom");
            Ok(EXIT_OOM)
        }
    }
}

fn join(ids: &[u64]) -> String {
    ids.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// Solves `explicit` with everything available and reports the first
/// disagreement against the explicit reference solver.
fn verify_one(explicit: &ExplicitGame, label: &str, corrupt: bool) -> anyhow::Result<bool> {
    let expected = oracle::solve_explicit_zielonka(explicit);
    let mut pass = true;
    let mut check = |name: &str, mut w0: Vec<u64>, mut w1: Vec<u64>| {
        if corrupt {
            // move one vertex to the wrong side
            if w0.is_empty() {
                w0.push(w1.remove(0));
            } else {
                w1.push(w0.remove(0));
            }
        }
        let wrong = diff_witness(&expected.w0, &w0);
        let wrong1 = diff_witness(&expected.w1, &w1);
        if let Some(&v) = wrong.first().or(wrong1.first()) {
            println!("{label}: {name} disagrees, first differing vertex {v}");
            pass = false;
        }
    };
    if explicit.vertices().len() <= oracle::BRUTE_FORCE_VERTEX_LIMIT {
        let brute = oracle::solve_bruteforce(explicit)?;
        check("brute-force", brute.w0, brute.w1);
    }
    for algorithm in Algorithm::ALL {
        let game = SymbolicGame::encode(explicit)?;
        match solve(&game, algorithm, &SolverOptions::default()) {
            Outcome::Solved { solution, .. } => {
                check(
                    algorithm.name(),
                    game.decode_set(&solution.w0)?,
                    game.decode_set(&solution.w1)?,
                );
            }
            other => anyhow::bail!("{algorithm} did not finish: {other:?}"),
        }
    }
    Ok(pass)
}

/// Elements present in exactly one of the two sorted sets.
fn diff_witness(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().filter(|v| !b.contains(v)).copied().collect();
    out.extend(b.iter().filter(|v| !a.contains(v)));
    out.sort_unstable();
    out
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<u8> {
    let mut all_pass = true;
    match (&args.input, args.fleet) {
        (Some(path), None) => {
            let explicit = load_game(path)?;
            all_pass &= verify_one(&explicit, &path.display().to_string(), args.corrupt)?;
        }
        (None, Some(count)) => {
            let seed_base = args.seed.unwrap_or_else(env_seed);
            for fleet_game in fleet::standard_fleet(count, seed_base) {
                let explicit = generate(&fleet_game.spec())?;
                let label = format!("game {}", fleet_game.game_id);
                all_pass &= verify_one(&explicit, &label, args.corrupt)?;
            }
        }
        _ => anyhow::bail!("pass a game file or --fleet COUNT"),
    }
    if all_pass {
        println!("verify: pass");
        Ok(0)
    } else {
        println!("verify: FAIL");
        Ok(EXIT_MISMATCH)
    }
}

fn cmd_bench(args: BenchArgs) -> anyhow::Result<u8> {
    let seed_base = args.seed.unwrap_or_else(env_seed);
    let options = args.limits.options();
    let mut records: Vec<BenchRecord> = Vec::new();
    for fleet_game in fleet::standard_fleet(args.count, seed_base) {
        records.extend(fleet::run_game(
            &fleet_game,
            &Algorithm::ALL,
            &options,
            args.limits.node_budget,
        ));
    }
    let csv = fleet::to_csv(&records);
    match &args.out {
        Some(path) => fs::write(path, &csv)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?,
        None => print!("{csv}"),
    }
    print_summary(&records);
    Ok(0)
}

/// Markdown table of cumulative times and outcome counts per class and
/// algorithm.
fn print_summary(records: &[BenchRecord]) {
    let mut cells: BTreeMap<(String, &str), (Duration, u64, u64, u64)> = BTreeMap::new();
    for r in records {
        let cell = cells
            .entry((r.class.to_string(), r.algorithm.name()))
            .or_default();
        cell.0 += r.time;
        match r.outcome {
            RecordedOutcome::Solved => cell.1 += 1,
            RecordedOutcome::Timeout => cell.2 += 1,
            RecordedOutcome::OutOfMemory => cell.3 += 1,
        }
    }
    println!();
    println!("| class | algorithm | total_ms | solved | timeout | oom |");
    println!("|-------|-----------|----------|--------|---------|-----|");
    for ((class, algorithm), (time, solved, timeout, oom)) in cells {
        println!(
            "| {class} | {algorithm} | {} | {solved} | {timeout} | {oom} |",
            time.as_millis()
        );
    }
}
