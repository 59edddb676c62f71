//! Benchmark fleets: named random-game classes, per-run records and CSV
//! output, shared by the command line tools and the acceptance suite.

use std::fmt;
use std::time::Duration;

use crate::generator::{GenSpec, SplitMix64};
use crate::solvers::{self, Algorithm, Outcome, SolverOptions};
use crate::symbolic::SymbolicGame;

/// The random-game families measured: sparse and dense games with as many
/// priorities as vertices, and dense games whose priority count grows only
/// logarithmically in the vertex count (base 2, e, 10 or 13).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameClass {
    LowDegree,
    Dense,
    Exponential(ExpBase),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpBase {
    Two,
    E,
    Ten,
    Thirteen,
}

impl ExpBase {
    fn ln(self) -> f64 {
        match self {
            ExpBase::Two => 2f64.ln(),
            ExpBase::E => 1.0,
            ExpBase::Ten => 10f64.ln(),
            ExpBase::Thirteen => 13f64.ln(),
        }
    }
}

impl fmt::Display for GameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameClass::LowDegree => write!(f, "low-degree"),
            GameClass::Dense => write!(f, "dense"),
            GameClass::Exponential(ExpBase::Two) => write!(f, "N=2^P"),
            GameClass::Exponential(ExpBase::E) => write!(f, "N=e^P"),
            GameClass::Exponential(ExpBase::Ten) => write!(f, "N=10^P"),
            GameClass::Exponential(ExpBase::Thirteen) => write!(f, "N=13^P"),
        }
    }
}

impl GameClass {
    /// Priority bound for a game of size `n` in this class.
    pub fn priority_bound(self, n: u64) -> u64 {
        match self {
            GameClass::LowDegree | GameClass::Dense => n,
            GameClass::Exponential(base) => {
                ((n as f64).ln() / base.ln()).round().max(1.0) as u64
            }
        }
    }

    /// Generator parameters for one game of this class.
    pub fn spec(self, n: u64, seed: u64) -> GenSpec {
        let max_degree = match self {
            GameClass::LowDegree => 2,
            GameClass::Dense | GameClass::Exponential(_) => n,
        };
        GenSpec {
            vertices: n,
            priority_bound: self.priority_bound(n),
            min_degree: 1,
            max_degree,
            self_loop_free: true,
            seed,
        }
    }
}

/// One game of a fleet, identified by class, size and seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FleetGame {
    pub game_id: u64,
    pub class: GameClass,
    pub n: u64,
    pub seed: u64,
}

impl FleetGame {
    pub fn spec(&self) -> GenSpec {
        self.class.spec(self.n, self.seed)
    }
}

/// Result of one (game, algorithm) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub game_id: u64,
    pub class: GameClass,
    pub n: u64,
    pub p: u64,
    pub algorithm: Algorithm,
    pub outcome: RecordedOutcome,
    pub time: Duration,
    pub peak_nodes: usize,
    /// Order-independent hash of the decoded winning region of player 0;
    /// absent unless the run solved the game.
    pub solution_hash: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordedOutcome {
    Solved,
    Timeout,
    OutOfMemory,
}

impl fmt::Display for RecordedOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordedOutcome::Solved => write!(f, "solved"),
            RecordedOutcome::Timeout => write!(f, "timeout"),
            RecordedOutcome::OutOfMemory => write!(f, "oom"),
        }
    }
}

/// Order-independent hash of a winning region (XOR of mixed ids).
pub fn solution_hash(w0_ids: &[u64]) -> u64 {
    w0_ids
        .iter()
        .fold(0x57a7e0f5_u64, |acc, &id| acc ^ SplitMix64::new(id).next_u64())
}

/// Runs every algorithm on one fleet game. Each run gets a fresh manager so
/// node counts are per-run and runs cannot influence each other.
pub fn run_game(
    game: &FleetGame,
    algorithms: &[Algorithm],
    options: &SolverOptions,
    node_budget: Option<usize>,
) -> Vec<BenchRecord> {
    let explicit = crate::generator::generate(&game.spec()).expect("fleet specs are feasible");
    let p = game.class.priority_bound(game.n);
    let mut records = Vec::with_capacity(algorithms.len());
    for &algorithm in algorithms {
        let record = |outcome, time, peak_nodes, solution_hash| BenchRecord {
            game_id: game.game_id,
            class: game.class,
            n: game.n,
            p,
            algorithm,
            outcome,
            time,
            peak_nodes,
            solution_hash,
        };
        let symbolic = match SymbolicGame::encode_with(&explicit, node_budget) {
            Ok(g) => g,
            Err(_) => {
                records.push(record(RecordedOutcome::OutOfMemory, Duration::ZERO, 0, None));
                continue;
            }
        };
        records.push(match solvers::solve(&symbolic, algorithm, options) {
            Outcome::Solved { solution, stats } => {
                let w0 = symbolic.decode_set(&solution.w0).expect("W0 is a vertex set");
                record(
                    RecordedOutcome::Solved,
                    stats.wall_time,
                    stats.peak_live_nodes,
                    Some(solution_hash(&w0)),
                )
            }
            Outcome::Timeout => record(
                RecordedOutcome::Timeout,
                Duration::ZERO,
                symbolic.manager().peak_live_nodes(),
                None,
            ),
            Outcome::OutOfMemory => record(
                RecordedOutcome::OutOfMemory,
                Duration::ZERO,
                symbolic.manager().peak_live_nodes(),
                None,
            ),
        });
    }
    records
}

pub const CSV_HEADER: &str = "game_id,class,N,P,algorithm,outcome,time_ms,peak_nodes,solution_hash";

/// Renders records as CSV, header included.
pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let hash = r.solution_hash.map(|h| format!("{h:016x}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.game_id,
            r.class,
            r.n,
            r.p,
            r.algorithm,
            r.outcome,
            r.time.as_millis(),
            r.peak_nodes,
            hash,
        ));
    }
    out
}

/// A deterministic mixed fleet: sizes 8..=64 across all classes. Games small
/// enough for strategy enumeration (at most 10 vertices) come only from the
/// low-degree class, keeping the enumeration cheap. The classes with as many
/// priorities as vertices stay small: the fixpoint-style solvers degrade
/// steeply in the number of distinct priorities, and a fleet game must be
/// solvable by all four algorithms.
pub fn standard_fleet(count: u64, seed_base: u64) -> Vec<FleetGame> {
    const CELLS: &[(GameClass, u64)] = &[
        (GameClass::LowDegree, 8),
        (GameClass::LowDegree, 10),
        (GameClass::Dense, 12),
        (GameClass::Exponential(ExpBase::Two), 16),
        (GameClass::LowDegree, 12),
        (GameClass::Exponential(ExpBase::E), 24),
        (GameClass::Dense, 14),
        (GameClass::Exponential(ExpBase::Ten), 32),
        (GameClass::LowDegree, 14),
        (GameClass::Exponential(ExpBase::Thirteen), 48),
        (GameClass::Dense, 16),
        (GameClass::Exponential(ExpBase::Two), 64),
        (GameClass::LowDegree, 16),
        (GameClass::Exponential(ExpBase::Ten), 64),
    ];
    (0..count)
        .map(|k| {
            let (class, n) = CELLS[(k % CELLS.len() as u64) as usize];
            FleetGame { game_id: k, class, n, seed: seed_base + k }
        })
        .collect()
}
