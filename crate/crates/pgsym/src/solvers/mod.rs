//! The four symbolic solving algorithms and their shared control plumbing:
//! cooperative timeouts, out-of-memory propagation, per-run statistics.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::bdd::BddError;
use crate::symbolic::{Solution, SymbolicGame};

pub mod apt;
pub mod fi;
pub mod pp;
pub mod zielonka;

/// Why a run did not produce a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveError {
    Timeout,
    OutOfMemory,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Timeout => write!(f, "timeout"),
            SolveError::OutOfMemory => write!(f, "node budget exhausted"),
        }
    }
}

impl std::error::Error for SolveError {}

impl From<BddError> for SolveError {
    fn from(e: BddError) -> Self {
        match e {
            BddError::NodeBudgetExceeded { .. } => SolveError::OutOfMemory,
            // any other BDD failure inside a solver is a bug, not a resource
            // limit — surface it loudly
            other => panic!("unexpected BDD failure during solving: {other}"),
        }
    }
}

/// Cooperative wall-clock limit, polled between fixpoint iterations.
#[derive(Debug, Clone, Copy)]
pub struct Deadline {
    expires: Option<Instant>,
}

impl Deadline {
    pub fn none() -> Self {
        Deadline { expires: None }
    }

    pub fn after(limit: Duration) -> Self {
        Deadline { expires: Some(Instant::now() + limit) }
    }

    pub fn check(&self) -> Result<(), SolveError> {
        match self.expires {
            Some(at) if Instant::now() >= at => Err(SolveError::Timeout),
            _ => Ok(()),
        }
    }
}

/// Per-run counters; each algorithm fills its own fields and leaves the rest
/// at zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolverStats {
    /// Zielonka: recursion steps taken (explicit-stack frames entered).
    pub recursive_calls: u64,
    /// PP: promotions performed by the dominion searcher.
    pub promotions: u64,
    /// PP: searcher loop iterations across all searcher invocations.
    pub searcher_iterations: u64,
    /// FI: diamond-box evaluations (innermost fixpoint iterations).
    pub fixpoint_iterations: u64,
    /// FI: variable resets performed while carrying stabilized values upward.
    pub resets: u64,
    /// APT: calls to Win.
    pub win_calls: u64,
    /// APT: FP loop iterations.
    pub fp_iterations: u64,
    /// High-water mark of live BDD nodes during the run.
    pub peak_live_nodes: usize,
    /// Wall-clock duration of the run.
    pub wall_time: Duration,
}

/// Knobs shared by all algorithms.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Wall-clock limit; `None` means unlimited.
    pub timeout: Option<Duration>,
    /// Run expensive structural checks (subgame totality, partition checks)
    /// on intermediate results.
    pub check_invariants: bool,
    /// FI only: reset only the variables of opposite parity below a carried
    /// index instead of all lower variables.
    pub fi_reset_optimization: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            timeout: None,
            check_invariants: cfg!(debug_assertions),
            fi_reset_optimization: false,
        }
    }
}

impl SolverOptions {
    pub(crate) fn deadline(&self) -> Deadline {
        match self.timeout {
            Some(limit) => Deadline::after(limit),
            None => Deadline::none(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Zielonka,
    PriorityPromotion,
    FixpointIteration,
    Apt,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Zielonka,
        Algorithm::PriorityPromotion,
        Algorithm::FixpointIteration,
        Algorithm::Apt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Zielonka => "zielonka",
            Algorithm::PriorityPromotion => "pp",
            Algorithm::FixpointIteration => "fi",
            Algorithm::Apt => "apt",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zielonka" => Ok(Algorithm::Zielonka),
            "pp" => Ok(Algorithm::PriorityPromotion),
            "fi" => Ok(Algorithm::FixpointIteration),
            "apt" => Ok(Algorithm::Apt),
            other => Err(format!(
                "unknown algorithm {other:?} (expected zielonka, pp, fi or apt)"
            )),
        }
    }
}

/// Result of one solver run.
#[derive(Debug, Clone)]
pub enum Outcome {
    Solved { solution: Solution, stats: SolverStats },
    Timeout,
    OutOfMemory,
}

impl Outcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            Outcome::Solved { solution, .. } => Some(solution),
            _ => None,
        }
    }
}

/// Runs `algorithm` on `game` under `options`, folding resource-limit errors
/// into the outcome and attaching wall time and the node high-water mark.
pub fn solve(game: &SymbolicGame, algorithm: Algorithm, options: &SolverOptions) -> Outcome {
    let deadline = options.deadline();
    let start = Instant::now();
    let result = match algorithm {
        Algorithm::Zielonka => zielonka::solve(game, options, &deadline),
        Algorithm::PriorityPromotion => pp::solve(game, options, &deadline),
        Algorithm::FixpointIteration => fi::solve(game, options, &deadline),
        Algorithm::Apt => apt::solve(game, options, &deadline),
    };
    match result {
        Ok((solution, mut stats)) => {
            stats.wall_time = start.elapsed();
            stats.peak_live_nodes = game.manager().peak_live_nodes();
            debug_assert!(partition_holds(game, &solution));
            Outcome::Solved { solution, stats }
        }
        Err(SolveError::Timeout) => Outcome::Timeout,
        Err(SolveError::OutOfMemory) => Outcome::OutOfMemory,
    }
}

fn partition_holds(game: &SymbolicGame, solution: &Solution) -> bool {
    let m = game.manager();
    let overlap = m.and(&solution.w0, &solution.w1);
    let union = m.or(&solution.w0, &solution.w1);
    matches!((overlap, union), (Ok(o), Ok(u)) if o.is_false() && &u == game.vertices())
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;
    use crate::generator::{generate, GenSpec};
    use crate::oracle;

    /// Solves and decodes; panics on anything but a clean solution.
    pub(crate) fn solve_ids(game: &SymbolicGame, algorithm: Algorithm) -> (Vec<u64>, Vec<u64>) {
        match solve(game, algorithm, &SolverOptions::default()) {
            Outcome::Solved { solution, .. } => (
                game.decode_set(&solution.w0).unwrap(),
                game.decode_set(&solution.w1).unwrap(),
            ),
            other => panic!("expected a solution, got {other:?}"),
        }
    }

    /// Runs `algorithm` on `count` seeded random games of assorted shapes and
    /// compares against the explicit reference solver.
    pub(crate) fn assert_matches_oracle(algorithm: Algorithm, count: u64, seed_base: u64) {
        for k in 0..count {
            let seed = seed_base + k;
            let spec = GenSpec {
                vertices: 1 + k % 24,
                priority_bound: 1 + k % 9,
                min_degree: 1,
                max_degree: 1 + k % 4,
                self_loop_free: k % 3 == 0 && k % 24 > 0,
                seed,
            };
            let explicit = generate(&spec).unwrap();
            let expected = oracle::solve_explicit_zielonka(&explicit);
            let game = SymbolicGame::encode(&explicit).unwrap();
            let (w0, w1) = solve_ids(&game, algorithm);
            assert_eq!(w0, expected.w0, "{algorithm} W0 differs on seed {seed}");
            assert_eq!(w1, expected.w1, "{algorithm} W1 differs on seed {seed}");
        }
    }
}
