//! Recursive attractor-based solver, run on an explicit work stack so that
//! games with long priority chains cannot exhaust the call stack.

use crate::bdd::BddRef;
use crate::ops;
use crate::pgsolver::Player;
use crate::solvers::{Deadline, SolveError, SolverOptions, SolverStats};
use crate::symbolic::{Solution, SymbolicGame};

enum Frame {
    Solve(SymbolicGame),
    /// Waiting for the subgame without the top attractor `a`.
    AfterFirst { game: SymbolicGame, alpha: Player, a: BddRef },
    /// Waiting for the subgame without the opponent attractor `b`.
    AfterSecond { alpha: Player, b: BddRef },
}

pub fn solve(
    game: &SymbolicGame,
    options: &SolverOptions,
    deadline: &Deadline,
) -> Result<(Solution, SolverStats), SolveError> {
    let m = game.manager();
    let mut stats = SolverStats::default();
    let mut work = vec![Frame::Solve(game.clone())];
    let mut results: Vec<Solution> = Vec::new();
    while let Some(frame) = work.pop() {
        deadline.check()?;
        match frame {
            Frame::Solve(current) => {
                stats.recursive_calls += 1;
                if options.check_invariants && !current.vertices().is_false() {
                    debug_assert!(current.validate()?.is_ok(), "subgame must stay total");
                }
                let top = match current.priorities().max_priority() {
                    Some(p) => p,
                    None => {
                        results.push(Solution { w0: current.ff(), w1: current.ff() });
                        continue;
                    }
                };
                let alpha = Player::of_priority(top);
                let block = current.priorities().block(top).expect("max block exists");
                let a = ops::attractor(&current, alpha, block, deadline)?;
                let rest = current.subgame_without(&a)?;
                work.push(Frame::AfterFirst { game: current, alpha, a });
                work.push(Frame::Solve(rest));
            }
            Frame::AfterFirst { game: current, alpha, a } => {
                let sub = results.pop().expect("subgame solved");
                let theirs = sub.winning_region(alpha.opponent());
                let b = ops::attractor(&current, alpha.opponent(), theirs, deadline)?;
                if &b == theirs {
                    let ours = m.or(&a, sub.winning_region(alpha))?;
                    results.push(assemble(alpha, ours, b));
                } else {
                    let rest = current.subgame_without(&b)?;
                    work.push(Frame::AfterSecond { alpha, b });
                    work.push(Frame::Solve(rest));
                }
            }
            Frame::AfterSecond { alpha, b } => {
                let sub = results.pop().expect("subgame solved");
                let theirs = m.or(sub.winning_region(alpha.opponent()), &b)?;
                results.push(assemble(alpha, sub.winning_region(alpha).clone(), theirs));
            }
        }
    }
    let solution = results.pop().expect("root solved");
    debug_assert!(results.is_empty());
    Ok((solution, stats))
}

fn assemble(alpha: Player, ours: BddRef, theirs: BddRef) -> Solution {
    match alpha {
        Player::Even => Solution { w0: ours, w1: theirs },
        Player::Odd => Solution { w0: theirs, w1: ours },
    }
}

#[cfg(test)]
mod tests {
    use crate::sample;
    use crate::solvers::tests_support::{assert_matches_oracle, solve_ids};
    use crate::solvers::Algorithm;

    #[test]
    fn solves_reference_game() {
        let game = crate::symbolic::SymbolicGame::encode(&sample::eight_vertex_game()).unwrap();
        let (w0, w1) = solve_ids(&game, Algorithm::Zielonka);
        assert_eq!(w0, sample::W0_IDS);
        assert_eq!(w1, sample::W1_IDS);
    }

    #[test]
    fn solves_single_even_self_loop() {
        let explicit = crate::pgsolver::parse_pgsolver("0 0 0 0;").unwrap();
        let game = crate::symbolic::SymbolicGame::encode(&explicit).unwrap();
        let (w0, w1) = solve_ids(&game, Algorithm::Zielonka);
        assert_eq!(w0, vec![0]);
        assert!(w1.is_empty());
    }

    #[test]
    fn agrees_with_oracle_on_random_games() {
        assert_matches_oracle(Algorithm::Zielonka, 200, 3000);
    }
}
