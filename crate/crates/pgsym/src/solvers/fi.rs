//! Fixpoint iteration: evaluates the Walukiewicz formula by iterating one
//! variable per priority. The game is compressed first so the priorities form
//! an integer interval starting at 0 or 1; variables of even priority start
//! at V (greatest fixpoints), odd ones at the empty set (least fixpoints).

use crate::bdd::BddRef;
use crate::ops;
use crate::solvers::{Deadline, SolveError, SolverOptions, SolverStats};
use crate::symbolic::{Solution, SymbolicGame};

pub fn solve(
    game: &SymbolicGame,
    options: &SolverOptions,
    deadline: &Deadline,
) -> Result<(Solution, SolverStats), SolveError> {
    let compressed = game.compress_priorities()?;
    let m = compressed.manager();
    let mut stats = SolverStats::default();
    let labels: Vec<u32> = compressed.priorities().entries().iter().map(|&(p, _)| p).collect();
    let d = labels.len();
    if d == 0 {
        let solution = Solution { w0: game.ff(), w1: game.ff() };
        return Ok((solution, stats));
    }
    let init = |label: u32| -> BddRef {
        if label % 2 == 0 {
            compressed.vertices().clone()
        } else {
            compressed.ff()
        }
    };
    let mut x: Vec<BddRef> = labels.iter().map(|&l| init(l)).collect();
    let mut x_prev = x.clone();
    loop {
        deadline.check()?;
        stats.fixpoint_iterations += 1;
        x_prev[0] = x[0].clone();
        x[0] = ops::diamond_box(&compressed, &x)?;
        let mut i = 0;
        while x[i] == x_prev[i] && i < d - 1 {
            i += 1;
            x_prev[i] = x[i].clone();
            x[i] = x[i - 1].clone();
        }
        // everything below the carried index restarts; with the optimization
        // only the variables of the opposite fixpoint kind do, the rest keep
        // their (monotonically grown or shrunk) values
        let step = if options.fi_reset_optimization { 2 } else { 1 };
        let mut k = i as isize - 1;
        while k >= 0 {
            let fresh = init(labels[k as usize]);
            if x[k as usize] != fresh {
                x[k as usize] = fresh;
                stats.resets += 1;
            }
            k -= step as isize;
        }
        if i == d - 1 && x[i] == x_prev[i] {
            break;
        }
    }
    let w0 = x[d - 1].clone();
    let w1 = m.diff(compressed.vertices(), &w0)?;
    Ok((Solution { w0, w1 }, stats))
}

#[cfg(test)]
mod tests {
    use crate::sample;
    use crate::solvers::tests_support::{assert_matches_oracle, solve_ids};
    use crate::solvers::{Algorithm, Outcome};

    #[test]
    fn solves_reference_game() {
        let game = crate::symbolic::SymbolicGame::encode(&sample::eight_vertex_game()).unwrap();
        let (w0, w1) = solve_ids(&game, Algorithm::FixpointIteration);
        assert_eq!(w0, sample::W0_IDS);
        assert_eq!(w1, sample::W1_IDS);
    }

    #[test]
    fn all_even_game_in_one_sweep() {
        let explicit = crate::pgsolver::parse_pgsolver("0 0 0 1; 1 0 1 0;").unwrap();
        let game = crate::symbolic::SymbolicGame::encode(&explicit).unwrap();
        let (w0, w1) = solve_ids(&game, Algorithm::FixpointIteration);
        assert_eq!(w0, vec![0, 1]);
        assert!(w1.is_empty());
    }

    #[test]
    fn reset_optimization_is_observationally_equal() {
        let opts_plain = crate::solvers::SolverOptions::default();
        let opts_fast = crate::solvers::SolverOptions {
            fi_reset_optimization: true,
            ..crate::solvers::SolverOptions::default()
        };
        for seed in 0..60u64 {
            let explicit = crate::generator::generate(&crate::generator::GenSpec {
                vertices: 2 + seed % 16,
                priority_bound: 1 + seed % 7,
                min_degree: 1,
                max_degree: 3,
                self_loop_free: false,
                seed: seed + 7777,
            })
            .unwrap();
            let game = crate::symbolic::SymbolicGame::encode(&explicit).unwrap();
            let plain = crate::solvers::solve(&game, Algorithm::FixpointIteration, &opts_plain);
            let fast = crate::solvers::solve(&game, Algorithm::FixpointIteration, &opts_fast);
            match (plain, fast) {
                (
                    Outcome::Solved { solution: a, stats: sa },
                    Outcome::Solved { solution: b, stats: sb },
                ) => {
                    assert_eq!(a, b, "seed {seed}");
                    assert!(sb.resets <= sa.resets);
                }
                other => panic!("expected two solutions, got {other:?}"),
            }
        }
    }

    #[test]
    fn agrees_with_oracle_on_random_games() {
        assert_matches_oracle(Algorithm::FixpointIteration, 200, 5000);
    }
}
