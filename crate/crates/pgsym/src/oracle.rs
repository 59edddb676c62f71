//! Explicit-state reference solvers used as ground truth for the symbolic
//! algorithms: a recursive attractor-based solver for games of any size, and
//! a positional-strategy enumeration for very small games that grounds the
//! recursive solver itself.

use thiserror::Error;

use crate::pgsolver::{ExplicitGame, Player};

/// Winner partition over explicit ids, both sides sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitSolution {
    pub w0: Vec<u64>,
    pub w1: Vec<u64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("game has {vertices} vertices, brute force is limited to {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("{strategies} player-0 strategies exceed the enumeration budget")]
    TooManyStrategies { strategies: u128 },
}

/// Index-based view of an explicit game with predecessor lists.
struct Graph {
    ids: Vec<u64>,
    priority: Vec<u32>,
    owner: Vec<Player>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Graph {
    fn new(game: &ExplicitGame) -> Graph {
        let id_index = game.id_index();
        let n = game.vertices().len();
        let mut g = Graph {
            ids: game.vertices().iter().map(|v| v.id).collect(),
            priority: game.vertices().iter().map(|v| v.priority).collect(),
            owner: game.vertices().iter().map(|v| v.owner).collect(),
            succ: vec![Vec::new(); n],
            pred: vec![Vec::new(); n],
        };
        for (i, v) in game.vertices().iter().enumerate() {
            for s in &v.successors {
                let j = id_index[s];
                g.succ[i].push(j);
                g.pred[j].push(i);
            }
        }
        g
    }

    fn len(&self) -> usize {
        self.ids.len()
    }

    /// BFS attractor of `target` for `player` within `alive`, by counting
    /// down each opponent vertex's live successors.
    fn attractor(&self, player: Player, target: &[bool], alive: &[bool]) -> Vec<bool> {
        let mut out_degree = vec![0usize; self.len()];
        for i in 0..self.len() {
            if alive[i] {
                out_degree[i] = self.succ[i].iter().filter(|&&j| alive[j]).count();
            }
        }
        let mut attracted = vec![false; self.len()];
        let mut queue: Vec<usize> = Vec::new();
        for i in 0..self.len() {
            if alive[i] && target[i] {
                attracted[i] = true;
                queue.push(i);
            }
        }
        while let Some(i) = queue.pop() {
            for &p in &self.pred[i] {
                if !alive[p] || attracted[p] {
                    continue;
                }
                let pulled = if self.owner[p] == player {
                    true
                } else {
                    out_degree[p] -= 1;
                    out_degree[p] == 0
                };
                if pulled {
                    attracted[p] = true;
                    queue.push(p);
                }
            }
        }
        attracted
    }

    fn zielonka(&self, alive: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let m = match (0..self.len()).filter(|&i| alive[i]).map(|i| self.priority[i]).max() {
            Some(m) => m,
            None => return (vec![false; self.len()], vec![false; self.len()]),
        };
        let alpha = Player::of_priority(m);
        let target: Vec<bool> = (0..self.len())
            .map(|i| alive[i] && self.priority[i] == m)
            .collect();
        let a = self.attractor(alpha, &target, alive);
        let rest: Vec<bool> = (0..self.len()).map(|i| alive[i] && !a[i]).collect();
        let (w0, w1) = self.zielonka(&rest);
        let (ours, theirs) = match alpha {
            Player::Even => (w0, w1),
            Player::Odd => (w1, w0),
        };
        let b = self.attractor(alpha.opponent(), &theirs, alive);
        if b == theirs {
            let mut winning = ours;
            for i in 0..self.len() {
                winning[i] |= a[i];
            }
            return match alpha {
                Player::Even => (winning, b),
                Player::Odd => (b, winning),
            };
        }
        let rest: Vec<bool> = (0..self.len()).map(|i| alive[i] && !b[i]).collect();
        let (w0, w1) = self.zielonka(&rest);
        match alpha {
            Player::Even => {
                let mut w1 = w1;
                for i in 0..self.len() {
                    w1[i] |= b[i];
                }
                (w0, w1)
            }
            Player::Odd => {
                let mut w0 = w0;
                for i in 0..self.len() {
                    w0[i] |= b[i];
                }
                (w0, w1)
            }
        }
    }

    fn solution(&self, w0: &[bool]) -> ExplicitSolution {
        let mut s = ExplicitSolution { w0: Vec::new(), w1: Vec::new() };
        for i in 0..self.len() {
            if w0[i] {
                s.w0.push(self.ids[i]);
            } else {
                s.w1.push(self.ids[i]);
            }
        }
        s.w0.sort_unstable();
        s.w1.sort_unstable();
        s
    }
}

/// Attractor-based recursive solver on the explicit graph.
pub fn solve_explicit_zielonka(game: &ExplicitGame) -> ExplicitSolution {
    let g = Graph::new(game);
    let alive = vec![true; g.len()];
    let (w0, _) = g.zielonka(&alive);
    g.solution(&w0)
}

/// Hard cap on vertices for strategy enumeration.
pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 10;
const BRUTE_FORCE_STRATEGY_LIMIT: u128 = 1 << 24;

/// Ground-truth solver by enumerating every positional strategy of player 0.
///
/// A vertex is won by player 0 iff some strategy leaves player 1 no path to
/// a cycle whose maximal priority is odd. Positional determinacy makes this
/// the definitional answer, at exponential cost — hence the vertex limit.
pub fn solve_bruteforce(game: &ExplicitGame) -> Result<ExplicitSolution, OracleError> {
    let g = Graph::new(game);
    let n = g.len();
    if n > BRUTE_FORCE_VERTEX_LIMIT {
        return Err(OracleError::TooLarge { vertices: n, limit: BRUTE_FORCE_VERTEX_LIMIT });
    }
    let choosers: Vec<usize> = (0..n).filter(|&i| g.owner[i] == Player::Even).collect();
    let strategies: u128 = choosers.iter().map(|&i| g.succ[i].len() as u128).product();
    if strategies > BRUTE_FORCE_STRATEGY_LIMIT {
        return Err(OracleError::TooManyStrategies { strategies });
    }

    let mut w0 = vec![false; n];
    let mut choice = vec![0usize; choosers.len()];
    loop {
        // edges of the strategy-restricted graph, as adjacency bitmasks
        let mut adj = vec![0u16; n];
        let mut pick = choice.iter();
        for i in 0..n {
            if g.owner[i] == Player::Even {
                adj[i] = 1 << g.succ[i][*pick.next().unwrap()];
            } else {
                for &j in &g.succ[i] {
                    adj[i] |= 1 << j;
                }
            }
        }
        let bad = odd_cycle_vertices(&g, &adj);
        let losing = can_reach(&adj, bad);
        for i in 0..n {
            w0[i] |= losing & (1 << i) == 0;
        }
        // next strategy, odometer style
        let mut k = 0;
        loop {
            if k == choosers.len() {
                return Ok(g.solution(&w0));
            }
            choice[k] += 1;
            if choice[k] < g.succ[choosers[k]].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Vertices lying on a cycle whose maximal priority is odd, in the
/// strategy-restricted graph given by `adj`.
fn odd_cycle_vertices(g: &Graph, adj: &[u16]) -> u16 {
    let n = g.len();
    let mut bad = 0u16;
    for q in 0..n {
        if g.priority[q] % 2 == 0 {
            continue;
        }
        // restrict to vertices with priority <= p(q); q on a cycle there
        // means a cycle whose maximum is exactly p(q) (or odd anyway)
        let allowed: u16 = (0..n)
            .filter(|&i| g.priority[i] <= g.priority[q])
            .map(|i| 1u16 << i)
            .sum();
        let restricted: Vec<u16> = (0..n).map(|i| adj[i] & allowed).collect();
        // can q reach itself in >= 1 step within the restriction?
        let from_q = reachable(&restricted, restricted[q]);
        if from_q & (1 << q) != 0 {
            bad |= 1 << q;
        }
    }
    bad
}

/// Bitmask of vertices that can reach `targets` in zero or more steps.
fn can_reach(adj: &[u16], targets: u16) -> u16 {
    let mut seen = targets;
    loop {
        let mut next = seen;
        for (i, &out) in adj.iter().enumerate() {
            if out & seen != 0 {
                next |= 1 << i;
            }
        }
        if next == seen {
            return seen;
        }
        seen = next;
    }
}

/// Bitmask of vertices reachable (in zero or more steps) from `start`.
fn reachable(adj: &[u16], start: u16) -> u16 {
    let mut seen = start;
    loop {
        let mut next = seen;
        for (i, &out) in adj.iter().enumerate() {
            if seen & (1 << i) != 0 {
                next |= out;
            }
        }
        if next == seen {
            return seen;
        }
        seen = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate, GenSpec};
    use crate::pgsolver::parse_pgsolver;
    use crate::sample;

    #[test]
    fn zielonka_solves_reference_game() {
        let solution = solve_explicit_zielonka(&sample::eight_vertex_game());
        assert_eq!(solution.w0, sample::W0_IDS);
        assert_eq!(solution.w1, sample::W1_IDS);
    }

    #[test]
    fn bruteforce_solves_reference_game() {
        let solution = solve_bruteforce(&sample::eight_vertex_game()).unwrap();
        assert_eq!(solution.w0, sample::W0_IDS);
        assert_eq!(solution.w1, sample::W1_IDS);
    }

    #[test]
    fn single_even_self_loop_won_by_even() {
        let game = parse_pgsolver("0 0 0 0;").unwrap();
        let solution = solve_explicit_zielonka(&game);
        assert_eq!(solution.w0, vec![0]);
        assert!(solution.w1.is_empty());
    }

    #[test]
    fn two_vertex_cycle_won_by_max_parity() {
        // unique cycle has maximum 2, even: both vertices go to player 0
        let game = parse_pgsolver("0 1 1 1; 1 2 0 0;").unwrap();
        let solution = solve_explicit_zielonka(&game);
        assert_eq!(solution.w0, vec![0, 1]);
        let brute = solve_bruteforce(&game).unwrap();
        assert_eq!(solution, brute);
    }

    #[test]
    fn bruteforce_rejects_large_games() {
        let game = generate(&GenSpec {
            vertices: 11,
            priority_bound: 3,
            min_degree: 1,
            max_degree: 2,
            self_loop_free: false,
            seed: 0,
        })
        .unwrap();
        assert_eq!(
            solve_bruteforce(&game).unwrap_err(),
            OracleError::TooLarge { vertices: 11, limit: 10 }
        );
    }

    #[test]
    fn oracles_agree_on_random_small_games() {
        for seed in 0..300u64 {
            let spec = GenSpec {
                vertices: 1 + seed % 10,
                priority_bound: 1 + seed % 8,
                min_degree: 1,
                max_degree: 3,
                self_loop_free: false,
                seed: seed.wrapping_mul(0x9E37),
            };
            let game = generate(&spec).unwrap();
            let zielonka = solve_explicit_zielonka(&game);
            let brute = solve_bruteforce(&game).unwrap();
            assert_eq!(zielonka, brute, "disagreement on seed {seed}");
            let all: Vec<u64> = game.vertices().iter().map(|v| v.id).collect();
            let mut union = zielonka.w0.clone();
            union.extend(&zielonka.w1);
            union.sort_unstable();
            assert_eq!(union, all);
        }
    }
}
