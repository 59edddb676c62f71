//! The automata-based solver: a mutual recursion between `Win` and `FP`
//! over visiting/avoiding vertex sets, one level per priority of the
//! compressed game.
//!
//! Transcribed from the published listing, including its argument swap
//! between the caller's visiting/avoiding sets and the callee's parameters;
//! the published prose and listing disagree in places, so this exact variant
//! is the one pinned down by the oracle test fleet.

use crate::bdd::BddRef;
use crate::ops;
use crate::pgsolver::Player;
use crate::solvers::{Deadline, SolveError, SolverOptions, SolverStats};
use crate::symbolic::{Solution, SymbolicGame};

struct Apt<'a> {
    game: &'a SymbolicGame,
    min_priority: i64,
    deadline: &'a Deadline,
    stats: &'a mut SolverStats,
}

impl Apt<'_> {
    fn win(
        &mut self,
        alpha: Player,
        i: i64,
        visiting: &BddRef,
        avoiding: &BddRef,
    ) -> Result<BddRef, SolveError> {
        self.stats.win_calls += 1;
        if i >= self.min_priority {
            let fp = self.fp(alpha.opponent(), i, visiting, avoiding)?;
            Ok(self.game.without(&fp)?)
        } else {
            Ok(ops::pre(self.game, alpha, visiting)?)
        }
    }

    fn fp(
        &mut self,
        alpha: Player,
        i: i64,
        visiting: &BddRef,
        avoiding: &BddRef,
    ) -> Result<BddRef, SolveError> {
        let m = self.game.manager();
        let f = self
            .game
            .priorities()
            .block(i as u32)
            .cloned()
            .unwrap_or_else(|| self.game.ff());
        let mut x = self.game.ff();
        let mut y = self.win(alpha, i - 1, &m.or(avoiding, &f)?, visiting)?;
        while y != x {
            self.deadline.check()?;
            self.stats.fp_iterations += 1;
            x = y;
            let next_visiting = m.or(avoiding, &m.and(&f, &x)?)?;
            let next_avoiding = m.or(visiting, &m.diff(&f, &x)?)?;
            y = self.win(alpha, i - 1, &next_visiting, &next_avoiding)?;
        }
        Ok(x)
    }
}

pub fn solve(
    game: &SymbolicGame,
    _options: &SolverOptions,
    deadline: &Deadline,
) -> Result<(Solution, SolverStats), SolveError> {
    let compressed = game.compress_priorities()?;
    let mut stats = SolverStats::default();
    let (min_priority, max_priority) = match (
        compressed.priorities().min_priority(),
        compressed.priorities().max_priority(),
    ) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            let solution = Solution { w0: game.ff(), w1: game.ff() };
            return Ok((solution, stats));
        }
    };
    let alpha = Player::from_index(((max_priority + 1) % 2) as u64).expect("0 or 1");
    let x = {
        let mut run = Apt {
            game: &compressed,
            min_priority: min_priority as i64,
            deadline,
            stats: &mut stats,
        };
        let empty = compressed.ff();
        run.win(alpha, max_priority as i64, &empty, &empty)?
    };
    let rest = compressed.without(&x)?;
    let solution = match alpha {
        Player::Even => Solution { w0: x, w1: rest },
        Player::Odd => Solution { w0: rest, w1: x },
    };
    Ok((solution, stats))
}
