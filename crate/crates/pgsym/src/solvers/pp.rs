//! Priority promotion: repeatedly runs a dominion searcher on the undecided
//! part of the game, removing each dominion it finds.
//!
//! The searcher walks quasi-dominions ("regions") downward through the
//! priorities; a region that is closed in the current state but open in the
//! whole game gets promoted to its best escape priority, resetting all
//! information below.

use crate::ops;
use crate::pgsolver::Player;
use crate::solvers::{Deadline, SolveError, SolverOptions, SolverStats};
use crate::symbolic::{Solution, SymbolicGame};

pub fn solve(
    game: &SymbolicGame,
    options: &SolverOptions,
    deadline: &Deadline,
) -> Result<(Solution, SolverStats), SolveError> {
    let m = game.manager();
    let mut stats = SolverStats::default();
    let mut w0 = game.ff();
    let mut w1 = game.ff();
    let mut undecided = game.vertices().clone();
    while !undecided.is_false() {
        deadline.check()?;
        let view = game.subgame(&undecided)?;
        let (winner, dominion) = search_dominion(&view, options, deadline, &mut stats)?;
        match winner {
            Player::Even => w0 = m.or(&w0, &dominion)?,
            Player::Odd => w1 = m.or(&w1, &dominion)?,
        }
        undecided = m.diff(&undecided, &dominion)?;
    }
    Ok((Solution { w0, w1 }, stats))
}

/// One searcher run on `game` (the subgame of undecided vertices). Returns
/// the owning player and a dominion for them.
fn search_dominion(
    game: &SymbolicGame,
    options: &SolverOptions,
    deadline: &Deadline,
    stats: &mut SolverStats,
) -> Result<(Player, crate::bdd::BddRef), SolveError> {
    let m = game.manager();
    let original = game.priorities().clone();
    let mut p_g = original.clone();
    let mut m_g = original.max_priority().expect("searcher needs a nonempty game");
    let mut v_g = game.vertices().clone();
    loop {
        deadline.check()?;
        stats.searcher_iterations += 1;
        let alpha = Player::of_priority(m_g);
        let block = m.and(p_g.block(m_g).expect("m_g in domain"), &v_g)?;
        let a = ops::confined_attractor(game, alpha, &block, &v_g, deadline)?;
        if ops::escape(game, alpha.opponent(), &a)?.is_false() {
            // closed in the whole game: a genuine dominion for alpha
            let dominion = ops::attractor(game, alpha, &a, deadline)?;
            if options.check_invariants {
                debug_assert!(
                    ops::escape(game, alpha.opponent(), &dominion)?.is_false(),
                    "dominions must be closed for the opponent"
                );
            }
            return Ok((alpha, dominion));
        }
        let view = game.subgame(&v_g)?;
        if !ops::escape(&view, alpha.opponent(), &a)?.is_false() {
            // open in the current state: record the region, descend
            p_g = ops::promote_assign(game, &p_g, &a, m_g)?;
            v_g = m.diff(&v_g, &a)?;
            let mut next = None;
            for &(p, ref b) in p_g.entries().iter().rev() {
                if p < m_g && !m.and(b, &v_g)?.is_false() {
                    next = Some(p);
                    break;
                }
            }
            m_g = next.expect("an open region leaves lower priorities behind");
        } else {
            // closed in the current state: promote to the best escape
            let target = ops::bep(game, alpha.opponent(), &p_g, &a)?;
            assert!(target > m_g, "promotion must move strictly upward");
            stats.promotions += 1;
            p_g = ops::promote_reset(game, &original, &p_g, &a, target)?;
            m_g = target;
            v_g = p_g.union_at_most(m, m_g)?;
        }
    }
}
