//! Set operations over symbolic games: pre/post images, attractors, escapes,
//! best escape priorities and priority-map updates.
//!
//! Every complement here is taken relative to the relevant vertex set: the
//! raw image formulas quantify over all bit patterns, and unused patterns
//! must never satisfy the universal branch of `pre`.

use crate::bdd::{BddError, BddRef};
use crate::pgsolver::Player;
use crate::solvers::{Deadline, SolveError};
use crate::symbolic::{PriorityMap, SymbolicGame};

/// Controlled predecessors of `set`: vertices from which `player` can ensure
/// the next vertex lies in `set`, evaluated against `game`'s vertex set and
/// edge relation (so a subgame view confines the move choices).
pub fn pre(game: &SymbolicGame, player: Player, set: &BddRef) -> Result<BddRef, BddError> {
    let m = game.manager();
    let set_primed = game.prime(set)?;
    let can_reach = m.exists(&m.and(game.edges(), &set_primed)?, &game.primed_vars())?;
    let outside_primed = m.diff(game.vertices_primed(), &set_primed)?;
    let can_leave = m.exists(&m.and(game.edges(), &outside_primed)?, &game.primed_vars())?;
    let owned = m.and(game.owned_by(player), &can_reach)?;
    let forced = m.diff(game.owned_by(player.opponent()), &can_leave)?;
    m.and(&m.or(&owned, &forced)?, game.vertices())
}

/// Successors of `set` under the game's edge relation.
pub fn post(game: &SymbolicGame, set: &BddRef) -> Result<BddRef, BddError> {
    let m = game.manager();
    let image = m.exists(&m.and(game.edges(), set)?, &game.unprimed_vars())?;
    game.unprime(&image)
}

/// Least set `A ⊇ target` to which `player` can force the play.
pub fn attractor(
    game: &SymbolicGame,
    player: Player,
    target: &BddRef,
    deadline: &Deadline,
) -> Result<BddRef, SolveError> {
    let m = game.manager();
    let mut attracted = m.and(target, game.vertices())?;
    loop {
        deadline.check()?;
        let next = m.or(&attracted, &pre(game, player, &attracted)?)?;
        if next == attracted {
            return Ok(attracted);
        }
        attracted = next;
    }
}

/// Attractor computed inside the subgame induced by `within`; requires
/// `target ⊆ within`.
pub fn confined_attractor(
    game: &SymbolicGame,
    player: Player,
    target: &BddRef,
    within: &BddRef,
    deadline: &Deadline,
) -> Result<BddRef, SolveError> {
    let view = game.subgame(within)?;
    attractor(&view, player, target, deadline)
}

/// Vertices inside `set` from which `player` can force an exit from `set` in
/// one move, relative to `game`'s view.
pub fn escape(game: &SymbolicGame, player: Player, set: &BddRef) -> Result<BddRef, BddError> {
    let outside = game.without(set)?;
    game.manager().and(&pre(game, player, &outside)?, set)
}

/// Best escape priority: the least `m` in `region_map`'s domain whose block
/// is one-step reachable from `player`'s vertices in `attracted`, outside
/// `attracted` itself.
///
/// Panics if no such priority exists — callers must establish that `player`
/// has an escape before asking for its priority.
pub fn bep(
    game: &SymbolicGame,
    player: Player,
    region_map: &PriorityMap,
    attracted: &BddRef,
) -> Result<u32, BddError> {
    let m = game.manager();
    let movers = m.and(attracted, game.owned_by(player))?;
    let exits = m.diff(&post(game, &movers)?, attracted)?;
    for (priority, block) in region_map.entries() {
        if !m.and(block, &exits)?.is_false() {
            return Ok(*priority);
        }
    }
    panic!("no escape from the region: best escape priority is undefined");
}

/// Moves all of `set` into the block of `priority`, removing it from every
/// other block. Emptied blocks are dropped.
pub fn promote_assign(
    game: &SymbolicGame,
    map: &PriorityMap,
    set: &BddRef,
    priority: u32,
) -> Result<PriorityMap, BddError> {
    let m = game.manager();
    let mut entries = Vec::with_capacity(map.entries().len() + 1);
    let mut placed = false;
    for (p, block) in map.entries() {
        let updated = if *p == priority {
            placed = true;
            m.or(block, set)?
        } else {
            m.diff(block, set)?
        };
        if !updated.is_false() {
            entries.push((*p, updated));
        }
    }
    if !placed && !set.is_false() {
        entries.push((priority, set.clone()));
        entries.sort_by_key(|&(p, _)| p);
    }
    Ok(PriorityMap::new(entries))
}

/// Promotion with reset: merges the region map back into the original
/// priorities. Blocks of `region_map` at or above `target` survive, vertices
/// below are reset to their block in `original`, and `promoted` lands in the
/// block of `target`.
pub fn promote_reset(
    game: &SymbolicGame,
    original: &PriorityMap,
    region_map: &PriorityMap,
    promoted: &BddRef,
    target: u32,
) -> Result<PriorityMap, BddError> {
    let m = game.manager();
    let above = region_map.union_at_least(m, target)?;
    let not_above = game.without(&above)?;
    let mut domain: Vec<u32> = original
        .entries()
        .iter()
        .chain(region_map.entries())
        .map(|&(p, _)| p)
        .chain([target])
        .collect();
    domain.sort_unstable();
    domain.dedup();
    let empty = game.ff();
    let mut entries = Vec::new();
    for p in domain {
        let kept = m.and(original.block(p).unwrap_or(&empty), &not_above)?;
        let surviving = m.and(region_map.block(p).unwrap_or(&empty), &above)?;
        let mut block = m.or(&kept, &surviving)?;
        block = if p == target {
            m.or(&block, promoted)?
        } else {
            m.diff(&block, promoted)?
        };
        if !block.is_false() {
            entries.push((p, block));
        }
    }
    Ok(PriorityMap::new(entries))
}

/// One modal step of the fixpoint iteration: vertices whose owner can (for
/// player 0) or must (for player 1) move into the `X` set matching the
/// successor's priority. `x` is indexed in parallel with
/// `game.priorities().entries()`.
pub fn diamond_box(game: &SymbolicGame, x: &[BddRef]) -> Result<BddRef, SolveError> {
    let entries = game.priorities().entries();
    assert_eq!(entries.len(), x.len());
    let m = game.manager();
    let mut good = m.constant(false);
    let mut bad = m.constant(false);
    for ((_, block), x_i) in entries.iter().zip(x) {
        let block_primed = game.prime(block)?;
        let x_primed = game.prime(x_i)?;
        good = m.or(&good, &m.and(&block_primed, &x_primed)?)?;
        bad = m.or(&bad, &m.diff(&block_primed, &x_primed)?)?;
    }
    let can = m.exists(&m.and(game.edges(), &good)?, &game.primed_vars())?;
    let cannot_avoid = m.exists(&m.and(game.edges(), &bad)?, &game.primed_vars())?;
    let diamond = m.and(game.owned_by(Player::Even), &can)?;
    let boxed = m.diff(game.owned_by(Player::Odd), &cannot_avoid)?;
    Ok(m.and(&m.or(&diamond, &boxed)?, game.vertices())?)
}
