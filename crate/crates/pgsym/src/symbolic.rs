//! BDD representation of parity games.
//!
//! A game over `2^n`-bounded vertex ids uses `2n` Boolean variables in
//! interleaved order `x0, x0', x1, x1', ...`: bit `i` of a source vertex is
//! variable `2i`, bit `i` of a successor vertex is variable `2i+1`. Vertex
//! sets range over the unprimed block, the edge relation over both. Unused
//! bit patterns are excluded from the vertex set rather than padded.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::bdd::{BddError, BddManager, BddRef, VarSet};
use crate::pgsolver::{ExplicitGame, Player};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymbolicError {
    #[error(transparent)]
    Bdd(#[from] BddError),
    #[error("set contains a bit pattern that is not a vertex")]
    NotAVertexSet,
}

/// Ordered map from priority value to the vertex-set BDD carrying it.
///
/// Blocks are pairwise disjoint and kept nonempty, except where a caller
/// explicitly needs index-aligned empty blocks.
#[derive(Debug, Clone)]
pub struct PriorityMap {
    entries: Vec<(u32, BddRef)>,
}

impl PriorityMap {
    pub fn new(entries: Vec<(u32, BddRef)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        PriorityMap { entries }
    }

    pub fn entries(&self) -> &[(u32, BddRef)] {
        &self.entries
    }

    pub fn block(&self, priority: u32) -> Option<&BddRef> {
        self.entries
            .binary_search_by_key(&priority, |&(p, _)| p)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn min_priority(&self) -> Option<u32> {
        self.entries.first().map(|&(p, _)| p)
    }

    pub fn max_priority(&self) -> Option<u32> {
        self.entries.last().map(|&(p, _)| p)
    }

    /// Conjoins every block with `set`, dropping blocks that become empty.
    pub fn restrict(&self, manager: &BddManager, set: &BddRef) -> Result<PriorityMap, BddError> {
        let mut entries = Vec::new();
        for (p, block) in &self.entries {
            let restricted = manager.and(block, set)?;
            if !restricted.is_false() {
                entries.push((*p, restricted));
            }
        }
        Ok(PriorityMap { entries })
    }

    /// Union of all blocks with priority at least `bound`.
    pub fn union_at_least(&self, manager: &BddManager, bound: u32) -> Result<BddRef, BddError> {
        let mut acc = manager.constant(false);
        for (p, block) in &self.entries {
            if *p >= bound {
                acc = manager.or(&acc, block)?;
            }
        }
        Ok(acc)
    }

    /// Union of all blocks with priority at most `bound`.
    pub fn union_at_most(&self, manager: &BddManager, bound: u32) -> Result<BddRef, BddError> {
        let mut acc = manager.constant(false);
        for (p, block) in &self.entries {
            if *p <= bound {
                acc = manager.or(&acc, block)?;
            }
        }
        Ok(acc)
    }
}

/// Disjoint winning regions covering the vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub w0: BddRef,
    pub w1: BddRef,
}

impl Solution {
    pub fn winning_region(&self, player: Player) -> &BddRef {
        match player {
            Player::Even => &self.w0,
            Player::Odd => &self.w1,
        }
    }
}

/// A violated structural invariant, with one witnessing vertex pattern when
/// the violation is witnessed by a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    OwnershipOverlap,
    OwnershipIncomplete,
    PriorityOverlap,
    PriorityIncomplete,
    NotLeftTotal,
    EdgeLeavesVertexSet,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::OwnershipOverlap => "a vertex is owned by both players",
            ViolationKind::OwnershipIncomplete => "a vertex is owned by neither player",
            ViolationKind::PriorityOverlap => "a vertex carries two priorities",
            ViolationKind::PriorityIncomplete => "a vertex carries no priority",
            ViolationKind::NotLeftTotal => "a vertex has no successor inside the game",
            ViolationKind::EdgeLeavesVertexSet => "an edge touches a non-vertex pattern",
        };
        match self.witness {
            Some(w) => write!(f, "{what} (witness pattern {w})"),
            None => write!(f, "{what}"),
        }
    }
}

/// BDD-encoded parity game. Immutable after construction; solvers derive new
/// BDDs but never mutate game fields.
#[derive(Clone)]
pub struct SymbolicGame {
    manager: BddManager,
    bits: u32,
    v: BddRef,
    v0: BddRef,
    v1: BddRef,
    v_primed: BddRef,
    edges: BddRef,
    priorities: PriorityMap,
    /// compact index -> original explicit id
    ids: Rc<Vec<u64>>,
}

impl SymbolicGame {
    /// Encodes an explicit game with `ceil(log2(|V|))` bits per block
    /// (minimum 1) under a fresh manager.
    pub fn encode(explicit: &ExplicitGame) -> Result<SymbolicGame, BddError> {
        Self::encode_with(explicit, None)
    }

    /// As [`encode`](Self::encode), with an optional live-node budget on the
    /// manager (exhaustion surfaces as [`BddError::NodeBudgetExceeded`]).
    pub fn encode_with(
        explicit: &ExplicitGame,
        node_budget: Option<usize>,
    ) -> Result<SymbolicGame, BddError> {
        let count = explicit.vertices().len();
        let bits = (usize::BITS - (count - 1).leading_zeros()).max(1);
        let manager = match node_budget {
            Some(b) => BddManager::with_node_budget(2 * bits, b),
            None => BddManager::new(2 * bits),
        };
        let id_index = explicit.id_index();
        let ids: Vec<u64> = explicit.vertices().iter().map(|v| v.id).collect();

        let minterm = |index: usize, primed: bool| -> Result<BddRef, BddError> {
            let mut acc = manager.constant(true);
            for bit in 0..bits {
                let var = manager.mk_var(2 * bit + if primed { 1 } else { 0 })?;
                let lit = if index >> bit & 1 == 1 { var } else { manager.not(&var)? };
                acc = manager.and(&acc, &lit)?;
            }
            Ok(acc)
        };

        let mut v = manager.constant(false);
        let mut v0 = manager.constant(false);
        let mut v1 = manager.constant(false);
        let mut edges = manager.constant(false);
        let mut blocks: Vec<(u32, BddRef)> = Vec::new();
        for (index, record) in explicit.vertices().iter().enumerate() {
            let source = minterm(index, false)?;
            v = manager.or(&v, &source)?;
            match record.owner {
                Player::Even => v0 = manager.or(&v0, &source)?,
                Player::Odd => v1 = manager.or(&v1, &source)?,
            }
            let mut targets = manager.constant(false);
            for succ in &record.successors {
                let target = minterm(id_index[succ], true)?;
                targets = manager.or(&targets, &target)?;
            }
            edges = manager.or(&edges, &manager.and(&source, &targets)?)?;
            match blocks.iter_mut().find(|(p, _)| *p == record.priority) {
                Some((_, block)) => *block = manager.or(block, &source)?,
                None => blocks.push((record.priority, source)),
            }
        }
        blocks.sort_by_key(|&(p, _)| p);
        let prime_map: Vec<(u32, u32)> = (0..bits).map(|i| (2 * i, 2 * i + 1)).collect();
        let v_primed = manager.rename(&v, &prime_map)?;
        Ok(SymbolicGame {
            manager,
            bits,
            v,
            v0,
            v1,
            v_primed,
            edges,
            priorities: PriorityMap::new(blocks),
            ids: Rc::new(ids),
        })
    }

    pub fn manager(&self) -> &BddManager {
        &self.manager
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn vertices(&self) -> &BddRef {
        &self.v
    }

    pub fn vertices_primed(&self) -> &BddRef {
        &self.v_primed
    }

    pub fn owned_by(&self, player: Player) -> &BddRef {
        match player {
            Player::Even => &self.v0,
            Player::Odd => &self.v1,
        }
    }

    pub fn edges(&self) -> &BddRef {
        &self.edges
    }

    pub fn priorities(&self) -> &PriorityMap {
        &self.priorities
    }

    pub fn ff(&self) -> BddRef {
        self.manager.constant(false)
    }

    pub fn unprimed_vars(&self) -> VarSet {
        VarSet::new((0..self.bits).map(|i| 2 * i).collect())
    }

    pub fn primed_vars(&self) -> VarSet {
        VarSet::new((0..self.bits).map(|i| 2 * i + 1).collect())
    }

    /// Renames a vertex set from unprimed to primed variables.
    pub fn prime(&self, set: &BddRef) -> Result<BddRef, BddError> {
        let map: Vec<(u32, u32)> = (0..self.bits).map(|i| (2 * i, 2 * i + 1)).collect();
        self.manager.rename(set, &map)
    }

    /// Renames a vertex set from primed to unprimed variables.
    pub fn unprime(&self, set: &BddRef) -> Result<BddRef, BddError> {
        let map: Vec<(u32, u32)> = (0..self.bits).map(|i| (2 * i + 1, 2 * i)).collect();
        self.manager.rename(set, &map)
    }

    /// Complement relative to the vertex set: `V ∧ ¬set`. Unused bit patterns
    /// must never leak into set operations.
    pub fn without(&self, set: &BddRef) -> Result<BddRef, BddError> {
        self.manager.diff(&self.v, set)
    }

    /// The BDD of the given vertex ids; ids not in the game are rejected.
    pub fn encode_set(&self, ids: &[u64]) -> Result<BddRef, SymbolicError> {
        let mut acc = self.manager.constant(false);
        for id in ids {
            let index = self
                .ids
                .iter()
                .position(|candidate| candidate == id)
                .ok_or(SymbolicError::NotAVertexSet)?;
            let mut minterm = self.manager.constant(true);
            for bit in 0..self.bits {
                let var = self.manager.mk_var(2 * bit)?;
                let lit = if index >> bit & 1 == 1 {
                    var
                } else {
                    self.manager.not(&var)?
                };
                minterm = self.manager.and(&minterm, &lit)?;
            }
            acc = self.manager.or(&acc, &minterm)?;
        }
        // ids present in the map may still have been removed by a subgame
        if !self.manager.diff(&acc, &self.v)?.is_false() {
            return Err(SymbolicError::NotAVertexSet);
        }
        Ok(acc)
    }

    /// The ids whose encodings satisfy `set`; `set` must be below `V`.
    pub fn decode_set(&self, set: &BddRef) -> Result<Vec<u64>, SymbolicError> {
        if !self.manager.diff(set, &self.v)?.is_false() {
            return Err(SymbolicError::NotAVertexSet);
        }
        let mut out = Vec::new();
        let total_vars = 2 * self.bits as usize;
        for (index, &id) in self.ids.iter().enumerate() {
            let mut assignment = vec![false; total_vars];
            for bit in 0..self.bits as usize {
                assignment[2 * bit] = index >> bit & 1 == 1;
            }
            if self.manager.eval(set, &assignment) {
                out.push(id);
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Restriction of the game to `U ⊆ V`. Totality is not re-established;
    /// removing an attractor keeps it, arbitrary restrictions may not.
    pub fn subgame(&self, set: &BddRef) -> Result<SymbolicGame, BddError> {
        let v = self.manager.and(&self.v, set)?;
        let v_primed = self.prime(&v)?;
        let edges = self
            .manager
            .and(&self.manager.and(&self.edges, &v)?, &v_primed)?;
        Ok(SymbolicGame {
            manager: self.manager.clone(),
            bits: self.bits,
            v: v.clone(),
            v0: self.manager.and(&self.v0, &v)?,
            v1: self.manager.and(&self.v1, &v)?,
            v_primed,
            edges,
            priorities: self.priorities.restrict(&self.manager, &v)?,
            ids: Rc::clone(&self.ids),
        })
    }

    /// Shorthand for restricting to `V \ removed`.
    pub fn subgame_without(&self, removed: &BddRef) -> Result<SymbolicGame, BddError> {
        self.subgame(&self.without(removed)?)
    }

    /// Relabels priorities onto an integer interval starting at 0 or 1:
    /// the smallest occurring priority keeps its parity, and consecutive
    /// occurring priorities of equal parity share a label. Winner-preserving.
    pub fn compress_priorities(&self) -> Result<SymbolicGame, BddError> {
        let mut relabelled: Vec<(u32, BddRef)> = Vec::new();
        let mut previous: Option<(u32, u32)> = None; // (original, label)
        for (p, block) in self.priorities.entries() {
            let label = match previous {
                None => p % 2,
                Some((prev_p, prev_label)) => {
                    if p % 2 == prev_p % 2 {
                        prev_label
                    } else {
                        prev_label + 1
                    }
                }
            };
            previous = Some((*p, label));
            match relabelled.iter_mut().find(|(l, _)| *l == label) {
                Some((_, merged)) => *merged = self.manager.or(merged, block)?,
                None => relabelled.push((label, block.clone())),
            }
        }
        Ok(SymbolicGame {
            manager: self.manager.clone(),
            bits: self.bits,
            v: self.v.clone(),
            v0: self.v0.clone(),
            v1: self.v1.clone(),
            v_primed: self.v_primed.clone(),
            edges: self.edges.clone(),
            priorities: PriorityMap::new(relabelled),
            ids: Rc::clone(&self.ids),
        })
    }

    fn witness(&self, set: &BddRef) -> Option<u64> {
        self.manager.any_sat(set).map(|assignment| {
            (0..self.bits as usize).fold(0u64, |acc, bit| {
                acc | (assignment[2 * bit] as u64) << bit
            })
        })
    }

    /// Checks all structural invariants, reporting the first violated one.
    pub fn validate(&self) -> Result<Result<(), Violation>, BddError> {
        let m = &self.manager;
        let overlap = m.and(&self.v0, &self.v1)?;
        if !overlap.is_false() {
            return Ok(Err(Violation {
                kind: ViolationKind::OwnershipOverlap,
                witness: self.witness(&overlap),
            }));
        }
        let covered = m.or(&self.v0, &self.v1)?;
        let uncovered = m.diff(&self.v, &covered)?;
        if !uncovered.is_false() {
            return Ok(Err(Violation {
                kind: ViolationKind::OwnershipIncomplete,
                witness: self.witness(&uncovered),
            }));
        }
        let entries = self.priorities.entries();
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                let both = m.and(&entries[i].1, &entries[j].1)?;
                if !both.is_false() {
                    return Ok(Err(Violation {
                        kind: ViolationKind::PriorityOverlap,
                        witness: self.witness(&both),
                    }));
                }
            }
        }
        let mut union = m.constant(false);
        for (_, block) in entries {
            union = m.or(&union, block)?;
        }
        let unlabelled = m.diff(&self.v, &union)?;
        if !unlabelled.is_false() {
            return Ok(Err(Violation {
                kind: ViolationKind::PriorityIncomplete,
                witness: self.witness(&unlabelled),
            }));
        }
        let vertex_pairs = m.and(&self.v, &self.v_primed)?;
        let escaping = m.diff(&self.edges, &vertex_pairs)?;
        if !escaping.is_false() {
            return Ok(Err(Violation {
                kind: ViolationKind::EdgeLeavesVertexSet,
                witness: self.witness(&escaping),
            }));
        }
        let has_successor = m.exists(
            &m.and(&self.edges, &self.v_primed)?,
            &self.primed_vars(),
        )?;
        let stuck = m.diff(&self.v, &has_successor)?;
        if !stuck.is_false() {
            return Ok(Err(Violation {
                kind: ViolationKind::NotLeftTotal,
                witness: self.witness(&stuck),
            }));
        }
        Ok(Ok(()))
    }

    /// Decodes an explicit game back out; inverse of [`encode`](Self::encode)
    /// up to vertex names.
    pub fn decode(&self) -> Result<ExplicitGame, SymbolicError> {
        use crate::pgsolver::VertexRecord;
        let total_vars = 2 * self.bits as usize;
        let mut records = Vec::new();
        for (index, &id) in self.ids.iter().enumerate() {
            let mut assignment = vec![false; total_vars];
            for bit in 0..self.bits as usize {
                assignment[2 * bit] = index >> bit & 1 == 1;
            }
            if !self.manager.eval(&self.v, &assignment) {
                continue;
            }
            let owner = if self.manager.eval(&self.v0, &assignment) {
                Player::Even
            } else {
                Player::Odd
            };
            let priority = self
                .priorities
                .entries()
                .iter()
                .find(|(_, block)| self.manager.eval(block, &assignment))
                .map(|&(p, _)| p)
                .unwrap_or(0);
            let mut successors = Vec::new();
            for (succ_index, &succ_id) in self.ids.iter().enumerate() {
                let mut pair = assignment.clone();
                for bit in 0..self.bits as usize {
                    pair[2 * bit + 1] = succ_index >> bit & 1 == 1;
                }
                if self.manager.eval(&self.edges, &pair) {
                    successors.push(succ_id);
                }
            }
            records.push(VertexRecord { id, priority, owner, successors, name: None });
        }
        ExplicitGame::new(records).map_err(|_| SymbolicError::NotAVertexSet)
    }
}
