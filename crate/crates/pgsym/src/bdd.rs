//! Reduced ordered binary decision diagrams with hash-consing.
//!
//! The manager owns a shared node store; [`BddRef`] is a handle that keeps its
//! node alive across garbage collections. Nodes are reduced (no redundant
//! tests, no duplicates) and ordered (variable indices strictly increase on
//! every root-to-terminal path), so two functions built under one manager are
//! semantically equal iff their handles point at the same node.
//!
//! There are no complement edges; negation is an ordinary cached operation.
//! Collection is explicit mark-sweep over the externally held roots and is
//! only triggered at operation entry, never in the middle of a recursion.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

pub type NodeId = u32;

const FALSE_ID: NodeId = 0;
const TRUE_ID: NodeId = 1;

/// Variable index marker for terminal nodes; sorts after every real variable.
const VAR_TERMINAL: u32 = u32::MAX;
/// Marker for slots on the free list.
const VAR_FREE: u32 = u32::MAX - 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BddError {
    #[error("variable index {index} out of range (manager has {count} variables)")]
    IndexOutOfRange { index: u32, count: u32 },
    #[error("operands belong to different managers")]
    ManagerMismatch,
    #[error("node budget of {budget} live nodes exhausted")]
    NodeBudgetExceeded { budget: usize },
    #[error("rename mapping is not order-preserving on the support")]
    NonOrderPreservingRename,
    #[error("support variable {var} is outside the counting set")]
    SupportOutsideVars { var: u32 },
}

/// Boolean connectives supported by [`BddManager::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Xor,
    /// Set difference: `a AND NOT b`.
    Diff,
}

const OP_AND: u8 = 0;
const OP_OR: u8 = 1;
const OP_XOR: u8 = 2;
const OP_DIFF: u8 = 3;
const OP_EXISTS: u8 = 4;
const OP_RENAME: u8 = 5;

impl BoolOp {
    fn code(self) -> u8 {
        match self {
            BoolOp::And => OP_AND,
            BoolOp::Or => OP_OR,
            BoolOp::Xor => OP_XOR,
            BoolOp::Diff => OP_DIFF,
        }
    }

    fn commutative(self) -> bool {
        !matches!(self, BoolOp::Diff)
    }
}

/// Sorted set of variable indices, used for quantification and counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet {
    vars: Vec<u32>,
}

impl VarSet {
    /// Builds a set from indices; duplicates are removed, order normalised.
    pub fn new(mut vars: Vec<u32>) -> Self {
        vars.sort_unstable();
        vars.dedup();
        VarSet { vars }
    }

    pub fn empty() -> Self {
        VarSet { vars: Vec::new() }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.vars.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn contains(&self, var: u32) -> bool {
        self.vars.binary_search(&var).is_ok()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.vars
    }
}

#[derive(Clone, Copy)]
struct Node {
    var: u32,
    low: NodeId,
    high: NodeId,
}

struct Inner {
    var_count: u32,
    nodes: Vec<Node>,
    unique: HashMap<(u32, NodeId, NodeId), NodeId>,
    cache: HashMap<(u8, NodeId, NodeId), NodeId>,
    free: Vec<NodeId>,
    /// External root handles with reference counts; GC roots.
    roots: HashMap<NodeId, u32>,
    rename_maps: Vec<Vec<(u32, u32)>>,
    live: usize,
    peak_live: usize,
    node_budget: Option<usize>,
    gc_threshold: usize,
    gc_runs: u64,
}

/// Hash-consed BDD node store with an operation cache.
///
/// Cheap to clone: clones share the same store. A manager and all of its
/// [`BddRef`]s are confined to a single thread.
#[derive(Clone)]
pub struct BddManager {
    inner: Rc<RefCell<Inner>>,
}

/// Handle to a node; keeps the node (and everything below it) alive.
pub struct BddRef {
    id: NodeId,
    inner: Rc<RefCell<Inner>>,
}

impl Inner {
    fn var_of(&self, id: NodeId) -> u32 {
        self.nodes[id as usize].var
    }

    fn mk(&mut self, var: u32, low: NodeId, high: NodeId) -> Result<NodeId, BddError> {
        if low == high {
            return Ok(low);
        }
        if let Some(&id) = self.unique.get(&(var, low, high)) {
            return Ok(id);
        }
        if let Some(budget) = self.node_budget {
            if self.live >= budget {
                return Err(BddError::NodeBudgetExceeded { budget });
            }
        }
        let node = Node { var, low, high };
        let id = match self.free.pop() {
            Some(slot) => {
                self.nodes[slot as usize] = node;
                slot
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as NodeId
            }
        };
        self.unique.insert((var, low, high), id);
        self.live += 1;
        if self.live > self.peak_live {
            self.peak_live = self.live;
        }
        Ok(id)
    }

    fn apply(&mut self, op: BoolOp, a: NodeId, b: NodeId) -> Result<NodeId, BddError> {
        match op {
            BoolOp::And => {
                if a == FALSE_ID || b == FALSE_ID {
                    return Ok(FALSE_ID);
                }
                if a == TRUE_ID {
                    return Ok(b);
                }
                if b == TRUE_ID || a == b {
                    return Ok(a);
                }
            }
            BoolOp::Or => {
                if a == TRUE_ID || b == TRUE_ID {
                    return Ok(TRUE_ID);
                }
                if a == FALSE_ID {
                    return Ok(b);
                }
                if b == FALSE_ID || a == b {
                    return Ok(a);
                }
            }
            BoolOp::Xor => {
                if a == b {
                    return Ok(FALSE_ID);
                }
                if a == FALSE_ID {
                    return Ok(b);
                }
                if b == FALSE_ID {
                    return Ok(a);
                }
                if a == TRUE_ID && b == TRUE_ID {
                    return Ok(FALSE_ID);
                }
            }
            BoolOp::Diff => {
                if a == FALSE_ID || b == TRUE_ID || a == b {
                    return Ok(FALSE_ID);
                }
                if b == FALSE_ID {
                    return Ok(a);
                }
            }
        }
        let (ka, kb) = if op.commutative() && a > b { (b, a) } else { (a, b) };
        let key = (op.code(), ka, kb);
        if let Some(&r) = self.cache.get(&key) {
            return Ok(r);
        }
        let va = self.var_of(a);
        let vb = self.var_of(b);
        let v = va.min(vb);
        let (a0, a1) = if va == v {
            let n = self.nodes[a as usize];
            (n.low, n.high)
        } else {
            (a, a)
        };
        let (b0, b1) = if vb == v {
            let n = self.nodes[b as usize];
            (n.low, n.high)
        } else {
            (b, b)
        };
        let low = self.apply(op, a0, b0)?;
        let high = self.apply(op, a1, b1)?;
        let r = self.mk(v, low, high)?;
        self.cache.insert(key, r);
        Ok(r)
    }

    fn not(&mut self, a: NodeId) -> Result<NodeId, BddError> {
        self.apply(BoolOp::Xor, a, TRUE_ID)
    }

    /// Existential quantification; `cube` is a positive conjunction of the
    /// quantified variables.
    fn exists(&mut self, f: NodeId, cube: NodeId) -> Result<NodeId, BddError> {
        if f == FALSE_ID || f == TRUE_ID || cube == TRUE_ID {
            return Ok(f);
        }
        let fv = self.var_of(f);
        // Skip cube variables above the root of f.
        let mut c = cube;
        while c != TRUE_ID && self.var_of(c) < fv {
            c = self.nodes[c as usize].high;
        }
        if c == TRUE_ID {
            return Ok(f);
        }
        let key = (OP_EXISTS, f, c);
        if let Some(&r) = self.cache.get(&key) {
            return Ok(r);
        }
        let node = self.nodes[f as usize];
        let r = if self.var_of(c) == fv {
            let rest = self.nodes[c as usize].high;
            let low = self.exists(node.low, rest)?;
            let high = self.exists(node.high, rest)?;
            self.apply(BoolOp::Or, low, high)?
        } else {
            let low = self.exists(node.low, c)?;
            let high = self.exists(node.high, c)?;
            self.mk(fv, low, high)?
        };
        self.cache.insert(key, r);
        Ok(r)
    }

    fn rename(&mut self, f: NodeId, map_id: u32) -> Result<NodeId, BddError> {
        if f == FALSE_ID || f == TRUE_ID {
            return Ok(f);
        }
        let key = (OP_RENAME, f, map_id);
        if let Some(&r) = self.cache.get(&key) {
            return Ok(r);
        }
        let node = self.nodes[f as usize];
        let low = self.rename(node.low, map_id)?;
        let high = self.rename(node.high, map_id)?;
        let target = {
            let map = &self.rename_maps[map_id as usize];
            match map.binary_search_by_key(&node.var, |&(from, _)| from) {
                Ok(i) => map[i].1,
                Err(_) => node.var,
            }
        };
        let r = self.mk(target, low, high)?;
        self.cache.insert(key, r);
        Ok(r)
    }

    fn support_into(&self, f: NodeId, seen: &mut HashSet<NodeId>, out: &mut Vec<u32>) {
        if f <= TRUE_ID || !seen.insert(f) {
            return;
        }
        let node = self.nodes[f as usize];
        out.push(node.var);
        self.support_into(node.low, seen, out);
        self.support_into(node.high, seen, out);
    }

    fn gc(&mut self, extra_roots: &[NodeId]) {
        let mut marked: HashSet<NodeId> = HashSet::new();
        let mut stack: Vec<NodeId> = self
            .roots
            .keys()
            .copied()
            .chain(extra_roots.iter().copied())
            .collect();
        while let Some(id) = stack.pop() {
            if id <= TRUE_ID || !marked.insert(id) {
                continue;
            }
            let node = self.nodes[id as usize];
            stack.push(node.low);
            stack.push(node.high);
        }
        for id in 2..self.nodes.len() as NodeId {
            let node = self.nodes[id as usize];
            if node.var == VAR_FREE || marked.contains(&id) {
                continue;
            }
            self.unique.remove(&(node.var, node.low, node.high));
            self.nodes[id as usize].var = VAR_FREE;
            self.free.push(id);
            self.live -= 1;
        }
        self.cache.clear();
        self.gc_runs += 1;
        // Avoid collecting on every subsequent operation when most nodes
        // turned out to be live.
        if self.live > self.gc_threshold / 2 {
            self.gc_threshold = self.gc_threshold.saturating_mul(2);
        }
    }

    /// Called on public operation entry only: all intermediate results of a
    /// running recursion are unrooted and must never be collected.
    fn maybe_gc(&mut self, extra_roots: &[NodeId]) -> Result<(), BddError> {
        if self.live >= self.gc_threshold {
            self.gc(extra_roots);
        }
        if let Some(budget) = self.node_budget {
            if self.live >= budget {
                self.gc(extra_roots);
                if self.live >= budget {
                    return Err(BddError::NodeBudgetExceeded { budget });
                }
            }
        }
        Ok(())
    }
}

impl BddManager {
    pub fn new(variable_count: u32) -> Self {
        Self::with_config(variable_count, None, 1 << 20)
    }

    pub fn with_node_budget(variable_count: u32, budget: usize) -> Self {
        Self::with_config(variable_count, Some(budget), 1 << 20)
    }

    pub fn with_config(variable_count: u32, node_budget: Option<usize>, gc_threshold: usize) -> Self {
        let terminal = Node {
            var: VAR_TERMINAL,
            low: 0,
            high: 0,
        };
        BddManager {
            inner: Rc::new(RefCell::new(Inner {
                var_count: variable_count,
                nodes: vec![terminal, terminal],
                unique: HashMap::new(),
                cache: HashMap::new(),
                free: Vec::new(),
                roots: HashMap::new(),
                rename_maps: Vec::new(),
                live: 0,
                peak_live: 0,
                node_budget,
                gc_threshold,
            gc_runs: 0,
            })),
        }
    }

    pub fn variable_count(&self) -> u32 {
        self.inner.borrow().var_count
    }

    pub fn live_nodes(&self) -> usize {
        self.inner.borrow().live
    }

    pub fn peak_live_nodes(&self) -> usize {
        self.inner.borrow().peak_live
    }

    pub fn gc_runs(&self) -> u64 {
        self.inner.borrow().gc_runs
    }

    fn make_ref(&self, id: NodeId) -> BddRef {
        *self.inner.borrow_mut().roots.entry(id).or_insert(0) += 1;
        BddRef {
            id,
            inner: Rc::clone(&self.inner),
        }
    }

    fn same_manager(&self, r: &BddRef) -> Result<(), BddError> {
        if Rc::ptr_eq(&self.inner, &r.inner) {
            Ok(())
        } else {
            Err(BddError::ManagerMismatch)
        }
    }

    pub fn constant(&self, value: bool) -> BddRef {
        self.make_ref(if value { TRUE_ID } else { FALSE_ID })
    }

    /// The function that is true iff variable `index` is true.
    pub fn mk_var(&self, index: u32) -> Result<BddRef, BddError> {
        let id = {
            let mut inner = self.inner.borrow_mut();
            if index >= inner.var_count {
                return Err(BddError::IndexOutOfRange {
                    index,
                    count: inner.var_count,
                });
            }
            inner.maybe_gc(&[])?;
            inner.mk(index, FALSE_ID, TRUE_ID)?
        };
        Ok(self.make_ref(id))
    }

    pub fn apply(&self, op: BoolOp, a: &BddRef, b: &BddRef) -> Result<BddRef, BddError> {
        self.same_manager(a)?;
        self.same_manager(b)?;
        let id = {
            let mut inner = self.inner.borrow_mut();
            inner.maybe_gc(&[a.id, b.id])?;
            inner.apply(op, a.id, b.id)?
        };
        Ok(self.make_ref(id))
    }

    pub fn and(&self, a: &BddRef, b: &BddRef) -> Result<BddRef, BddError> {
        self.apply(BoolOp::And, a, b)
    }

    pub fn or(&self, a: &BddRef, b: &BddRef) -> Result<BddRef, BddError> {
        self.apply(BoolOp::Or, a, b)
    }

    pub fn xor(&self, a: &BddRef, b: &BddRef) -> Result<BddRef, BddError> {
        self.apply(BoolOp::Xor, a, b)
    }

    pub fn diff(&self, a: &BddRef, b: &BddRef) -> Result<BddRef, BddError> {
        self.apply(BoolOp::Diff, a, b)
    }

    pub fn not(&self, a: &BddRef) -> Result<BddRef, BddError> {
        self.same_manager(a)?;
        let id = {
            let mut inner = self.inner.borrow_mut();
            inner.maybe_gc(&[a.id])?;
            inner.not(a.id)?
        };
        Ok(self.make_ref(id))
    }

    /// `∃ vars. f`
    pub fn exists(&self, f: &BddRef, vars: &VarSet) -> Result<BddRef, BddError> {
        self.same_manager(f)?;
        let id = {
            let mut inner = self.inner.borrow_mut();
            for &v in vars.as_slice() {
                if v >= inner.var_count {
                    return Err(BddError::IndexOutOfRange {
                        index: v,
                        count: inner.var_count,
                    });
                }
            }
            inner.maybe_gc(&[f.id])?;
            // Build the quantification cube: conjunction of the variables,
            // highest index innermost.
            let mut cube = TRUE_ID;
            for &v in vars.as_slice().iter().rev() {
                cube = inner.mk(v, FALSE_ID, cube)?;
            }
            inner.exists(f.id, cube)?
        };
        Ok(self.make_ref(id))
    }

    /// Substitutes variables per `mapping` (source, target) pairs. The
    /// substitution must preserve the global variable order on the support of
    /// `f`: only order-preserving block shifts such as priming/unpriming are
    /// accepted.
    pub fn rename(&self, f: &BddRef, mapping: &[(u32, u32)]) -> Result<BddRef, BddError> {
        self.same_manager(f)?;
        let id = {
            let mut inner = self.inner.borrow_mut();
            let mut map: Vec<(u32, u32)> = mapping.to_vec();
            map.sort_unstable();
            for w in map.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(BddError::NonOrderPreservingRename);
                }
            }
            for &(from, to) in &map {
                if from >= inner.var_count || to >= inner.var_count {
                    return Err(BddError::IndexOutOfRange {
                        index: from.max(to),
                        count: inner.var_count,
                    });
                }
            }
            // The rebuild keeps the diagram ordered only if the image of the
            // support is strictly increasing.
            let mut support = Vec::new();
            inner.support_into(f.id, &mut HashSet::new(), &mut support);
            support.sort_unstable();
            support.dedup();
            let target = |v: u32| match map.binary_search_by_key(&v, |&(from, _)| from) {
                Ok(i) => map[i].1,
                Err(_) => v,
            };
            let mut prev: Option<u32> = None;
            for &v in &support {
                let t = target(v);
                if let Some(p) = prev {
                    if t <= p {
                        return Err(BddError::NonOrderPreservingRename);
                    }
                }
                prev = Some(t);
            }
            inner.maybe_gc(&[f.id])?;
            let map_id = match inner.rename_maps.iter().position(|m| *m == map) {
                Some(i) => i as u32,
                None => {
                    inner.rename_maps.push(map);
                    (inner.rename_maps.len() - 1) as u32
                }
            };
            inner.rename(f.id, map_id)?
        };
        Ok(self.make_ref(id))
    }

    /// Number of satisfying assignments of `f` over the variables in `over`.
    /// The support of `f` must be contained in `over`.
    pub fn sat_count(&self, f: &BddRef, over: &VarSet) -> Result<u64, BddError> {
        self.same_manager(f)?;
        let inner = self.inner.borrow();
        let mut support = Vec::new();
        inner.support_into(f.id, &mut HashSet::new(), &mut support);
        for &v in &support {
            if !over.contains(v) {
                return Err(BddError::SupportOutsideVars { var: v });
            }
        }
        // position of a variable within `over`, terminals map to the end
        let pos = |var: u32| -> usize {
            if var == VAR_TERMINAL {
                over.len()
            } else {
                over.as_slice().partition_point(|&v| v < var)
            }
        };
        let mut memo: HashMap<NodeId, u64> = HashMap::new();
        // count over the variables at positions > pos(node.var)
        fn walk(
            inner: &Inner,
            f: NodeId,
            pos: &dyn Fn(u32) -> usize,
            total: usize,
            memo: &mut HashMap<NodeId, u64>,
        ) -> u64 {
            if f == FALSE_ID {
                return 0;
            }
            if f == TRUE_ID {
                return 1;
            }
            if let Some(&c) = memo.get(&f) {
                return c;
            }
            let node = inner.nodes[f as usize];
            let here = pos(node.var);
            let child = |id: NodeId, memo: &mut HashMap<NodeId, u64>| -> u64 {
                let sub = walk(inner, id, pos, total, memo);
                let below = if id <= TRUE_ID { total } else { pos(inner.var_of(id)) };
                sub * (1u64 << (below - here - 1))
            };
            let c = child(node.low, memo) + child(node.high, memo);
            memo.insert(f, c);
            c
        }
        let total = over.len();
        let base = walk(&inner, f.id, &pos, total, &mut memo);
        let top = if f.id <= TRUE_ID { total } else { pos(inner.var_of(f.id)) };
        Ok(base * (1u64 << top))
    }

    /// Number of distinct internal nodes reachable from `f` (terminals excluded).
    pub fn node_count(&self, f: &BddRef) -> usize {
        let inner = self.inner.borrow();
        let mut seen = HashSet::new();
        let mut stack = vec![f.id];
        let mut count = 0;
        while let Some(id) = stack.pop() {
            if id <= TRUE_ID || !seen.insert(id) {
                continue;
            }
            count += 1;
            let node = inner.nodes[id as usize];
            stack.push(node.low);
            stack.push(node.high);
        }
        count
    }

    /// Evaluates `f` under a total assignment indexed by variable.
    pub fn eval(&self, f: &BddRef, assignment: &[bool]) -> bool {
        let inner = self.inner.borrow();
        let mut id = f.id;
        while id > TRUE_ID {
            let node = inner.nodes[id as usize];
            id = if assignment[node.var as usize] {
                node.high
            } else {
                node.low
            };
        }
        id == TRUE_ID
    }

    /// One satisfying assignment (partial, defaulting unconstrained variables
    /// to false), or `None` for the zero function.
    pub fn any_sat(&self, f: &BddRef) -> Option<Vec<bool>> {
        if f.id == FALSE_ID {
            return None;
        }
        let inner = self.inner.borrow();
        let mut assignment = vec![false; inner.var_count as usize];
        let mut id = f.id;
        while id > TRUE_ID {
            let node = inner.nodes[id as usize];
            if node.low != FALSE_ID {
                id = node.low;
            } else {
                assignment[node.var as usize] = true;
                id = node.high;
            }
        }
        Some(assignment)
    }

    pub fn support(&self, f: &BddRef) -> VarSet {
        let inner = self.inner.borrow();
        let mut vars = Vec::new();
        inner.support_into(f.id, &mut HashSet::new(), &mut vars);
        VarSet::new(vars)
    }

    /// DOT-format dump for debugging.
    pub fn to_dot(&self, f: &BddRef) -> String {
        let inner = self.inner.borrow();
        let mut out = String::from("digraph bdd {\n");
        out.push_str("  F [shape=box label=\"0\"];\n  T [shape=box label=\"1\"];\n");
        let mut seen = HashSet::new();
        let mut stack = vec![f.id];
        let name = |id: NodeId| match id {
            FALSE_ID => "F".to_string(),
            TRUE_ID => "T".to_string(),
            _ => format!("n{id}"),
        };
        while let Some(id) = stack.pop() {
            if id <= TRUE_ID || !seen.insert(id) {
                continue;
            }
            let node = inner.nodes[id as usize];
            out.push_str(&format!("  n{} [label=\"x{}\"];\n", id, node.var));
            out.push_str(&format!("  n{} -> {} [style=dashed];\n", id, name(node.low)));
            out.push_str(&format!("  n{} -> {};\n", id, name(node.high)));
            stack.push(node.low);
            stack.push(node.high);
        }
        out.push_str("}\n");
        out
    }
}

impl BddRef {
    pub fn is_false(&self) -> bool {
        self.id == FALSE_ID
    }

    pub fn is_true(&self) -> bool {
        self.id == TRUE_ID
    }

    #[cfg(test)]
    pub(crate) fn id(&self) -> NodeId {
        self.id
    }
}

impl Clone for BddRef {
    fn clone(&self) -> Self {
        *self.inner.borrow_mut().roots.entry(self.id).or_insert(0) += 1;
        BddRef {
            id: self.id,
            inner: Rc::clone(&self.inner),
        }
    }
}

impl Drop for BddRef {
    fn drop(&mut self) {
        let mut inner = self.inner.borrow_mut();
        if let Some(count) = inner.roots.get_mut(&self.id) {
            *count -= 1;
            if *count == 0 {
                inner.roots.remove(&self.id);
            }
        }
    }
}

impl PartialEq for BddRef {
    /// Canonicity makes node identity coincide with semantic equality.
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && Rc::ptr_eq(&self.inner, &other.inner)
    }
}

impl Eq for BddRef {}

impl fmt::Debug for BddRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BddRef({})", self.id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::SplitMix64;

    /// Random formula AST evaluated directly; the truth-table oracle.
    enum Formula {
        Var(u32),
        Not(Box<Formula>),
        Bin(BoolOp, Box<Formula>, Box<Formula>),
    }

    impl Formula {
        fn random(rng: &mut SplitMix64, vars: u32, depth: u32) -> Formula {
            if depth == 0 || rng.uniform(4) == 0 {
                return Formula::Var(rng.uniform(vars as u64) as u32);
            }
            match rng.uniform(5) {
                0 => Formula::Not(Box::new(Formula::random(rng, vars, depth - 1))),
                k => {
                    let op = match k {
                        1 => BoolOp::And,
                        2 => BoolOp::Or,
                        3 => BoolOp::Xor,
                        _ => BoolOp::Diff,
                    };
                    Formula::Bin(
                        op,
                        Box::new(Formula::random(rng, vars, depth - 1)),
                        Box::new(Formula::random(rng, vars, depth - 1)),
                    )
                }
            }
        }

        fn eval(&self, assignment: &[bool]) -> bool {
            match self {
                Formula::Var(v) => assignment[*v as usize],
                Formula::Not(f) => !f.eval(assignment),
                Formula::Bin(op, a, b) => {
                    let (a, b) = (a.eval(assignment), b.eval(assignment));
                    match op {
                        BoolOp::And => a && b,
                        BoolOp::Or => a || b,
                        BoolOp::Xor => a != b,
                        BoolOp::Diff => a && !b,
                    }
                }
            }
        }

        fn build(&self, mgr: &BddManager) -> BddRef {
            match self {
                Formula::Var(v) => mgr.mk_var(*v).unwrap(),
                Formula::Not(f) => mgr.not(&f.build(mgr)).unwrap(),
                Formula::Bin(op, a, b) => {
                    mgr.apply(*op, &a.build(mgr), &b.build(mgr)).unwrap()
                }
            }
        }
    }

    fn assignments(n: u32) -> impl Iterator<Item = Vec<bool>> {
        (0..1u64 << n).map(move |bits| (0..n).map(|i| bits >> i & 1 == 1).collect())
    }

    #[test]
    fn var_contradiction_and_tautology() {
        let mgr = BddManager::new(3);
        let x0 = mgr.mk_var(0).unwrap();
        let nx0 = mgr.not(&x0).unwrap();
        assert!(mgr.and(&x0, &nx0).unwrap().is_false());
        assert!(mgr.or(&x0, &nx0).unwrap().is_true());
        let x1 = mgr.mk_var(1).unwrap();
        let all = VarSet::new(vec![0, 1, 2]);
        assert_eq!(mgr.sat_count(&x1, &all).unwrap(), 4);
    }

    #[test]
    fn mk_var_out_of_range() {
        let mgr = BddManager::new(2);
        assert_eq!(
            mgr.mk_var(2).unwrap_err(),
            BddError::IndexOutOfRange { index: 2, count: 2 }
        );
    }

    #[test]
    fn manager_mismatch_rejected() {
        let m1 = BddManager::new(2);
        let m2 = BddManager::new(2);
        let a = m1.mk_var(0).unwrap();
        let b = m2.mk_var(0).unwrap();
        assert_eq!(m1.and(&a, &b).unwrap_err(), BddError::ManagerMismatch);
    }

    #[test]
    fn apply_identities() {
        let mgr = BddManager::new(4);
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let f = Formula::random(&mut rng, 4, 4).build(&mgr);
            assert_eq!(mgr.and(&f, &mgr.constant(true)).unwrap(), f);
            assert_eq!(mgr.not(&mgr.not(&f).unwrap()).unwrap(), f);
        }
    }

    #[test]
    fn apply_matches_truth_tables() {
        let vars = 8;
        let mgr = BddManager::new(vars);
        let mut rng = SplitMix64::new(42);
        for _ in 0..200 {
            let formula = Formula::random(&mut rng, vars, 5);
            let bdd = formula.build(&mgr);
            for a in assignments(vars) {
                assert_eq!(mgr.eval(&bdd, &a), formula.eval(&a));
            }
        }
    }

    #[test]
    fn exists_matches_bruteforce() {
        let vars = 8;
        let mgr = BddManager::new(vars);
        let mut rng = SplitMix64::new(7);
        for _ in 0..100 {
            let formula = Formula::random(&mut rng, vars, 5);
            let bdd = formula.build(&mgr);
            let k = rng.uniform(vars as u64 + 1) as usize;
            let qvars: Vec<u32> = (0..vars).filter(|_| rng.uniform(2) == 1).take(k).collect();
            let qset = VarSet::new(qvars.clone());
            let quantified = mgr.exists(&bdd, &qset).unwrap();
            for a in assignments(vars) {
                // brute-force OR over assignments of quantified vars
                let mut expected = false;
                for bits in 0..1u64 << qvars.len() {
                    let mut b = a.clone();
                    for (i, &v) in qvars.iter().enumerate() {
                        b[v as usize] = bits >> i & 1 == 1;
                    }
                    expected |= formula.eval(&b);
                }
                assert_eq!(mgr.eval(&quantified, &a), expected);
            }
        }
    }

    #[test]
    fn exists_trivial_cases() {
        let mgr = BddManager::new(3);
        let x0 = mgr.mk_var(0).unwrap();
        let x1 = mgr.mk_var(1).unwrap();
        let f = mgr.and(&x0, &x1).unwrap();
        assert_eq!(mgr.exists(&f, &VarSet::new(vec![0])).unwrap(), x1);
        assert_eq!(mgr.exists(&f, &VarSet::empty()).unwrap(), f);
    }

    #[test]
    fn rename_shifts_and_rejects_order_violations() {
        let mgr = BddManager::new(4);
        let x1 = mgr.mk_var(1).unwrap();
        let x0 = mgr.mk_var(0).unwrap();
        assert_eq!(mgr.rename(&x1, &[(1, 0)]).unwrap(), x0);
        assert_eq!(mgr.rename(&mgr.constant(true), &[(0, 3)]).unwrap(), mgr.constant(true));
        // x0 ∧ x1 with 1↦0 collapses two variables onto one position
        let f = mgr.and(&x0, &x1).unwrap();
        assert_eq!(
            mgr.rename(&f, &[(1, 0)]).unwrap_err(),
            BddError::NonOrderPreservingRename
        );
    }

    #[test]
    fn rename_matches_semantics() {
        let vars = 8;
        let mgr = BddManager::new(vars);
        let mut rng = SplitMix64::new(13);
        // interleaved shift: even vars are sources, odd are targets
        let map: Vec<(u32, u32)> = (0..vars / 2).map(|i| (2 * i, 2 * i + 1)).collect();
        for _ in 0..50 {
            // restrict the formula to even variables
            let formula = Formula::random(&mut rng, vars / 2, 4);
            let to_even = |f: &Formula| -> BddRef {
                fn go(f: &Formula, mgr: &BddManager) -> BddRef {
                    match f {
                        Formula::Var(v) => mgr.mk_var(2 * v).unwrap(),
                        Formula::Not(g) => mgr.not(&go(g, mgr)).unwrap(),
                        Formula::Bin(op, a, b) => {
                            mgr.apply(*op, &go(a, mgr), &go(b, mgr)).unwrap()
                        }
                    }
                }
                go(f, &mgr)
            };
            let bdd = to_even(&formula);
            let renamed = mgr.rename(&bdd, &map).unwrap();
            for a in assignments(vars) {
                let projected: Vec<bool> = (0..vars / 2).map(|i| a[(2 * i + 1) as usize]).collect();
                assert_eq!(mgr.eval(&renamed, &a), formula.eval(&projected));
            }
        }
    }

    #[test]
    fn sat_count_basics() {
        let mgr = BddManager::new(3);
        let all = VarSet::new(vec![0, 1, 2]);
        assert_eq!(mgr.sat_count(&mgr.constant(true), &all).unwrap(), 8);
        assert_eq!(mgr.sat_count(&mgr.constant(false), &all).unwrap(), 0);
        let x2 = mgr.mk_var(2).unwrap();
        assert_eq!(mgr.sat_count(&x2, &all).unwrap(), 4);
        assert_eq!(
            mgr.sat_count(&x2, &VarSet::new(vec![0, 1])).unwrap_err(),
            BddError::SupportOutsideVars { var: 2 }
        );
    }

    #[test]
    fn sat_count_matches_truth_tables() {
        let vars = 8;
        let mgr = BddManager::new(vars);
        let all = VarSet::new((0..vars).collect());
        let mut rng = SplitMix64::new(99);
        for _ in 0..50 {
            let formula = Formula::random(&mut rng, vars, 5);
            let bdd = formula.build(&mgr);
            let expected = assignments(vars).filter(|a| formula.eval(a)).count() as u64;
            assert_eq!(mgr.sat_count(&bdd, &all).unwrap(), expected);
        }
    }

    #[test]
    fn node_count_matches_reachability_walk() {
        let vars = 16;
        let mgr = BddManager::new(vars);
        let mut rng = SplitMix64::new(3);
        assert_eq!(mgr.node_count(&mgr.constant(true)), 0);
        assert_eq!(mgr.node_count(&mgr.mk_var(5).unwrap()), 1);
        for _ in 0..20 {
            let f = Formula::random(&mut rng, vars, 6).build(&mgr);
            // independent walk over (var, low, high) triples via DOT output
            let dot = mgr.to_dot(&f);
            let labelled = dot.lines().filter(|l| l.contains("[label=\"x")).count();
            assert_eq!(mgr.node_count(&f), labelled);
        }
    }

    #[test]
    fn canonicity_semantic_equality_is_node_identity() {
        let vars = 6;
        let mgr = BddManager::new(vars);
        let mut rng = SplitMix64::new(17);
        let mut built: Vec<(Formula, BddRef)> = Vec::new();
        for _ in 0..60 {
            let formula = Formula::random(&mut rng, vars, 4);
            let bdd = formula.build(&mgr);
            built.push((formula, bdd));
        }
        for i in 0..built.len() {
            for j in i + 1..built.len() {
                let equal_tables = assignments(vars)
                    .all(|a| built[i].0.eval(&a) == built[j].0.eval(&a));
                assert_eq!(equal_tables, built[i].1 == built[j].1);
            }
        }
    }

    #[test]
    fn node_budget_exhaustion() {
        let mgr = BddManager::with_node_budget(16, 8);
        let mut acc = mgr.constant(false);
        let mut hit_budget = false;
        let mut parity = mgr.constant(false);
        for i in 0..16 {
            match mgr.mk_var(i).and_then(|x| mgr.xor(&parity, &x)) {
                Ok(p) => parity = p,
                Err(BddError::NodeBudgetExceeded { .. }) => {
                    hit_budget = true;
                    break;
                }
                Err(e) => panic!("unexpected error: {e}"),
            }
            acc = parity.clone();
        }
        assert!(hit_budget);
        let _ = acc;
    }

    #[test]
    fn gc_reclaims_dead_nodes() {
        let mgr = BddManager::with_config(8, None, 16);
        for seed in 0..50u64 {
            let mut rng = SplitMix64::new(seed);
            let f = Formula::random(&mut rng, 8, 6).build(&mgr);
            drop(f);
        }
        // With a 16-node threshold, collections must have happened and the
        // live count must have dropped back to the rooted nodes only.
        assert!(mgr.gc_runs() > 0);
        assert!(mgr.live_nodes() <= mgr.peak_live_nodes());
        let mut rng = SplitMix64::new(1234);
        let formula = Formula::random(&mut rng, 8, 6);
        let survivor = formula.build(&mgr);
        for seed in 50..80u64 {
            let mut rng = SplitMix64::new(seed);
            let f = Formula::random(&mut rng, 8, 6).build(&mgr);
            drop(f);
        }
        // survivor stays valid across collections
        for a in assignments(8) {
            assert_eq!(mgr.eval(&survivor, &a), formula.eval(&a));
        }
    }

    #[test]
    fn determinism_across_runs() {
        let run = || {
            let mgr = BddManager::new(10);
            let mut rng = SplitMix64::new(2024);
            let mut ids = Vec::new();
            for _ in 0..30 {
                let f = Formula::random(&mut rng, 10, 5).build(&mgr);
                ids.push((f.id(), mgr.node_count(&f)));
            }
            (ids, mgr.live_nodes())
        };
        assert_eq!(run(), run());
    }
}
