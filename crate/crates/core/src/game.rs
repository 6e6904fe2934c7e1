//! The avoidance game on a convex geometry and its Sprague-Grundy values.
//!
//! Players alternately pick unchosen points; a pick is legal only while the
//! closure of everything picked so far still misses part of the winning
//! set. The last player able to move wins.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::geometry::Geometry;
use crate::subset::Subset;

/// A Grundy value.
pub type Nim = u32;

/// The set of points chosen so far.
pub type Position = Subset;

/// Default cap on the ground size the brute-force solver accepts.
pub const DEFAULT_MAX_GROUND: usize = 24;

/// Default cap on the joint position space explored by [`sum_brute`].
pub const DEFAULT_SUM_BUDGET: u128 = 1 << 24;

/// Ground sizes up to this use flat arrays for the memo tables.
const DENSE_LIMIT: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("winning set is empty")]
    EmptyWinningSet,
    #[error("winning set is not contained in the ground set")]
    WinningOutsideGround,
    #[error("position generates the winning set")]
    IllegalPosition,
    #[error("position space of {required} exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}

/// An avoidance game: a geometry plus a nonempty winning set.
#[derive(Clone, Debug)]
pub struct GameSpec {
    geometry: Arc<Geometry>,
    winning: Subset,
}

impl GameSpec {
    pub fn new(geometry: Arc<Geometry>, winning: Subset) -> Result<Self, GameError> {
        if winning.is_empty() {
            return Err(GameError::EmptyWinningSet);
        }
        if !winning.is_subset(geometry.full()) {
            return Err(GameError::WinningOutsideGround);
        }
        Ok(GameSpec { geometry, winning })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn geometry_arc(&self) -> &Arc<Geometry> {
        &self.geometry
    }

    pub fn winning(&self) -> Subset {
        self.winning
    }

    pub fn size(&self) -> usize {
        self.geometry.size()
    }

    /// Same geometry, different winning set.
    pub fn with_winning(&self, winning: Subset) -> Result<Self, GameError> {
        GameSpec::new(self.geometry.clone(), winning)
    }

    #[inline]
    pub fn is_generating(&self, p: Position) -> bool {
        self.winning.is_subset(self.geometry.closure(p))
    }

    /// The start position already generates, so the first player cannot move.
    pub fn is_degenerate(&self) -> bool {
        self.is_generating(Subset::EMPTY)
    }
}

/// Least nonnegative integer not in `values`.
pub fn mex<I: IntoIterator<Item = Nim>>(values: I) -> Nim {
    let mut seen: Vec<bool> = Vec::new();
    for v in values {
        let v = v as usize;
        if v >= seen.len() {
            seen.resize(v + 1, false);
        }
        seen[v] = true;
    }
    seen.iter().position(|&s| !s).unwrap_or(seen.len()) as Nim
}

/// Unchosen points that keep the position non-generating, in ground order.
pub fn legal_moves(spec: &GameSpec, p: Position) -> Result<Vec<usize>, GameError> {
    if spec.is_generating(p) {
        return Err(GameError::IllegalPosition);
    }
    Ok(spec
        .geometry()
        .full()
        .difference(p)
        .iter()
        .filter(|&x| !spec.is_generating(p.with(x)))
        .collect())
}

const UNKNOWN: u8 = u8::MAX;
const LEGAL: u8 = 1;
const GENERATING: u8 = 2;

#[derive(Clone, Debug)]
enum Store {
    Dense { values: Vec<u8>, legality: Vec<u8> },
    Sparse { values: HashMap<u64, u8>, legality: HashMap<u64, bool> },
}

/// Memoized Grundy values keyed by the exact chosen set.
#[derive(Clone, Debug)]
pub struct GrundyTable {
    store: Store,
    size: usize,
    expanded: usize,
}

impl GrundyTable {
    pub fn new(spec: &GameSpec) -> Result<Self, GameError> {
        GrundyTable::with_limit(spec, DEFAULT_MAX_GROUND)
    }

    /// Table for games of up to `max_ground` points.
    pub fn with_limit(spec: &GameSpec, max_ground: usize) -> Result<Self, GameError> {
        let n = spec.size();
        if n > max_ground {
            return Err(GameError::BudgetExceeded {
                required: 1u128 << n,
                budget: 1u128 << max_ground.min(127),
            });
        }
        let store = if n <= DENSE_LIMIT {
            Store::Dense {
                values: vec![UNKNOWN; 1 << n],
                legality: vec![0; 1 << n],
            }
        } else {
            Store::Sparse {
                values: HashMap::new(),
                legality: HashMap::new(),
            }
        };
        Ok(GrundyTable {
            store,
            size: n,
            expanded: 0,
        })
    }

    /// Positions whose value has been computed.
    pub fn expanded(&self) -> usize {
        self.expanded
    }

    pub fn get(&self, p: Position) -> Option<Nim> {
        let v = match &self.store {
            Store::Dense { values, .. } => values[p.bits() as usize],
            Store::Sparse { values, .. } => *values.get(&p.bits())?,
        };
        (v != UNKNOWN).then_some(v as Nim)
    }

    fn set(&mut self, p: Position, v: Nim) {
        debug_assert!(v < UNKNOWN as Nim);
        match &mut self.store {
            Store::Dense { values, .. } => values[p.bits() as usize] = v as u8,
            Store::Sparse { values, .. } => {
                values.insert(p.bits(), v as u8);
            }
        }
        self.expanded += 1;
    }

    fn is_legal(&mut self, spec: &GameSpec, p: Position) -> bool {
        match &mut self.store {
            Store::Dense { legality, .. } => {
                let slot = &mut legality[p.bits() as usize];
                if *slot == 0 {
                    *slot = if spec.is_generating(p) { GENERATING } else { LEGAL };
                }
                *slot == LEGAL
            }
            Store::Sparse { legality, .. } => {
                *legality.entry(p.bits()).or_insert_with(|| !spec.is_generating(p))
            }
        }
    }

    /// Every recorded `(position, value)` pair, ordered by position mask.
    pub fn entries(&self) -> Vec<(Position, Nim)> {
        let mut out: Vec<_> = match &self.store {
            Store::Dense { values, .. } => values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != UNKNOWN)
                .map(|(i, &v)| (Subset::from_bits(i as u64), v as Nim))
                .collect(),
            Store::Sparse { values, .. } => values
                .iter()
                .map(|(&b, &v)| (Subset::from_bits(b), v as Nim))
                .collect(),
        };
        out.sort_unstable();
        out
    }

    /// Options of `p` as `(point, successor)`; `p` must be legal.
    fn options(&mut self, spec: &GameSpec, p: Position) -> Vec<(usize, Position)> {
        Subset::full(self.size)
            .difference(p)
            .iter()
            .map(|x| (x, p.with(x)))
            .filter(|&(_, q)| self.is_legal(spec, q))
            .collect()
    }
}

struct Frame {
    pos: Position,
    next: usize,
    seen: u128,
}

/// Depth-first expansion with an explicit stack; fills `table` for every
/// position reachable from `root`.
fn expand(spec: &GameSpec, table: &mut GrundyTable, root: Position) -> Nim {
    if let Some(v) = table.get(root) {
        return v;
    }
    let n = spec.size();
    let mut stack = vec![Frame {
        pos: root,
        next: 0,
        seen: 0,
    }];
    while let Some(top) = stack.last_mut() {
        let mut descend = None;
        while top.next < n {
            let x = top.next;
            top.next += 1;
            if top.pos.contains(x) {
                continue;
            }
            let child = top.pos.with(x);
            if !table.is_legal(spec, child) {
                continue;
            }
            match table.get(child) {
                Some(v) => top.seen |= 1u128 << v,
                None => {
                    descend = Some(child);
                    break;
                }
            }
        }
        if let Some(child) = descend {
            stack.push(Frame {
                pos: child,
                next: 0,
                seen: 0,
            });
            continue;
        }
        let v = (!top.seen).trailing_zeros() as Nim;
        let pos = top.pos;
        stack.pop();
        table.set(pos, v);
        if let Some(parent) = stack.last_mut() {
            parent.seen |= 1u128 << v;
        }
    }
    table.get(root).expect("root expanded")
}

/// Grundy value of a legal position.
pub fn nim_position(spec: &GameSpec, p: Position, table: &mut GrundyTable) -> Result<Nim, GameError> {
    if !table.is_legal(spec, p) {
        return Err(GameError::IllegalPosition);
    }
    Ok(expand(spec, table, p))
}

/// Grundy value of the start position; 0 when the start already generates.
pub fn nim_game(spec: &GameSpec) -> Result<Nim, GameError> {
    let mut table = GrundyTable::new(spec)?;
    nim_game_with(spec, &mut table)
}

/// [`nim_game`] reusing a caller-owned table.
pub fn nim_game_with(spec: &GameSpec, table: &mut GrundyTable) -> Result<Nim, GameError> {
    if spec.is_degenerate() {
        return Ok(0);
    }
    nim_position(spec, Subset::EMPTY, table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// The player to move wins.
    N,
    /// The player who just moved wins.
    P,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::N => "N-position",
            Outcome::P => "P-position",
        })
    }
}

impl Outcome {
    pub fn from_nim(v: Nim) -> Self {
        if v == 0 {
            Outcome::P
        } else {
            Outcome::N
        }
    }
}

pub fn outcome(spec: &GameSpec) -> Result<Outcome, GameError> {
    nim_game(spec).map(Outcome::from_nim)
}

/// Lowest-index move to a zero position, if one exists.
pub fn best_move(spec: &GameSpec, p: Position, table: &mut GrundyTable) -> Result<Option<usize>, GameError> {
    if !table.is_legal(spec, p) {
        return Err(GameError::IllegalPosition);
    }
    for (x, q) in table.options(spec, p) {
        if expand(spec, table, q) == 0 {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Nim-sum of component values.
pub fn sum_nim<I: IntoIterator<Item = Nim>>(values: I) -> Nim {
    values.into_iter().fold(0, |acc, v| acc ^ v)
}

/// Grundy value of the disjoint sum, computed directly over joint positions.
///
/// A move is a legal move in exactly one component. This does not use the
/// XOR rule and serves as an oracle for [`sum_nim`].
pub fn sum_brute(specs: &[GameSpec], budget: u128) -> Result<Nim, GameError> {
    let total_bits: usize = specs.iter().map(GameSpec::size).sum();
    let required = if total_bits >= 127 {
        u128::MAX
    } else {
        1u128 << total_bits
    };
    if required > budget {
        return Err(GameError::BudgetExceeded { required, budget });
    }
    let mut tables = specs
        .iter()
        .map(|s| GrundyTable::with_limit(s, 64))
        .collect::<Result<Vec<_>, _>>()?;
    let mut memo: HashMap<Vec<Position>, Nim> = HashMap::new();
    let start = vec![Subset::EMPTY; specs.len()];
    Ok(sum_value(specs, &mut tables, &mut memo, start))
}

fn sum_value(
    specs: &[GameSpec],
    tables: &mut [GrundyTable],
    memo: &mut HashMap<Vec<Position>, Nim>,
    state: Vec<Position>,
) -> Nim {
    if let Some(&v) = memo.get(&state) {
        return v;
    }
    let mut seen = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        // a degenerate component offers no moves at all
        if spec.is_generating(state[i]) {
            continue;
        }
        for (_, q) in tables[i].options(spec, state[i]) {
            let mut next = state.clone();
            next[i] = q;
            seen.push(sum_value(specs, tables, memo, next));
        }
    }
    let v = mex(seen);
    memo.insert(state, v);
    v
}
