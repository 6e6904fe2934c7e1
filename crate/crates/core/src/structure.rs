//! Structure classes and the type calculus.
//!
//! Positions are grouped by `ceil(P)`, the intersection of all maximally
//! non-generating sets containing `P`. Within a class the Grundy value only
//! depends on the parity of `|P|`, so the game collapses to a small DAG of
//! classes, each carrying a [`TypeTriple`].

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::game::{mex, GameSpec, Nim, Position};
use crate::geometry::GroundSet;
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("no maximally non-generating sets (degenerate game)")]
    EmptyFamily,
    #[error("position is not contained in any maximally non-generating set")]
    NotContained,
    #[error("option relation has a cycle")]
    CycleDetected,
    #[error("{0} is not a member of the intersection lattice")]
    NotAClass(String),
}

/// The maximally non-generating sets of a game, sorted by mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxNonGenFamily {
    sets: Vec<Subset>,
}

impl MaxNonGenFamily {
    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    /// Non-generating iff contained in some maximal non-generating set.
    pub fn admits(&self, p: Position) -> bool {
        self.sets.iter().any(|m| p.is_subset(*m))
    }

    /// How many members contain `p`.
    pub fn cover_count(&self, p: Position) -> usize {
        self.sets.iter().filter(|m| p.is_subset(**m)).count()
    }
}

/// All maximal subsets `M` with `W` not inside `closure(M)`.
///
/// Every such `M` is convex, and in a convex geometry every convex set is
/// reached from the ground set by deleting extreme points one at a time.
/// The search therefore only walks generating convex sets and records the
/// non-generating children it bumps into.
pub fn maximal_nongenerating(spec: &GameSpec) -> MaxNonGenFamily {
    if spec.is_degenerate() {
        return MaxNonGenFamily { sets: Vec::new() };
    }
    let g = spec.geometry();
    let full = g.full();
    let mut visited: HashSet<Subset> = HashSet::from([full]);
    let mut stack = vec![full];
    let mut candidates = BTreeSet::new();
    while let Some(c) = stack.pop() {
        for x in g.extreme_points(c) {
            let child = c.without(x);
            if !visited.insert(child) {
                continue;
            }
            if spec.is_generating(child) {
                stack.push(child);
            } else {
                candidates.insert(child);
            }
        }
    }
    let sets = candidates
        .into_iter()
        .filter(|&m| {
            full.difference(m)
                .iter()
                .all(|y| spec.is_generating(m.with(y)))
        })
        .collect();
    MaxNonGenFamily { sets }
}

/// `ceil(P)`: the intersection of every member of `family` containing `p`.
pub fn ceil(family: &MaxNonGenFamily, p: Position) -> Result<Subset, StructureError> {
    let mut hit = false;
    let mut acc = Subset::full(64);
    for &m in &family.sets {
        if p.is_subset(m) {
            hit = true;
            acc = acc.intersection(m);
        }
    }
    if hit {
        Ok(acc)
    } else {
        Err(StructureError::NotContained)
    }
}

/// Intersections of all nonempty subfamilies of the maximal non-generating
/// sets. The empty subfamily is left out.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    family: MaxNonGenFamily,
    members: Vec<Subset>,
    frattini: Subset,
}

impl IntersectionLattice {
    pub fn new(family: MaxNonGenFamily) -> Result<Self, StructureError> {
        if family.is_empty() {
            return Err(StructureError::EmptyFamily);
        }
        let mut all: BTreeSet<Subset> = family.sets.iter().copied().collect();
        let mut frontier: Vec<Subset> = all.iter().copied().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &a in &frontier {
                for &m in &family.sets {
                    let meet = a.intersection(m);
                    if all.insert(meet) {
                        next.push(meet);
                    }
                }
            }
            frontier = next;
        }
        let frattini = family
            .sets
            .iter()
            .fold(Subset::full(64), |acc, &m| acc.intersection(m));
        let mut members: Vec<Subset> = all.into_iter().collect();
        members.sort_unstable_by_key(|s| (s.len(), s.bits()));
        Ok(IntersectionLattice {
            family,
            members,
            frattini,
        })
    }

    pub fn for_game(spec: &GameSpec) -> Result<Self, StructureError> {
        IntersectionLattice::new(maximal_nongenerating(spec))
    }

    pub fn family(&self) -> &MaxNonGenFamily {
        &self.family
    }

    /// Ordered by cardinality, then mask; the Frattini subset comes first.
    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn frattini(&self) -> Subset {
        self.frattini
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, class: Subset) -> Option<usize> {
        self.members.iter().position(|&m| m == class)
    }

    pub fn ceil(&self, p: Position) -> Result<Subset, StructureError> {
        ceil(&self.family, p)
    }
}

/// How the option relation between classes is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptionMethod {
    /// Scan every legal position and every legal move. Reference method.
    Exhaustive,
    /// Only look at moves from the class representative `I` itself.
    Representative,
}

/// Pairs `(i, j)` of lattice indices such that some position in class `i`
/// has an option in class `j != i`. Sorted and deduplicated.
pub fn option_relation(
    lattice: &IntersectionLattice,
    spec: &GameSpec,
    method: OptionMethod,
) -> Vec<(usize, usize)> {
    let index = |c: Subset| lattice.index_of(c).expect("ceil lands in the lattice");
    let full = spec.geometry().full();
    let mut edges = BTreeSet::new();
    match method {
        OptionMethod::Exhaustive => {
            for p in full.subsets() {
                if spec.is_generating(p) {
                    continue;
                }
                let from = lattice.ceil(p).expect("legal positions lie in some maximal set");
                for x in full.difference(p).iter() {
                    let q = p.with(x);
                    if spec.is_generating(q) {
                        continue;
                    }
                    let to = lattice.ceil(q).expect("legal positions lie in some maximal set");
                    if to != from {
                        edges.insert((index(from), index(to)));
                    }
                }
            }
        }
        OptionMethod::Representative => {
            let family = lattice.family();
            for (i, &class) in lattice.members().iter().enumerate() {
                for x in full.difference(class).iter() {
                    let q = class.with(x);
                    if let Ok(to) = ceil(family, q) {
                        edges.insert((i, index(to)));
                    }
                }
            }
        }
    }
    edges.into_iter().collect()
}

/// Option classes of a single class `class`.
pub fn class_options(
    lattice: &IntersectionLattice,
    spec: &GameSpec,
    class: Subset,
    method: OptionMethod,
) -> Result<Vec<Subset>, StructureError> {
    let i = lattice
        .index_of(class)
        .ok_or_else(|| StructureError::NotAClass(spec.geometry().ground().format(class)))?;
    Ok(option_relation(lattice, spec, method)
        .into_iter()
        .filter(|&(from, _)| from == i)
        .map(|(_, to)| lattice.members()[to])
        .collect())
}

/// `(pty(I), nim0, nim1)`: the parity of the class representative and the
/// Grundy values of its even and odd positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TypeTriple {
    pub pty: u8,
    pub nim0: Nim,
    pub nim1: Nim,
}

impl TypeTriple {
    /// Value for positions of parity `parity`.
    pub fn nim(&self, parity: u8) -> Nim {
        if parity == 0 {
            self.nim0
        } else {
            self.nim1
        }
    }

    /// Terminal classes only ever have these two types.
    pub fn is_terminal_type(&self) -> bool {
        matches!((self.pty, self.nim0, self.nim1), (0, 0, 1) | (1, 1, 0))
    }
}

#[derive(Clone, Debug)]
pub struct StructureDiagram {
    classes: Vec<Subset>,
    types: Vec<TypeTriple>,
    edges: Vec<(usize, usize)>,
    frattini: usize,
}

impl StructureDiagram {
    pub fn classes(&self) -> &[Subset] {
        &self.classes
    }

    pub fn types(&self) -> &[TypeTriple] {
        &self.types
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn frattini_index(&self) -> usize {
        self.frattini
    }

    pub fn type_of(&self, class: Subset) -> Option<TypeTriple> {
        self.classes
            .iter()
            .position(|&c| c == class)
            .map(|i| self.types[i])
    }

    pub fn is_terminal(&self, i: usize) -> bool {
        !self.edges.iter().any(|&(from, _)| from == i)
    }

    /// The game's value: the even slot of the class holding the start.
    pub fn game_nim(&self) -> Nim {
        self.types[self.frattini].nim0
    }
}

/// Solves every class type bottom-up over the option DAG.
pub fn solve_types(lattice: &IntersectionLattice, spec: &GameSpec) -> Result<StructureDiagram, StructureError> {
    solve_types_with(lattice, spec, OptionMethod::Representative)
}

pub fn solve_types_with(
    lattice: &IntersectionLattice,
    spec: &GameSpec,
    method: OptionMethod,
) -> Result<StructureDiagram, StructureError> {
    let n = lattice.len();
    let edges = option_relation(lattice, spec, method);
    let mut succ = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for &(a, b) in &edges {
        succ[a].push(b);
        indegree[b] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    while let Some(i) = ready.pop() {
        order.push(i);
        for &j in &succ[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.push(j);
            }
        }
    }
    if order.len() != n {
        return Err(StructureError::CycleDetected);
    }

    let mut types: Vec<Option<TypeTriple>> = vec![None; n];
    for &i in order.iter().rev() {
        let pty = lattice.members()[i].parity();
        let opts: Vec<TypeTriple> = succ[i]
            .iter()
            .map(|&j| types[j].expect("successors solved first"))
            .collect();
        let same = mex(opts.iter().map(|t| t.nim(1 - pty)));
        let other = mex(opts.iter().map(|t| t.nim(pty)).chain([same]));
        let (nim0, nim1) = if pty == 0 { (same, other) } else { (other, same) };
        types[i] = Some(TypeTriple { pty, nim0, nim1 });
    }
    let frattini = lattice
        .index_of(lattice.frattini())
        .expect("Frattini subset is a lattice member");
    Ok(StructureDiagram {
        classes: lattice.members().to_vec(),
        types: types.into_iter().map(|t| t.expect("all solved")).collect(),
        edges,
        frattini,
    })
}

/// Nim number via the structure quotient; 0 for degenerate games.
pub fn nim_quotient(spec: &GameSpec) -> Nim {
    match IntersectionLattice::for_game(spec) {
        Ok(lattice) => solve_types(&lattice, spec)
            .expect("option relation strictly grows classes")
            .game_nim(),
        Err(_) => 0,
    }
}

/// Deterministic Graphviz rendering, one node per class in lattice order.
pub fn emit_dot(diagram: &StructureDiagram, ground: &GroundSet) -> String {
    let mut out = String::from("digraph structure {\n  node [shape=box];\n");
    for (i, (&class, t)) in diagram.classes.iter().zip(&diagram.types).enumerate() {
        let label = format!("{} | {} | ({},{})", ground.format(class), t.pty, t.nim0, t.nim1);
        let _ = writeln!(out, "  c{i} [label=\"{}\"];", label.replace('\\', "\\\\").replace('"', "\\\""));
    }
    for &(a, b) in &diagram.edges {
        let _ = writeln!(out, "  c{a} -> c{b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::geometry::Geometry;

    fn triangle_interior() -> GameSpec {
        let g = Geometry::affine(
            GroundSet::numbered(4).unwrap(),
            2,
            &[vec![0, 0], vec![4, 0], vec![0, 4], vec![1, 1]],
        )
        .unwrap();
        GameSpec::new(Arc::new(g), Subset::from_indices([1, 2, 3])).unwrap()
    }

    /// Labels 1..=n to indices.
    fn s(ls: &[usize]) -> Subset {
        ls.iter().map(|l| l - 1).collect()
    }

    #[test]
    fn triangle_interior_family_lattice_and_types() {
        let spec = triangle_interior();
        let m = maximal_nongenerating(&spec);
        let mut want = [s(&[2, 3]), s(&[1, 2, 4]), s(&[1, 3, 4])];
        want.sort_unstable();
        assert_eq!(m.sets(), &want[..]);

        let lattice = IntersectionLattice::new(m).unwrap();
        let mut members = lattice.members().to_vec();
        members.sort_unstable();
        let mut want = vec![
            s(&[2, 3]),
            s(&[1, 2, 4]),
            s(&[1, 3, 4]),
            s(&[2]),
            s(&[1, 4]),
            s(&[3]),
            Subset::EMPTY,
        ];
        want.sort_unstable();
        assert_eq!(members, want);
        assert_eq!(lattice.frattini(), Subset::EMPTY);

        assert_eq!(lattice.ceil(s(&[1])), Ok(s(&[1, 4])));
        assert_eq!(lattice.ceil(s(&[2])), Ok(s(&[2])));
        assert_eq!(lattice.ceil(Subset::EMPTY), Ok(Subset::EMPTY));
        assert_eq!(lattice.ceil(s(&[2, 3, 4])), Err(StructureError::NotContained));

        let d = solve_types(&lattice, &spec).unwrap();
        assert_eq!(
            d.type_of(Subset::EMPTY),
            Some(TypeTriple { pty: 0, nim0: 1, nim1: 0 })
        );
        assert_eq!(d.game_nim(), 1);
        assert_eq!(d.classes().len(), 7);
        assert_eq!(d.edges().len(), 9);
        assert_eq!(nim_quotient(&spec), 1);
    }

    #[test]
    fn triangle_interior_class_options() {
        let spec = triangle_interior();
        let lattice = IntersectionLattice::for_game(&spec).unwrap();
        for method in [OptionMethod::Exhaustive, OptionMethod::Representative] {
            let mut top = class_options(&lattice, &spec, Subset::EMPTY, method).unwrap();
            top.sort_unstable();
            let mut want = vec![s(&[2]), s(&[3]), s(&[1, 4])];
            want.sort_unstable();
            assert_eq!(top, want);
            // maximal classes are terminal
            assert!(class_options(&lattice, &spec, s(&[2, 3]), method).unwrap().is_empty());
            let mut mid = class_options(&lattice, &spec, s(&[2]), method).unwrap();
            mid.sort_unstable();
            assert_eq!(mid, vec![s(&[2, 3]), s(&[1, 2, 4])]);
        }
        assert!(matches!(
            class_options(&lattice, &spec, s(&[4]), OptionMethod::Exhaustive),
            Err(StructureError::NotAClass(_))
        ));
    }

    #[test]
    fn single_member_family() {
        let m = MaxNonGenFamily { sets: vec![s(&[1, 3])] };
        let l = IntersectionLattice::new(m).unwrap();
        assert_eq!(l.members(), &[s(&[1, 3])]);
        assert_eq!(l.frattini(), s(&[1, 3]));
        assert_eq!(
            IntersectionLattice::new(MaxNonGenFamily { sets: vec![] }).unwrap_err(),
            StructureError::EmptyFamily
        );
    }

    #[test]
    fn affine_line_family() {
        let g = Geometry::affine(GroundSet::numbered(3).unwrap(), 1, &[vec![1], vec![2], vec![3]]).unwrap();
        let spec = GameSpec::new(Arc::new(g), s(&[2])).unwrap();
        assert_eq!(maximal_nongenerating(&spec).sets(), &[s(&[1]), s(&[3])]);
        assert_eq!(nim_quotient(&spec), 1);
    }

    #[test]
    fn terminal_class_types() {
        // a single even maximal set: path 1-2-3, W={3}, M={1,2}
        let g = Geometry::tree_vertex(GroundSet::numbered(3).unwrap(), &[(0, 1), (1, 2)]).unwrap();
        let spec = GameSpec::new(Arc::new(g), s(&[3])).unwrap();
        let l = IntersectionLattice::for_game(&spec).unwrap();
        let d = solve_types(&l, &spec).unwrap();
        assert_eq!(d.types(), &[TypeTriple { pty: 0, nim0: 0, nim1: 1 }]);
        assert!(d.types()[0].is_terminal_type());
        assert!(d.is_terminal(0));
    }

    #[test]
    fn dot_output_shape() {
        let spec = triangle_interior();
        let l = IntersectionLattice::for_game(&spec).unwrap();
        let d = solve_types(&l, &spec).unwrap();
        let dot = emit_dot(&d, spec.geometry().ground());
        assert_eq!(dot.matches("[label=").count(), 7);
        assert_eq!(dot.matches(" -> ").count(), 9);
        assert!(dot.contains("c0 [label=\"{} | 0 | (1,0)\"];"), "{dot}");
        assert_eq!(dot, emit_dot(&d, spec.geometry().ground()));
    }
}
