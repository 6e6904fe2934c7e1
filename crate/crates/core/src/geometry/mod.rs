//! Finite convex geometries and their closure operators.
//!
//! Four backends share one interface: an explicit list of convex sets,
//! the vertex and edge geometries of a tree, and integer point sets on
//! the line or in the plane. Labels are mapped once to dense indices and
//! all set algebra afterwards works on [`Subset`] masks.

mod affine;
mod explicit;
mod tree;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::subset::{Subset, MAX_GROUND};

pub use affine::{convex_hull, hull_contains, orient, Point, PointSet, COORD_LIMIT};
pub use explicit::ExplicitFamily;
pub use tree::{EdgeTree, VertexTree};

/// Ground sets up to this size get a precomputed closure table from
/// [`Geometry::with_closure_table`].
pub const CLOSURE_TABLE_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("ground set is empty")]
    EmptyGround,
    #[error("ground set has {0} elements; at most 64 are supported")]
    GroundTooLarge(usize),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("convex geometry axiom {axiom} fails: {witness}")]
    AxiomViolation { axiom: u8, witness: String },
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("points `{first}` and `{second}` coincide")]
    DuplicatePoint { first: String, second: String },
    #[error("affine dimension {0} is not supported (use 1 or 2)")]
    BadDimension(usize),
    #[error("bad coordinates: {0}")]
    BadCoordinates(String),
    #[error("operation needs a tree geometry")]
    WrongBackend,
}

/// Ordered, uniquely labelled ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, GeometryError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(GeometryError::EmptyGround);
        }
        if labels.len() > MAX_GROUND {
            return Err(GeometryError::GroundTooLarge(labels.len()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GeometryError::DuplicateLabel(l.clone()));
            }
        }
        Ok(GroundSet { labels, index })
    }

    /// Labels `1..=n`.
    pub fn numbered(n: usize) -> Result<Self, GeometryError> {
        GroundSet::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.labels.len())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, GeometryError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| GeometryError::UnknownLabel(label.to_string()))
    }

    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset, GeometryError> {
        labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Subset, _>>()
    }

    pub fn labels_of(&self, s: Subset) -> Vec<String> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// `{a,b,c}` in ground order.
    pub fn format(&self, s: Subset) -> String {
        let mut out = String::from("{");
        for (k, i) in s.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&self.labels[i]);
        }
        out.push('}');
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BackendKind {
    Explicit,
    TreeVertex,
    TreeEdge,
    Affine,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Explicit => "explicit",
            BackendKind::TreeVertex => "tree_vertex",
            BackendKind::TreeEdge => "tree_edge",
            BackendKind::Affine => "affine",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Backend {
    Explicit(ExplicitFamily),
    TreeVertex(VertexTree),
    TreeEdge(EdgeTree),
    Affine(PointSet),
}

/// Label-level description of a geometry, as read from an instance file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometryDescriptor {
    Explicit {
        ground: Vec<String>,
        family: Vec<Vec<String>>,
    },
    TreeVertex {
        ground: Vec<String>,
        edges: Vec<(String, String)>,
    },
    /// `edges[i]` names the two endpoint vertices of ground element `i`.
    TreeEdge {
        ground: Vec<String>,
        edges: Vec<(String, String)>,
    },
    Affine {
        ground: Vec<String>,
        dim: u8,
        coords: Vec<Vec<i64>>,
    },
}

/// A validated convex geometry. Immutable once built.
#[derive(Clone, Debug)]
pub struct Geometry {
    ground: GroundSet,
    backend: Backend,
    table: Option<Vec<Subset>>,
}

/// Validates a descriptor and builds the geometry it describes.
pub fn build_geometry(desc: &GeometryDescriptor) -> Result<Geometry, GeometryError> {
    match desc {
        GeometryDescriptor::Explicit { ground, family } => {
            let ground = GroundSet::new(ground.iter().cloned())?;
            let family = family
                .iter()
                .map(|k| ground.subset(k))
                .collect::<Result<Vec<_>, _>>()?;
            Geometry::explicit(ground, family)
        }
        GeometryDescriptor::TreeVertex { ground, edges } => {
            let ground = GroundSet::new(ground.iter().cloned())?;
            let edges = edges
                .iter()
                .map(|(a, b)| Ok((ground.index_of(a)?, ground.index_of(b)?)))
                .collect::<Result<Vec<_>, GeometryError>>()?;
            Geometry::tree_vertex(ground, &edges)
        }
        GeometryDescriptor::TreeEdge { ground, edges } => {
            let ground = GroundSet::new(ground.iter().cloned())?;
            if edges.len() != ground.len() {
                return Err(GeometryError::NotATree(format!(
                    "{} edge labels but {} edges",
                    ground.len(),
                    edges.len()
                )));
            }
            let mut vertex_ids: HashMap<&str, usize> = HashMap::new();
            let mut ends = Vec::with_capacity(edges.len());
            for (a, b) in edges {
                let mut pair = [0usize; 2];
                for (slot, v) in pair.iter_mut().zip([a.as_str(), b.as_str()]) {
                    let next = vertex_ids.len();
                    *slot = *vertex_ids.entry(v).or_insert(next);
                }
                ends.push((pair[0], pair[1]));
            }
            Geometry::tree_edge(ground, vertex_ids.len(), &ends)
        }
        GeometryDescriptor::Affine { ground, dim, coords } => {
            let ground = GroundSet::new(ground.iter().cloned())?;
            if coords.len() != ground.len() {
                return Err(GeometryError::BadCoordinates(format!(
                    "{} points but {} coordinate entries",
                    ground.len(),
                    coords.len()
                )));
            }
            Geometry::affine(ground, *dim, coords)
        }
    }
}

impl Geometry {
    pub fn explicit(ground: GroundSet, family: Vec<Subset>) -> Result<Self, GeometryError> {
        let backend = Backend::Explicit(ExplicitFamily::new(&ground, family)?);
        Ok(Geometry {
            ground,
            backend,
            table: None,
        })
    }

    pub fn tree_vertex(ground: GroundSet, edges: &[(usize, usize)]) -> Result<Self, GeometryError> {
        if edges.len() + 1 != ground.len() {
            return Err(GeometryError::NotATree(format!(
                "{} vertices need {} edges, got {}",
                ground.len(),
                ground.len() - 1,
                edges.len()
            )));
        }
        let backend = Backend::TreeVertex(VertexTree::new(ground.len(), edges)?);
        Ok(Geometry {
            ground,
            backend,
            table: None,
        })
    }

    /// `ends[i]` are the endpoints (dense vertex ids `0..vertex_count`) of
    /// ground element `i`.
    pub fn tree_edge(
        ground: GroundSet,
        vertex_count: usize,
        ends: &[(usize, usize)],
    ) -> Result<Self, GeometryError> {
        if ends.len() != ground.len() || vertex_count != ends.len() + 1 {
            return Err(GeometryError::NotATree(format!(
                "{} edges span {} vertices",
                ends.len(),
                vertex_count
            )));
        }
        let backend = Backend::TreeEdge(EdgeTree::new(vertex_count, ends)?);
        Ok(Geometry {
            ground,
            backend,
            table: None,
        })
    }

    pub fn affine(ground: GroundSet, dim: u8, coords: &[Vec<i64>]) -> Result<Self, GeometryError> {
        let backend = Backend::Affine(PointSet::new(dim, coords, ground.labels())?);
        Ok(Geometry {
            ground,
            backend,
            table: None,
        })
    }

    /// Precomputes the closure of every subset when the ground set is small
    /// enough; otherwise returns `self` unchanged.
    pub fn with_closure_table(mut self) -> Self {
        let n = self.ground.len();
        if n <= CLOSURE_TABLE_LIMIT && self.table.is_none() {
            let table = (0..1u64 << n)
                .map(|bits| self.backend_closure(Subset::from_bits(bits)))
                .collect();
            self.table = Some(table);
        }
        self
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn size(&self) -> usize {
        self.ground.len()
    }

    pub fn full(&self) -> Subset {
        self.ground.full()
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn kind(&self) -> BackendKind {
        match self.backend {
            Backend::Explicit(_) => BackendKind::Explicit,
            Backend::TreeVertex(_) => BackendKind::TreeVertex,
            Backend::TreeEdge(_) => BackendKind::TreeEdge,
            Backend::Affine(_) => BackendKind::Affine,
        }
    }

    fn backend_closure(&self, a: Subset) -> Subset {
        match &self.backend {
            Backend::Explicit(f) => f.closure(a),
            Backend::TreeVertex(t) => t.closure(a),
            Backend::TreeEdge(t) => t.closure(a),
            Backend::Affine(p) => p.closure(a),
        }
    }

    /// Smallest convex superset of `a`.
    ///
    /// The closure of the empty set is the intersection of all convex sets,
    /// which is nonempty for explicit families that leave out the empty set.
    #[inline]
    pub fn closure(&self, a: Subset) -> Subset {
        debug_assert!(a.is_subset(self.full()));
        match &self.table {
            Some(t) => t[a.bits() as usize],
            None => self.backend_closure(a),
        }
    }

    pub fn is_convex(&self, a: Subset) -> bool {
        self.closure(a) == a
    }

    /// `{x in a : x not in closure(a - x)}`.
    pub fn extreme_points(&self, a: Subset) -> Subset {
        a.iter()
            .filter(|&x| !self.closure(a.without(x)).contains(x))
            .collect()
    }

    /// Components left after deleting ground element `x` from a tree
    /// geometry: vertex sets for the vertex geometry, nonempty edge sets
    /// for the edge geometry. Sorted by mask.
    pub fn removal_components(&self, x: usize) -> Result<Vec<Subset>, GeometryError> {
        let mut comps = match &self.backend {
            Backend::TreeVertex(t) => t.components_without(x),
            Backend::TreeEdge(t) => t.components_without(x),
            _ => return Err(GeometryError::WrongBackend),
        };
        comps.sort_unstable();
        Ok(comps)
    }

    /// Every convex set, found by walking down from the ground set through
    /// extreme-point deletions.
    pub fn convex_sets(&self) -> Vec<Subset> {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.full()];
        seen.insert(self.full());
        while let Some(c) = stack.pop() {
            for x in self.extreme_points(c) {
                let child = c.without(x);
                if seen.insert(child) {
                    stack.push(child);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(ix: &[usize]) -> Subset {
        Subset::from_indices(ix.iter().copied())
    }

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    /// Tree with labels 1..=10 (stored at indices 0..=9).
    fn two_branch_tree() -> Geometry {
        let edges = [(1, 2), (2, 3), (3, 4), (3, 5), (1, 6), (6, 7), (7, 8), (7, 9), (6, 10)];
        let edges: Vec<_> = edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
        Geometry::tree_vertex(GroundSet::numbered(10).unwrap(), &edges).unwrap()
    }

    fn lab(g: &Geometry, ls: &[u32]) -> Subset {
        let v: Vec<String> = ls.iter().map(|x| x.to_string()).collect();
        g.ground().subset(&v).unwrap()
    }

    #[test]
    fn explicit_nonempty_base_family_is_valid() {
        let d = GeometryDescriptor::Explicit {
            ground: labels(&["1", "2", "3", "4"]),
            family: vec![labels(&["2", "3", "4"]), labels(&["1", "2", "3", "4"])],
        };
        let g = build_geometry(&d).unwrap();
        // tau(empty) is the intersection of every convex set
        assert_eq!(g.closure(Subset::EMPTY), s(&[1, 2, 3]));
        let d2 = GeometryDescriptor::Explicit {
            ground: labels(&["1", "2", "3", "4"]),
            family: vec![
                labels(&["2", "3"]),
                labels(&["2", "3", "4"]),
                labels(&["1", "2", "3"]),
                labels(&["1", "2", "3", "4"]),
            ],
        };
        assert!(build_geometry(&d2).is_ok());
    }

    #[test]
    fn intersection_axiom_violation() {
        let d = GeometryDescriptor::Explicit {
            ground: labels(&["1", "2", "3"]),
            family: vec![labels(&["1"]), labels(&["2"]), labels(&["1", "2", "3"])],
        };
        match build_geometry(&d) {
            Err(GeometryError::AxiomViolation { axiom: 2, witness }) => {
                assert!(witness.contains("{1} & {2} = {}"), "{witness}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_ground_and_augmentation_violations() {
        let d = GeometryDescriptor::Explicit {
            ground: labels(&["1", "2"]),
            family: vec![labels(&["1"])],
        };
        assert!(matches!(
            build_geometry(&d),
            Err(GeometryError::AxiomViolation { axiom: 1, .. })
        ));
        let d = GeometryDescriptor::Explicit {
            ground: labels(&["1", "2", "3"]),
            family: vec![vec![], labels(&["1", "2", "3"])],
        };
        assert!(matches!(
            build_geometry(&d),
            Err(GeometryError::AxiomViolation { axiom: 3, .. })
        ));
    }

    #[test]
    fn triangle_is_not_a_tree() {
        let d = GeometryDescriptor::TreeVertex {
            ground: labels(&["1", "2", "3"]),
            edges: vec![
                ("1".into(), "2".into()),
                ("2".into(), "3".into()),
                ("1".into(), "3".into()),
            ],
        };
        assert!(matches!(build_geometry(&d), Err(GeometryError::NotATree(_))));
    }

    #[test]
    fn label_and_point_errors() {
        assert_eq!(
            GroundSet::new(Vec::<String>::new()),
            Err(GeometryError::EmptyGround)
        );
        assert_eq!(
            GroundSet::new(["a", "a"]),
            Err(GeometryError::DuplicateLabel("a".into()))
        );
        let d = GeometryDescriptor::Affine {
            ground: labels(&["p", "q"]),
            dim: 2,
            coords: vec![vec![1, 1], vec![1, 1]],
        };
        assert!(matches!(
            build_geometry(&d),
            Err(GeometryError::DuplicatePoint { .. })
        ));
        let d = GeometryDescriptor::Affine {
            ground: labels(&["p"]),
            dim: 3,
            coords: vec![vec![1, 1, 1]],
        };
        assert_eq!(build_geometry(&d).unwrap_err(), GeometryError::BadDimension(3));
    }

    #[test]
    fn two_branch_tree_closures_and_convexity() {
        let g = two_branch_tree();
        assert_eq!(g.closure(lab(&g, &[1, 2, 3])), lab(&g, &[1, 2, 3]));
        assert_eq!(g.closure(lab(&g, &[4, 10])), lab(&g, &[1, 2, 3, 4, 6, 10]));
        assert!(g.is_convex(lab(&g, &[6, 7, 9, 10])));
        assert!(g.is_convex(lab(&g, &[1, 2, 3, 4, 6, 7])));
        assert!(!g.is_convex(lab(&g, &[4, 10])));
        assert!(!g.is_convex(lab(&g, &[2, 3, 6, 7, 9])));
        assert!(g.is_convex(g.full()));
        assert_eq!(g.extreme_points(g.full()), lab(&g, &[4, 5, 8, 9, 10]));
    }

    #[test]
    fn affine_triangle_interior_extremes() {
        let g = Geometry::affine(
            GroundSet::numbered(4).unwrap(),
            2,
            &[vec![0, 0], vec![4, 0], vec![0, 4], vec![1, 1]],
        )
        .unwrap();
        assert_eq!(g.extreme_points(g.full()), s(&[0, 1, 2]));
        assert_eq!(g.extreme_points(s(&[3])), s(&[3]));
        assert_eq!(g.closure(s(&[0, 1, 2])), g.full());
    }

    #[test]
    fn removal_components_examples() {
        // Example-20 tree
        let edges = [(1, 2), (2, 3), (2, 4), (1, 5), (5, 6), (1, 7), (7, 8), (1, 9)];
        let edges: Vec<_> = edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
        let g = Geometry::tree_vertex(GroundSet::numbered(9).unwrap(), &edges).unwrap();
        let mut comps = g.removal_components(0).unwrap();
        comps.sort_unstable();
        let mut want = vec![lab(&g, &[2, 3, 4]), lab(&g, &[5, 6]), lab(&g, &[7, 8]), lab(&g, &[9])];
        want.sort_unstable();
        assert_eq!(comps, want);

        let affine = Geometry::affine(GroundSet::numbered(1).unwrap(), 1, &[vec![0]]).unwrap();
        assert_eq!(affine.removal_components(0), Err(GeometryError::WrongBackend));
    }

    #[test]
    fn edge_geometry_figure_tree() {
        // vertices 1..10 as in the vertex example; edges lettered A..I
        let d = GeometryDescriptor::TreeEdge {
            ground: labels(&["A", "B", "C", "D", "E", "F", "G", "H", "I"]),
            edges: [(1, 2), (3, 2), (4, 3), (5, 3), (1, 6), (6, 7), (7, 8), (7, 9), (10, 6)]
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        };
        let g = build_geometry(&d).unwrap();
        let gs = g.ground();
        let set = |ls: &[&str]| gs.subset(ls).unwrap();
        assert!(g.is_convex(set(&["A", "B", "C", "D"])));
        assert!(g.is_convex(set(&["A", "E", "I", "F"])));
        assert!(!g.is_convex(set(&["B", "E", "G"])));
        assert!(!g.is_convex(set(&["A", "F", "G"])));
        let comps = g.removal_components(gs.index_of("A").unwrap()).unwrap();
        assert_eq!(comps, vec![set(&["B", "C", "D"]), set(&["E", "F", "G", "H", "I"])]);
    }

    #[test]
    fn closure_table_matches_direct() {
        let g = two_branch_tree();
        let cached = g.clone().with_closure_table();
        for bits in (0..1u64 << 10).step_by(7) {
            let a = Subset::from_bits(bits);
            assert_eq!(g.closure(a), cached.closure(a));
        }
    }

    #[test]
    fn convex_sets_of_path() {
        let g = Geometry::tree_vertex(GroundSet::numbered(3).unwrap(), &[(0, 1), (1, 2)]).unwrap();
        // empty, three singletons, two edges, whole path
        assert_eq!(g.convex_sets().len(), 7);
    }
}
