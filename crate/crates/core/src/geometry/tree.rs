//! Vertex and edge geometries of finite trees.
//!
//! Convex sets are the vertex sets (resp. edge sets) of connected subgraphs.
//! Closures are Steiner subtrees, computed by walking terminals up a
//! per-root parent table until they meet the part already collected.

use crate::subset::Subset;

use super::GeometryError;

/// Rooted parent pointers for every choice of root, over up to 128 vertices.
#[derive(Clone, Debug)]
struct ParentTable {
    /// `parent[root][v]`, with `parent[root][root] == root`.
    parent: Vec<Vec<u8>>,
}

impl ParentTable {
    fn new(adj: &[Vec<usize>]) -> Self {
        let n = adj.len();
        let mut parent = vec![vec![0u8; n]; n];
        let mut stack = Vec::with_capacity(n);
        for root in 0..n {
            let row = &mut parent[root];
            let mut seen = vec![false; n];
            seen[root] = true;
            row[root] = root as u8;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        row[w] = v as u8;
                        stack.push(w);
                    }
                }
            }
        }
        ParentTable { parent }
    }

    /// Vertex set of the minimal subtree spanning `terminals` (a 128-bit mask).
    fn steiner(&self, terminals: u128) -> u128 {
        if terminals == 0 {
            return 0;
        }
        let root = terminals.trailing_zeros() as usize;
        let row = &self.parent[root];
        let mut span: u128 = 1 << root;
        let mut rest = terminals & (terminals - 1);
        while rest != 0 {
            let mut v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            while span >> v & 1 == 0 {
                span |= 1 << v;
                v = row[v] as usize;
            }
        }
        span
    }
}

/// Checks that `edges` form a spanning tree on `n` vertices.
fn check_tree(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>, GeometryError> {
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a == b {
            return Err(GeometryError::NotATree(format!("self-loop at vertex #{a}")));
        }
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        if ra == rb {
            return Err(GeometryError::NotATree(format!(
                "edge #{a}-#{b} closes a cycle"
            )));
        }
        uf[ra] = rb;
        adj[a].push(b);
        adj[b].push(a);
    }
    let root = find(&mut uf, 0);
    if let Some(v) = (1..n).find(|&v| find(&mut uf, v) != root) {
        return Err(GeometryError::NotATree(format!(
            "vertex #{v} is disconnected from vertex #0"
        )));
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
    }
    Ok(adj)
}

/// Vertex geometry: ground elements are the tree's vertices.
#[derive(Clone, Debug)]
pub struct VertexTree {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    parents: ParentTable,
}

impl VertexTree {
    pub(crate) fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GeometryError> {
        let adj = check_tree(n, edges)?;
        let parents = ParentTable::new(&adj);
        Ok(VertexTree {
            adj,
            edges: edges.to_vec(),
            parents,
        })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub(crate) fn closure(&self, a: Subset) -> Subset {
        Subset::from_bits(self.parents.steiner(a.bits() as u128) as u64)
    }

    /// Vertex sets of the components of `T - x`, one per neighbour of `x`.
    pub(crate) fn components_without(&self, x: usize) -> Vec<Subset> {
        self.adj[x]
            .iter()
            .map(|&start| {
                let mut comp = Subset::singleton(start);
                let mut stack = vec![start];
                while let Some(v) = stack.pop() {
                    for &w in &self.adj[v] {
                        if w != x && !comp.contains(w) {
                            comp = comp.with(w);
                            stack.push(w);
                        }
                    }
                }
                comp
            })
            .collect()
    }
}

/// Edge geometry: ground elements are the tree's edges.
#[derive(Clone, Debug)]
pub struct EdgeTree {
    vertex_count: usize,
    ends: Vec<(usize, usize)>,
    vertex_adj: Vec<Vec<usize>>,
    parents: ParentTable,
}

impl EdgeTree {
    /// `ends[i]` are the endpoints of ground element `i`.
    pub(crate) fn new(vertex_count: usize, ends: &[(usize, usize)]) -> Result<Self, GeometryError> {
        if vertex_count > 128 {
            return Err(GeometryError::GroundTooLarge(vertex_count - 1));
        }
        let vertex_adj = check_tree(vertex_count, ends)?;
        let parents = ParentTable::new(&vertex_adj);
        Ok(EdgeTree {
            vertex_count,
            ends: ends.to_vec(),
            vertex_adj,
            parents,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    fn endpoints(&self, a: Subset) -> u128 {
        a.iter().fold(0u128, |acc, e| {
            let (u, v) = self.ends[e];
            acc | 1 << u | 1 << v
        })
    }

    fn edges_within(&self, vertices: u128) -> Subset {
        self.ends
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| vertices >> u & 1 == 1 && vertices >> v & 1 == 1)
            .map(|(i, _)| i)
            .collect()
    }

    pub(crate) fn closure(&self, a: Subset) -> Subset {
        if a.is_empty() {
            return Subset::EMPTY;
        }
        self.edges_within(self.parents.steiner(self.endpoints(a)))
    }

    /// Edge sets of the (at most two) sides left after deleting edge `x`;
    /// sides without edges are dropped.
    pub(crate) fn components_without(&self, x: usize) -> Vec<Subset> {
        let (u, v) = self.ends[x];
        [u, v]
            .into_iter()
            .map(|start| {
                let blocked = if start == u { v } else { u };
                let mut seen: u128 = 1 << start;
                let mut stack = vec![start];
                while let Some(p) = stack.pop() {
                    for &q in &self.vertex_adj[p] {
                        if q != blocked && seen >> q & 1 == 0 {
                            seen |= 1 << q;
                            stack.push(q);
                        }
                    }
                }
                self.edges_within(seen)
            })
            .filter(|side| !side.is_empty())
            .collect()
    }
}
