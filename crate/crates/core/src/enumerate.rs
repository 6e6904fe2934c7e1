//! Instance corpora: unlabeled trees and small integer point sets.

use std::collections::BTreeSet;

/// A free tree in canonical form, vertices numbered in preorder of the
/// canonical rooting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnlabeledTree {
    n: usize,
    edges: Vec<(usize, usize)>,
    code: String,
}

impl UnlabeledTree {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// `(parent, child)` pairs over vertices `0..n`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Canonical parenthesis code; equal codes mean isomorphic trees.
    pub fn code(&self) -> &str {
        &self.code
    }

    /// Builds the tree encoded by a canonical code.
    fn from_code(code: &str) -> Self {
        let mut edges = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut n = 0;
        for ch in code.chars() {
            match ch {
                '(' => {
                    if let Some(&parent) = stack.last() {
                        edges.push((parent, n));
                    }
                    stack.push(n);
                    n += 1;
                }
                ')' => {
                    stack.pop();
                }
                _ => unreachable!("codes only hold parentheses"),
            }
        }
        UnlabeledTree {
            n,
            edges,
            code: code.to_string(),
        }
    }
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_code(adj, w, v))
        .collect();
    kids.sort_unstable();
    let mut out = String::with_capacity(2 + kids.iter().map(String::len).sum::<usize>());
    out.push('(');
    for k in kids {
        out.push_str(&k);
    }
    out.push(')');
    out
}

/// The one or two vertices minimizing eccentricity.
fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &leaf in &leaves {
            degree[leaf] = 0;
            for &w in &adj[leaf] {
                if degree[w] > 0 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        leaves = next;
    }
    leaves.sort_unstable();
    leaves
}

/// Canonical code of a free tree given as an edge list on `0..n`.
pub fn canonical_code(n: usize, edges: &[(usize, usize)]) -> String {
    let adj = adjacency(n, edges);
    centers(&adj)
        .into_iter()
        .map(|c| rooted_code(&adj, c, usize::MAX))
        .min()
        .expect("nonempty tree")
}

/// Every tree on `n >= 1` vertices up to isomorphism, sorted by code.
pub fn unlabeled_trees(n: usize) -> Vec<UnlabeledTree> {
    assert!(n >= 1, "trees need at least one vertex");
    let mut codes: BTreeSet<String> = BTreeSet::from(["()".to_string()]);
    for size in 2..=n {
        let mut next = BTreeSet::new();
        for code in &codes {
            let t = UnlabeledTree::from_code(code);
            for v in 0..t.n {
                let mut edges = t.edges.clone();
                edges.push((v, size - 1));
                next.insert(canonical_code(size, &edges));
            }
        }
        codes = next;
    }
    codes.iter().map(|c| UnlabeledTree::from_code(c)).collect()
}

/// Trees of every size in `lo..=hi`, smallest first.
pub fn unlabeled_trees_up_to(lo: usize, hi: usize) -> Vec<UnlabeledTree> {
    (lo.max(1)..=hi).flat_map(unlabeled_trees).collect()
}

/// The `n`-point configuration on a line. Every set of `n` distinct
/// collinear points induces this same convex geometry.
pub fn line_points(n: usize) -> Vec<i64> {
    (0..n as i64).collect()
}

fn combinations(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn normalize(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    let mx = pts.iter().map(|p| p.0).min().unwrap_or(0);
    let my = pts.iter().map(|p| p.1).min().unwrap_or(0);
    for p in pts.iter_mut() {
        *p = (p.0 - mx, p.1 - my);
    }
    pts.sort_unstable();
    pts
}

type PointMap = fn((i64, i64)) -> (i64, i64);

/// Representative of `pts` under the square's eight symmetries and
/// translation.
pub fn grid_canonical(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let maps: [PointMap; 8] = [
        |(x, y)| (x, y),
        |(x, y)| (-x, y),
        |(x, y)| (x, -y),
        |(x, y)| (-x, -y),
        |(x, y)| (y, x),
        |(x, y)| (-y, x),
        |(x, y)| (y, -x),
        |(x, y)| (-y, -x),
    ];
    maps.iter()
        .map(|f| normalize(pts.iter().map(|&p| f(p)).collect()))
        .min()
        .expect("eight candidates")
}

/// Point sets of exactly `k` points in the grid `[0, side]^2`, one per
/// symmetry class, sorted.
pub fn grid_point_sets(side: i64, k: usize) -> Vec<Vec<(i64, i64)>> {
    let cells: Vec<(i64, i64)> = (0..=side)
        .flat_map(|x| (0..=side).map(move |y| (x, y)))
        .collect();
    let mut seen = BTreeSet::new();
    if k == 0 {
        return Vec::new();
    }
    combinations(cells.len(), k, |idx| {
        let pts: Vec<_> = idx.iter().map(|&i| cells[i]).collect();
        seen.insert(grid_canonical(&pts));
    });
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts_match_oeis_a000055() {
        let counts: Vec<usize> = (1..=9).map(|n| unlabeled_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47]);
    }

    #[test]
    fn canonical_code_is_label_invariant() {
        // star centred at 0 vs star centred at 3
        let a = canonical_code(4, &[(0, 1), (0, 2), (0, 3)]);
        let b = canonical_code(4, &[(3, 1), (2, 3), (3, 0)]);
        assert_eq!(a, b);
        let path = canonical_code(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_ne!(a, path);
    }

    #[test]
    fn trees_round_trip_through_codes() {
        for t in unlabeled_trees(7) {
            assert_eq!(t.edges().len(), 6);
            assert_eq!(canonical_code(t.vertex_count(), t.edges()), t.code());
        }
    }

    #[test]
    fn combination_counts() {
        let mut c = 0;
        combinations(6, 3, |_| c += 1);
        assert_eq!(c, 20);
        let mut c = 0;
        combinations(4, 4, |_| c += 1);
        assert_eq!(c, 1);
    }

    #[test]
    fn small_grid_classes() {
        // two points in a 2x2 grid: side, diagonal
        assert_eq!(grid_point_sets(1, 2).len(), 2);
        assert_eq!(grid_point_sets(1, 4).len(), 1);
        assert_eq!(grid_point_sets(4, 1), vec![vec![(0, 0)]]);
    }
}
