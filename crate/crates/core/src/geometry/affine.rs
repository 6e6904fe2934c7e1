//! Affine convex geometry on integer points in dimension 1 or 2.
//!
//! Hull membership is decided with exact orientation signs in `i128`;
//! no floating point is involved anywhere.

use crate::subset::Subset;

use super::GeometryError;

/// Coordinates beyond this magnitude could overflow the `i128` predicates.
pub const COORD_LIMIT: i64 = 1 << 40;

pub type Point = (i64, i64);

/// Twice the signed area of `(a, b, c)`: positive for a left turn.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> i128 {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    let (bx, by) = (b.0 as i128, b.1 as i128);
    let (cx, cy) = (c.0 as i128, c.1 as i128);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// Point `p` on the closed segment `ab` (assumes nothing about `a != b`).
fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == 0
        && a.0.min(b.0) <= p.0
        && p.0 <= a.0.max(b.0)
        && a.1.min(b.1) <= p.1
        && p.1 <= a.1.max(b.1)
}

/// Strict convex hull in counter-clockwise order (Andrew's monotone chain).
/// Collinear boundary points are dropped; fewer than three points returns
/// the distinct extremes.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    fn chain<'a>(hull: &mut Vec<Point>, pts: impl Iterator<Item = &'a Point>) {
        let base = hull.len();
        for &p in pts {
            while hull.len() >= base + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let mut hull = Vec::with_capacity(pts.len() + 1);
    chain(&mut hull, pts.iter());
    chain(&mut hull, pts.iter().rev());
    hull
}

/// Closed-hull membership; `hull` as returned by [`convex_hull`].
pub fn hull_contains(hull: &[Point], p: Point) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0] == p,
        2 => on_segment(hull[0], hull[1], p),
        n => (0..n).all(|i| orient(hull[i], hull[(i + 1) % n], p) >= 0),
    }
}

#[derive(Clone, Debug)]
pub struct PointSet {
    dim: u8,
    points: Vec<Point>,
}

impl PointSet {
    pub(crate) fn new(dim: u8, coords: &[Vec<i64>], labels: &[String]) -> Result<Self, GeometryError> {
        if dim != 1 && dim != 2 {
            return Err(GeometryError::BadDimension(dim as usize));
        }
        let mut points = Vec::with_capacity(coords.len());
        for (c, label) in coords.iter().zip(labels) {
            if c.len() != dim as usize {
                return Err(GeometryError::BadCoordinates(format!(
                    "point {label} has {} coordinates, expected {dim}",
                    c.len()
                )));
            }
            if c.iter().any(|v| v.abs() > COORD_LIMIT) {
                return Err(GeometryError::BadCoordinates(format!(
                    "point {label} exceeds |coordinate| <= 2^40"
                )));
            }
            points.push((c[0], if dim == 2 { c[1] } else { 0 }));
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(GeometryError::DuplicatePoint {
                        first: labels[j].clone(),
                        second: labels[i].clone(),
                    });
                }
            }
        }
        Ok(PointSet { dim, points })
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub(crate) fn closure(&self, a: Subset) -> Subset {
        if a.is_empty() {
            return Subset::EMPTY;
        }
        let chosen: Vec<Point> = a.iter().map(|i| self.points[i]).collect();
        let hull = convex_hull(&chosen);
        self.points
            .iter()
            .enumerate()
            .filter(|&(_, &p)| hull_contains(&hull, p))
            .map(|(i, _)| i)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_with_interior_and_edge_points() {
        let pts = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0)];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(hull_contains(&hull, (1, 1)));
        assert!(hull_contains(&hull, (1, 0)));
        assert!(hull_contains(&hull, (2, 2)));
        assert!(!hull_contains(&hull, (3, 1)));
    }

    #[test]
    fn collinear_hull_is_a_segment() {
        let hull = convex_hull(&[(0, 0), (2, 2), (1, 1), (4, 4)]);
        assert_eq!(hull, vec![(0, 0), (4, 4)]);
        assert!(hull_contains(&hull, (3, 3)));
        assert!(!hull_contains(&hull, (5, 5)));
        assert!(!hull_contains(&hull, (1, 2)));
    }

    #[test]
    fn single_point_hull() {
        let hull = convex_hull(&[(3, -1)]);
        assert!(hull_contains(&hull, (3, -1)));
        assert!(!hull_contains(&hull, (3, 0)));
    }

    #[test]
    fn orientation_sign() {
        assert!(orient((0, 0), (1, 0), (0, 1)) > 0);
        assert!(orient((0, 0), (0, 1), (1, 0)) < 0);
        assert_eq!(orient((0, 0), (1, 1), (5, 5)), 0);
        let big = COORD_LIMIT;
        assert!(orient((-big, -big), (big, -big), (big, big)) > 0);
    }
}
