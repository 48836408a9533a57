//! Halfspace intersection in the plane via the dual convex hull: after
//! translating a strict interior point to the origin every offset is
//! positive, the points `u/t` are dualized, and hull vertices of the dual
//! correspond exactly to the non-redundant halfspaces.

use super::hull::convex_hull2;
use super::{cross2, BodyError, Vec2, GEOM_EPS};

/// Finite family of halfspaces `uᵢ·x ≤ tᵢ`; directions need not be unit.
#[derive(Debug, Clone, Default)]
pub struct HalfspaceSet {
    pub normals: Vec<Vec2>,
    pub offsets: Vec<f64>,
}

impl HalfspaceSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, u: Vec2, t: f64) {
        self.normals.push(u);
        self.offsets.push(t);
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        self.normals
            .iter()
            .zip(&self.offsets)
            .all(|(u, t)| u.dot(&p) <= t + tol * u.norm())
    }
}

/// Vertex representation of a bounded halfspace intersection.
#[derive(Debug, Clone)]
pub struct Intersection2 {
    /// Polygon vertices, counterclockwise.
    pub vertices: Vec<Vec2>,
    /// Indices into the input family of the non-redundant halfspaces, one
    /// per polygon edge, in the same cyclic order as `vertices` (edge `k`
    /// runs from vertex `k` to vertex `k+1`).
    pub active: Vec<usize>,
}

/// Intersect the halfspaces, given a point strictly inside all of them.
///
/// Fails with [`BodyError::EmptyIntersection`] when `interior` violates a
/// constraint (the caller's certificate is wrong or the set is empty) and
/// with [`BodyError::Unbounded`] when the normal directions do not
/// positively span the plane.
pub fn halfspace_intersection(hs: &HalfspaceSet, interior: Vec2) -> Result<Intersection2, BodyError> {
    let m = hs.len();
    if m < 3 {
        return Err(BodyError::Unbounded);
    }
    let mut duals: Vec<Vec2> = Vec::with_capacity(m);
    let mut scale = 0.0f64;
    for i in 0..m {
        let u = hs.normals[i];
        let nu = u.norm();
        if nu == 0.0 {
            return Err(BodyError::Degenerate("zero normal".into()));
        }
        let t = (hs.offsets[i] - u.dot(&interior)) / nu;
        scale = scale.max(hs.offsets[i].abs()).max(nu);
        if t <= GEOM_EPS * scale.max(1.0) {
            return Err(BodyError::EmptyIntersection);
        }
        duals.push(u / (nu * t));
    }
    let hull = convex_hull2(&duals);
    if hull.degenerate {
        return Err(BodyError::Unbounded);
    }
    // bounded ⟺ origin strictly inside the dual hull
    let hv = &hull.vertices;
    let k = hv.len();
    let dual_scale = hv.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
    for i in 0..k {
        let e = hv[(i + 1) % k] - hv[i];
        if cross2(e, -hv[i]) <= GEOM_EPS * dual_scale * e.norm() {
            return Err(BodyError::Unbounded);
        }
    }
    // map hull vertices back to input indices
    let index_of = |p: &Vec2| -> usize {
        duals
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - p).norm().total_cmp(&(b.1 - p).norm()))
            .map(|(i, _)| i)
            .expect("nonempty")
    };
    let active: Vec<usize> = hv.iter().map(index_of).collect();
    let mut vertices = Vec::with_capacity(k);
    for i in 0..k {
        let (ia, ib) = (active[i], active[(i + 1) % k]);
        let (ua, ta) = (hs.normals[ia], hs.offsets[ia] - hs.normals[ia].dot(&interior));
        let (ub, tb) = (hs.normals[ib], hs.offsets[ib] - hs.normals[ib].dot(&interior));
        let det = cross2(ua, ub);
        if det.abs() <= GEOM_EPS * ua.norm() * ub.norm() {
            return Err(BodyError::Degenerate(
                "adjacent active halfspaces are parallel".into(),
            ));
        }
        let x = Vec2::new(ta * ub.y - tb * ua.y, ua.x * tb - ub.x * ta) / det;
        vertices.push(x + interior);
    }
    // vertex k sits between edges k and k+1; shift so edge k starts at vertex k
    vertices.rotate_right(1);
    Ok(Intersection2 { vertices, active })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{polygon_area, uniform_directions};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn axis_square() {
        let mut hs = HalfspaceSet::new();
        hs.push(Vec2::new(1.0, 0.0), 1.0);
        hs.push(Vec2::new(-1.0, 0.0), 1.0);
        hs.push(Vec2::new(0.0, 1.0), 1.0);
        hs.push(Vec2::new(0.0, -1.0), 1.0);
        let p = halfspace_intersection(&hs, Vec2::zeros()).unwrap();
        assert_eq!(p.vertices.len(), 4);
        for v in &p.vertices {
            assert_relative_eq!(v.x.abs(), 1.0, epsilon = 1e-12);
            assert_relative_eq!(v.y.abs(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn narrow_normal_cone_unbounded() {
        // three normals inside half a circle: intersection is unbounded
        let mut hs = HalfspaceSet::new();
        for ang in [0.0, 0.4, 0.8] {
            hs.push(Vec2::new(f64::cos(ang), f64::sin(ang)), 1.0);
        }
        assert!(matches!(
            halfspace_intersection(&hs, Vec2::zeros()),
            Err(BodyError::Unbounded)
        ));
    }

    #[test]
    fn regular_gon_area_formula() {
        // inradius-1 regular k-gon has area k·tan(π/k)
        for k in [3usize, 5, 8, 17] {
            let mut hs = HalfspaceSet::new();
            for u in uniform_directions(k) {
                hs.push(u, 1.0);
            }
            let p = halfspace_intersection(&hs, Vec2::zeros()).unwrap();
            assert_eq!(p.vertices.len(), k);
            assert_relative_eq!(
                polygon_area(&p.vertices),
                k as f64 * (PI / k as f64).tan(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn redundant_halfspaces_dropped() {
        let mut hs = HalfspaceSet::new();
        for u in uniform_directions(4) {
            hs.push(u, 1.0);
        }
        hs.push(Vec2::new(1.0, 0.0), 5.0); // slack copy, redundant
        let p = halfspace_intersection(&hs, Vec2::zeros()).unwrap();
        assert_eq!(p.vertices.len(), 4);
        assert!(!p.active.contains(&4));
    }

    #[test]
    fn duality_round_trip() {
        // supporting halfspaces of a polygon's facets reproduce its vertices
        let verts = vec![
            Vec2::new(1.5, 0.0),
            Vec2::new(0.4, 1.1),
            Vec2::new(-1.0, 0.6),
            Vec2::new(-0.8, -0.9),
            Vec2::new(0.7, -1.2),
        ];
        let n = verts.len();
        let mut hs = HalfspaceSet::new();
        for i in 0..n {
            let e = verts[(i + 1) % n] - verts[i];
            let u = Vec2::new(e.y, -e.x) / e.norm();
            hs.push(u, u.dot(&verts[i]));
        }
        let p = halfspace_intersection(&hs, Vec2::new(0.1, -0.05)).unwrap();
        assert_eq!(p.vertices.len(), n);
        for v in &verts {
            assert!(
                p.vertices.iter().any(|q| (q - v).norm() < 1e-9),
                "missing vertex {v:?}"
            );
        }
    }

    #[test]
    fn interior_violation_is_empty_error() {
        let mut hs = HalfspaceSet::new();
        for u in uniform_directions(4) {
            hs.push(u, -1.0);
        }
        assert!(matches!(
            halfspace_intersection(&hs, Vec2::zeros()),
            Err(BodyError::EmptyIntersection)
        ));
    }

    #[test]
    fn edge_active_alignment() {
        // edge k of the polygon must lie on the line of active[k]
        let mut hs = HalfspaceSet::new();
        for (i, u) in uniform_directions(9).into_iter().enumerate() {
            hs.push(u, 1.0 + 0.1 * (i as f64).sin());
        }
        let p = halfspace_intersection(&hs, Vec2::zeros()).unwrap();
        let k = p.vertices.len();
        for e in 0..k {
            let u = hs.normals[p.active[e]];
            let t = hs.offsets[p.active[e]];
            for v in [p.vertices[e], p.vertices[(e + 1) % k]] {
                assert_relative_eq!(u.dot(&v), t, epsilon = 1e-10);
            }
        }
    }
}
