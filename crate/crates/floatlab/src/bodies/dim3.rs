//! 3D counterparts of the combinatorial body operations: incremental convex
//! hull with epsilon-robust orientation predicates, dual-hull halfspace
//! intersection, and support/chord/measure oracles for the built-in solids.

use super::{BodyError, Vec3, GEOM_EPS};
use crate::numeric::{self, Estimate};

/// Triangulated convex hull of a 3D point set; indices refer to the input.
#[derive(Debug, Clone)]
pub struct Hull3 {
    pub faces: Vec<[usize; 3]>,
    /// Distinct input indices on the hull.
    pub vertices: Vec<usize>,
    /// Set when the input is affinely dependent (flat); `faces` is then
    /// empty.
    pub degenerate: bool,
}

fn tri_normal(pts: &[Vec3], f: [usize; 3]) -> Vec3 {
    (pts[f[1]] - pts[f[0]]).cross(&(pts[f[2]] - pts[f[0]]))
}

/// Incremental convex hull. Near-coplanar input (relative tolerance
/// `1e-12`) is flagged degenerate rather than treated as an error.
pub fn convex_hull3(pts: &[Vec3]) -> Hull3 {
    let n = pts.len();
    let scale = pts
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()).max(p.z.abs()))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let eps_dist = GEOM_EPS * scale;
    let degenerate = Hull3 {
        faces: vec![],
        vertices: vec![],
        degenerate: true,
    };
    if n < 4 {
        return degenerate;
    }

    // seed simplex: farthest pair, then max-area, then max-volume
    let mut i0 = 0;
    let mut i1 = 1;
    let mut best = 0.0;
    for a in 0..n {
        for b in (a + 1)..n.min(a + 200) {
            let d = (pts[a] - pts[b]).norm_squared();
            if d > best {
                best = d;
                i0 = a;
                i1 = b;
            }
        }
    }
    if best.sqrt() <= eps_dist {
        return degenerate;
    }
    let mut i2 = usize::MAX;
    let mut best = 0.0;
    for c in 0..n {
        let area = (pts[i1] - pts[i0]).cross(&(pts[c] - pts[i0])).norm();
        if area > best {
            best = area;
            i2 = c;
        }
    }
    if i2 == usize::MAX || best <= eps_dist * eps_dist {
        return degenerate;
    }
    let base_n = (pts[i1] - pts[i0]).cross(&(pts[i2] - pts[i0]));
    let mut i3 = usize::MAX;
    let mut best = 0.0;
    for d in 0..n {
        let v = base_n.dot(&(pts[d] - pts[i0])).abs();
        if v > best {
            best = v;
            i3 = d;
        }
    }
    if i3 == usize::MAX || best <= eps_dist * base_n.norm().max(eps_dist) {
        return degenerate;
    }

    let mut faces: Vec<[usize; 3]> = vec![[i0, i1, i2], [i0, i2, i3], [i0, i3, i1], [i1, i3, i2]];
    let centroid = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
    for f in faces.iter_mut() {
        if tri_normal(pts, *f).dot(&(centroid - pts[f[0]])) > 0.0 {
            f.swap(1, 2);
        }
    }

    let seed = [i0, i1, i2, i3];
    for p in 0..n {
        if seed.contains(&p) {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&fi| {
                let f = faces[fi];
                let nrm = tri_normal(pts, f);
                nrm.dot(&(pts[p] - pts[f[0]])) > eps_dist * nrm.norm()
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        // horizon = directed edges of visible faces whose twin is hidden
        let vis_set: std::collections::HashSet<usize> = visible.iter().copied().collect();
        let mut edge_owner: std::collections::HashMap<(usize, usize), ()> =
            std::collections::HashMap::new();
        for &fi in &visible {
            let f = faces[fi];
            for k in 0..3 {
                edge_owner.insert((f[k], f[(k + 1) % 3]), ());
            }
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &fi in &visible {
            let f = faces[fi];
            for k in 0..3 {
                let e = (f[k], f[(k + 1) % 3]);
                if !edge_owner.contains_key(&(e.1, e.0)) {
                    horizon.push(e);
                }
            }
        }
        let mut next: Vec<[usize; 3]> = (0..faces.len())
            .filter(|fi| !vis_set.contains(fi))
            .map(|fi| faces[fi])
            .collect();
        for (a, b) in horizon {
            next.push([a, b, p]);
        }
        faces = next;
    }

    let mut vertices: Vec<usize> = faces.iter().flatten().copied().collect();
    vertices.sort_unstable();
    vertices.dedup();
    Hull3 {
        faces,
        vertices,
        degenerate: false,
    }
}

/// Volume enclosed by a triangulated hull.
pub fn hull3_volume(pts: &[Vec3], hull: &Hull3) -> f64 {
    if hull.degenerate {
        return 0.0;
    }
    let c = hull
        .vertices
        .iter()
        .map(|&i| pts[i])
        .sum::<Vec3>()
        / hull.vertices.len() as f64;
    hull.faces
        .iter()
        .map(|f| {
            (pts[f[0]] - c)
                .dot(&(pts[f[1]] - c).cross(&(pts[f[2]] - c)))
                / 6.0
        })
        .sum::<f64>()
        .abs()
}

/// Bounded halfspace intersection in 3D: vertices, facet polygons and the
/// indices of the non-redundant input halfspaces.
#[derive(Debug, Clone)]
pub struct Polytope3 {
    pub vertices: Vec<Vec3>,
    /// One polygon (vertex indices, cyclically ordered) per facet.
    pub facets: Vec<Vec<usize>>,
    /// Input index of the halfspace carrying each facet.
    pub active: Vec<usize>,
}

/// Intersect halfspaces `uᵢ·x ≤ tᵢ` around a strict interior point, via the
/// dual convex hull of the points `uᵢ/tᵢ`.
pub fn halfspace_intersection3(
    normals: &[Vec3],
    offsets: &[f64],
    interior: Vec3,
) -> Result<Polytope3, BodyError> {
    assert_eq!(normals.len(), offsets.len());
    let m = normals.len();
    if m < 4 {
        return Err(BodyError::Unbounded);
    }
    let mut duals = Vec::with_capacity(m);
    for i in 0..m {
        let nu = normals[i].norm();
        if nu == 0.0 {
            return Err(BodyError::Degenerate("zero normal".into()));
        }
        let t = (offsets[i] - normals[i].dot(&interior)) / nu;
        if t <= GEOM_EPS {
            return Err(BodyError::EmptyIntersection);
        }
        duals.push(normals[i] / (nu * t));
    }
    let hull = convex_hull3(&duals);
    if hull.degenerate {
        return Err(BodyError::Unbounded);
    }
    let dual_scale = duals.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
    for f in &hull.faces {
        let nrm = tri_normal(&duals, *f);
        if nrm.dot(&(-duals[f[0]])) >= -GEOM_EPS * dual_scale * nrm.norm() {
            return Err(BodyError::Unbounded);
        }
    }

    // one primal vertex per dual face (triple of halfspace planes)
    let mut verts: Vec<Vec3> = Vec::new();
    let mut face_vert: Vec<usize> = Vec::with_capacity(hull.faces.len());
    let scale = offsets.iter().fold(1.0f64, |a, t| a.max(t.abs()));
    for f in &hull.faces {
        let rows = [normals[f[0]], normals[f[1]], normals[f[2]]];
        let rhs = Vec3::new(
            offsets[f[0]] - rows[0].dot(&interior),
            offsets[f[1]] - rows[1].dot(&interior),
            offsets[f[2]] - rows[2].dot(&interior),
        );
        let mat = nalgebra::Matrix3::from_rows(&[
            rows[0].transpose(),
            rows[1].transpose(),
            rows[2].transpose(),
        ]);
        let x = mat
            .lu()
            .solve(&rhs)
            .ok_or_else(|| BodyError::Degenerate("singular facet triple".into()))?
            + interior;
        let found = verts
            .iter()
            .position(|v| (v - x).norm() < 1e-9 * scale.max(1.0));
        face_vert.push(match found {
            Some(i) => i,
            None => {
                verts.push(x);
                verts.len() - 1
            }
        });
    }

    // facet polygons: primal vertices of the dual faces around each dual
    // hull vertex, ordered by angle in the facet plane
    let mut facets = Vec::new();
    let mut active = Vec::new();
    for &hv in &hull.vertices {
        let mut ring: Vec<usize> = hull
            .faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.contains(&hv))
            .map(|(fi, _)| face_vert[fi])
            .collect();
        ring.sort_unstable();
        ring.dedup();
        if ring.len() < 3 {
            continue;
        }
        let u = normals[hv] / normals[hv].norm();
        let center: Vec3 = ring.iter().map(|&i| verts[i]).sum::<Vec3>() / ring.len() as f64;
        let e1 = {
            let trial = if u.x.abs() < 0.9 {
                Vec3::new(1.0, 0.0, 0.0)
            } else {
                Vec3::new(0.0, 1.0, 0.0)
            };
            let v = trial - u * trial.dot(&u);
            v / v.norm()
        };
        let e2 = u.cross(&e1);
        ring.sort_by(|&i, &j| {
            let a = verts[i] - center;
            let b = verts[j] - center;
            f64::atan2(a.dot(&e2), a.dot(&e1)).total_cmp(&f64::atan2(b.dot(&e2), b.dot(&e1)))
        });
        facets.push(ring);
        active.push(hv);
    }
    Ok(Polytope3 {
        vertices: verts,
        facets,
        active,
    })
}

/// Volume of a [`Polytope3`] by facet fans.
pub fn polytope3_volume(p: &Polytope3) -> f64 {
    let c: Vec3 = p.vertices.iter().sum::<Vec3>() / p.vertices.len() as f64;
    let mut vol = 0.0;
    for facet in &p.facets {
        for k in 1..facet.len() - 1 {
            let (a, b, d) = (
                p.vertices[facet[0]],
                p.vertices[facet[k]],
                p.vertices[facet[k + 1]],
            );
            vol += (a - c).dot(&(b - c).cross(&(d - c))) / 6.0;
        }
    }
    vol.abs()
}

/// Built-in 3D convex bodies (centered at the origin).
#[derive(Debug, Clone)]
pub enum ConvexBody3 {
    Ball { r: f64 },
    Ellipsoid { a: f64, b: f64, c: f64 },
    Box3 { half: Vec3 },
}

impl ConvexBody3 {
    pub fn dim(&self) -> usize {
        3
    }

    pub fn support(&self, u: Vec3) -> f64 {
        match self {
            ConvexBody3::Ball { r } => r * u.norm(),
            ConvexBody3::Ellipsoid { a, b, c } => {
                ((a * u.x).powi(2) + (b * u.y).powi(2) + (c * u.z).powi(2)).sqrt()
            }
            ConvexBody3::Box3 { half } => {
                half.x * u.x.abs() + half.y * u.y.abs() + half.z * u.z.abs()
            }
        }
    }

    pub fn support_point(&self, u: Vec3) -> Vec3 {
        match self {
            ConvexBody3::Ball { r } => u * (r / u.norm()),
            ConvexBody3::Ellipsoid { a, b, c } => {
                let g = Vec3::new(a * a * u.x, b * b * u.y, c * c * u.z);
                g / self.support(u)
            }
            ConvexBody3::Box3 { half } => Vec3::new(
                half.x * u.x.signum(),
                half.y * u.y.signum(),
                half.z * u.z.signum(),
            ),
        }
    }

    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        match self {
            ConvexBody3::Ball { r } => p.norm() <= r + tol,
            ConvexBody3::Ellipsoid { a, b, c } => {
                Vec3::new(p.x / a, p.y / b, p.z / c).norm() <= 1.0 + tol / a.min(*b).min(*c)
            }
            ConvexBody3::Box3 { half } => {
                p.x.abs() <= half.x + tol && p.y.abs() <= half.y + tol && p.z.abs() <= half.z + tol
            }
        }
    }

    /// Line `{p + t d} ∩ K` as a `t`-interval.
    pub fn chord(&self, p: Vec3, d: Vec3) -> Option<(f64, f64)> {
        match self {
            ConvexBody3::Ball { r } => {
                quadratic(d.norm_squared(), 2.0 * p.dot(&d), p.norm_squared() - r * r)
            }
            ConvexBody3::Ellipsoid { a, b, c } => {
                let ps = Vec3::new(p.x / a, p.y / b, p.z / c);
                let ds = Vec3::new(d.x / a, d.y / b, d.z / c);
                quadratic(
                    ds.norm_squared(),
                    2.0 * ps.dot(&ds),
                    ps.norm_squared() - 1.0,
                )
            }
            ConvexBody3::Box3 { half } => {
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for (pc, dc, h) in [
                    (p.x, d.x, half.x),
                    (p.y, d.y, half.y),
                    (p.z, d.z, half.z),
                ] {
                    if dc.abs() < 1e-300 {
                        if pc.abs() > h {
                            return None;
                        }
                    } else {
                        let t0 = (-h - pc) / dc;
                        let t1 = (h - pc) / dc;
                        lo = lo.max(t0.min(t1));
                        hi = hi.min(t0.max(t1));
                    }
                }
                (lo <= hi).then_some((lo, hi))
            }
        }
    }

    pub fn volume(&self) -> f64 {
        let v = 4.0 * std::f64::consts::PI / 3.0;
        match self {
            ConvexBody3::Ball { r } => v * r.powi(3),
            ConvexBody3::Ellipsoid { a, b, c } => v * a * b * c,
            ConvexBody3::Box3 { half } => 8.0 * half.x * half.y * half.z,
        }
    }

    pub fn bbox(&self) -> (Vec3, Vec3) {
        let h = Vec3::new(
            self.support(Vec3::new(1.0, 0.0, 0.0)),
            self.support(Vec3::new(0.0, 1.0, 0.0)),
            self.support(Vec3::new(0.0, 0.0, 1.0)),
        );
        (-h, h)
    }

    /// Boundary chart `(θ, φ) ↦ (point, outer normal, Gauss–Kronecker
    /// curvature, area element)` for the smooth built-ins.
    pub fn boundary(&self, theta: f64, phi: f64) -> Result<(Vec3, Vec3, f64, f64), BodyError> {
        let (a, b, c) = match self {
            ConvexBody3::Ball { r } => (*r, *r, *r),
            ConvexBody3::Ellipsoid { a, b, c } => (*a, *b, *c),
            ConvexBody3::Box3 { .. } => {
                return Err(BodyError::CurvatureUnavailable { param: theta })
            }
        };
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let x = Vec3::new(a * sp * ct, b * sp * st, c * cp);
        let grad = Vec3::new(x.x / (a * a), x.y / (b * b), x.z / (c * c));
        let normal = grad / grad.norm();
        let q = (x.x / (a * a)).powi(2) + (x.y / (b * b)).powi(2) + (x.z / (c * c)).powi(2);
        let gauss = 1.0 / ((a * b * c).powi(2) * q * q);
        let dtheta = Vec3::new(-a * sp * st, b * sp * ct, 0.0);
        let dphi = Vec3::new(a * cp * ct, b * cp * st, -c * sp);
        let area = dtheta.cross(&dphi).norm();
        Ok((x, normal, gauss, area))
    }

    /// Weighted volume `∫_K w` by three nested adaptive quadratures.
    pub fn measure<W: Fn(Vec3) -> f64>(&self, w: W, rel_tol: f64) -> Result<Estimate, BodyError> {
        let ex = self.support(Vec3::new(1.0, 0.0, 0.0));
        let outer = numeric::integrate_budget(
            |x| {
                let ey = self.slice_halfwidth(x);
                if ey <= 0.0 {
                    return 0.0;
                }
                numeric::integrate(
                    |y| match self.chord(Vec3::new(x, y, 0.0), Vec3::new(0.0, 0.0, 1.0)) {
                        Some((lo, hi)) => {
                            numeric::gk15(&|z| w(Vec3::new(x, y, z)), lo, hi).value
                        }
                        None => 0.0,
                    },
                    -ey,
                    ey,
                    rel_tol,
                    0.0,
                )
                .map(|e| e.value)
                .unwrap_or(0.0)
            },
            -ex,
            ex,
            rel_tol,
            0.0,
            2000,
        )?;
        Ok(outer)
    }

    /// Half-extent in `y` of the slice at `x` (for the nesting above).
    fn slice_halfwidth(&self, x: f64) -> f64 {
        match self {
            ConvexBody3::Ball { r } => (r * r - x * x).max(0.0).sqrt(),
            ConvexBody3::Ellipsoid { a, b, .. } => {
                b * (1.0 - (x / a).powi(2)).max(0.0).sqrt()
            }
            ConvexBody3::Box3 { half } => {
                if x.abs() <= half.x {
                    half.y
                } else {
                    0.0
                }
            }
        }
    }
}

fn quadratic(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    Some(((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)))
}

/// Mean width `W = (2/(n v_n)) ∫_{S^{n-1}} h` by a 2048-point Fibonacci
/// rule; for `n = 3` this is twice the spherical average of the support.
pub fn mean_width3<F: Fn(Vec3) -> f64>(support: F, nodes: usize) -> f64 {
    let dirs = super::fibonacci_sphere(nodes);
    2.0 * dirs.iter().map(|&u| support(u)).sum::<f64>() / nodes as f64
}
