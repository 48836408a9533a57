//! Convex bodies in the plane: support functions, boundary parametrizations
//! with curvature, chords, weighted measures, hulls and halfspace
//! intersections. 3D counterparts of the combinatorial operations live in
//! [`dim3`].
//!
//! Conventions:
//! - built-in bodies (disk, ellipse, box, radial) are centered at the origin;
//!   polygons may sit anywhere and report their centroid as interior point;
//! - boundary parametrizations run counterclockwise over `θ ∈ [0, 2π)`;
//! - geometric predicates use a relative tolerance of `1e-12` on normalized
//!   coordinates.

pub mod dim3;
mod halfspace;
mod hull;
mod measure;

pub use halfspace::{halfspace_intersection, HalfspaceSet, Intersection2};
pub use hull::{convex_hull2, Hull2};
pub use measure::{
    boundary_integral, boundary_integral_budget, cap_between_chord_and_arc, measure,
    polygon_measure_radial, slab_integral, slice_integral,
};

use crate::numeric::{self, NumericError};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;
use thiserror::Error;

pub type Vec2 = nalgebra::Vector2<f64>;
pub type Mat2 = nalgebra::Matrix2<f64>;
pub type Vec3 = nalgebra::Vector3<f64>;

/// Relative tolerance for geometric predicates on normalized coordinates.
pub const GEOM_EPS: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum BodyError {
    #[error("curvature unavailable at boundary parameter {param} (edge/vertex of a polytope)")]
    CurvatureUnavailable { param: f64 },
    #[error("halfspace intersection is empty")]
    EmptyIntersection,
    #[error("halfspace intersection is unbounded (normals do not surround the interior point)")]
    Unbounded,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Rotate by +90°: `(x, y) ↦ (−y, x)`.
#[inline]
pub fn perp(v: Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

#[inline]
pub fn cross2(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// `k` unit directions at uniform angles; even `k` gives a centrally
/// symmetric set.
pub fn uniform_directions(k: usize) -> Vec<Vec2> {
    (0..k)
        .map(|j| {
            let t = TAU * j as f64 / k as f64;
            Vec2::new(t.cos(), t.sin())
        })
        .collect()
}

/// Fibonacci lattice of `k` near-uniform directions on the 2-sphere.
pub fn fibonacci_sphere(k: usize) -> Vec<Vec3> {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    (0..k)
        .map(|j| {
            let z = 1.0 - (2.0 * j as f64 + 1.0) / k as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = TAU * (j as f64 / golden).fract();
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// A boundary point of a planar convex body.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryPoint {
    pub x: Vec2,
    /// Outer unit normal.
    pub normal: Vec2,
    /// `|dx/dθ|`, so that `ds = speed · dθ`.
    pub speed: f64,
    /// Curvature `H_1` where the boundary is twice differentiable; `None`
    /// at polytope vertices.
    pub curvature: Option<f64>,
}

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A planar convex body, given by kind tag plus exact support, boundary,
/// chord and membership oracles.
#[derive(Clone)]
pub enum ConvexBody {
    /// Disk of radius `r` centered at the origin.
    Disk { r: f64 },
    /// Axis-aligned ellipse `x²/a² + y²/b² ≤ 1`.
    Ellipse { a: f64, b: f64 },
    /// Axis-aligned box `|x| ≤ half.x, |y| ≤ half.y`.
    Box2 { half: Vec2 },
    /// Convex polygon, vertices counterclockwise.
    Polygon { verts: Vec<Vec2> },
    /// Smooth star body `{t·(cos θ, sin θ) : 0 ≤ t ≤ r(θ)}`, assumed convex
    /// with `r > 0`; derivatives are taken numerically unless provided.
    Radial {
        r: RadialFn,
        dr: Option<RadialFn>,
        ddr: Option<RadialFn>,
    },
    /// Linear image `A·K` of another body (`det A ≠ 0`).
    Linear {
        base: Box<ConvexBody>,
        a: Mat2,
        a_inv: Mat2,
    },
}

impl std::fmt::Debug for ConvexBody {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConvexBody::Disk { r } => write!(f, "Disk(r={r})"),
            ConvexBody::Ellipse { a, b } => write!(f, "Ellipse({a},{b})"),
            ConvexBody::Box2 { half } => write!(f, "Box2({},{})", half.x, half.y),
            ConvexBody::Polygon { verts } => write!(f, "Polygon({} verts)", verts.len()),
            ConvexBody::Radial { .. } => write!(f, "Radial"),
            ConvexBody::Linear { base, a, .. } => write!(f, "Linear({a:?} ∘ {base:?})"),
        }
    }
}

impl ConvexBody {
    pub fn disk(r: f64) -> Self {
        assert!(r > 0.0);
        ConvexBody::Disk { r }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        assert!(a > 0.0 && b > 0.0);
        ConvexBody::Ellipse { a, b }
    }

    /// Square `[−side/2, side/2]²`.
    pub fn square(side: f64) -> Self {
        ConvexBody::Box2 {
            half: Vec2::new(side / 2.0, side / 2.0),
        }
    }

    pub fn box2(hx: f64, hy: f64) -> Self {
        ConvexBody::Box2 {
            half: Vec2::new(hx, hy),
        }
    }

    /// Polygon from vertices in either orientation; stored counterclockwise.
    pub fn polygon(mut verts: Vec<Vec2>) -> Self {
        assert!(verts.len() >= 3, "polygon needs at least 3 vertices");
        if shoelace(&verts) < 0.0 {
            verts.reverse();
        }
        ConvexBody::Polygon { verts }
    }

    /// Regular `k`-gon with circumradius `rho`, one vertex on the +x axis.
    pub fn regular_gon(k: usize, rho: f64) -> Self {
        let verts = (0..k)
            .map(|j| {
                let t = TAU * j as f64 / k as f64;
                Vec2::new(rho * t.cos(), rho * t.sin())
            })
            .collect();
        ConvexBody::Polygon { verts }
    }

    pub fn radial<F: Fn(f64) -> f64 + Send + Sync + 'static>(r: F) -> Self {
        ConvexBody::Radial {
            r: Arc::new(r),
            dr: None,
            ddr: None,
        }
    }

    pub fn radial_with_derivatives<F, G, H>(r: F, dr: G, ddr: H) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        H: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ConvexBody::Radial {
            r: Arc::new(r),
            dr: Some(Arc::new(dr)),
            ddr: Some(Arc::new(ddr)),
        }
    }

    /// Image `A·K`; panics if `A` is singular.
    pub fn linear_image(a: Mat2, base: ConvexBody) -> Self {
        let a_inv = a.try_inverse().expect("linear_image: singular matrix");
        ConvexBody::Linear {
            base: Box::new(base),
            a,
            a_inv,
        }
    }

    pub fn dim(&self) -> usize {
        2
    }

    /// Support function `h_K(u) = max_{x∈K} u·x` (sublinear in `u`).
    pub fn support(&self, u: Vec2) -> f64 {
        match self {
            ConvexBody::Disk { r } => r * u.norm(),
            ConvexBody::Ellipse { a, b } => (a * a * u.x * u.x + b * b * u.y * u.y).sqrt(),
            ConvexBody::Box2 { half } => half.x * u.x.abs() + half.y * u.y.abs(),
            ConvexBody::Polygon { verts } => verts
                .iter()
                .map(|v| v.dot(&u))
                .fold(f64::NEG_INFINITY, f64::max),
            ConvexBody::Radial { .. } => self.support_point(u).dot(&u),
            ConvexBody::Linear { base, a, .. } => base.support(a.transpose() * u),
        }
    }

    /// A maximizer of `x ↦ u·x` over the body (any one, when not unique).
    pub fn support_point(&self, u: Vec2) -> Vec2 {
        match self {
            ConvexBody::Disk { r } => u * (r / u.norm()),
            ConvexBody::Ellipse { a, b } => {
                let g = Vec2::new(a * a * u.x, b * b * u.y);
                g / (a * a * u.x * u.x + b * b * u.y * u.y).sqrt()
            }
            ConvexBody::Box2 { half } => Vec2::new(
                half.x * if u.x >= 0.0 { 1.0 } else { -1.0 },
                half.y * if u.y >= 0.0 { 1.0 } else { -1.0 },
            ),
            ConvexBody::Polygon { verts } => *verts
                .iter()
                .max_by(|p, q| p.dot(&u).total_cmp(&q.dot(&u)))
                .expect("nonempty polygon"),
            ConvexBody::Radial { r, .. } => {
                // coarse scan then golden refinement of θ ↦ u·x(θ)
                let val = |t: f64| {
                    let rt = r(t);
                    rt * (u.x * t.cos() + u.y * t.sin())
                };
                let n = 256;
                let mut best = (f64::NEG_INFINITY, 0.0);
                for j in 0..n {
                    let t = TAU * j as f64 / n as f64;
                    let v = val(t);
                    if v > best.0 {
                        best = (v, t);
                    }
                }
                let w = TAU / n as f64;
                let (t, _) = numeric::golden_max(val, best.1 - w, best.1 + w, 1e-13);
                Vec2::new(r(t) * t.cos(), r(t) * t.sin())
            }
            ConvexBody::Linear { base, a, .. } => a * base.support_point(a.transpose() * u),
        }
    }

    /// Membership with absolute slack `tol` (in the body's length scale).
    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        match self {
            ConvexBody::Disk { r } => p.norm() <= r + tol,
            ConvexBody::Ellipse { a, b } => {
                let s = (p.x / a).powi(2) + (p.y / b).powi(2);
                s.sqrt() <= 1.0 + tol / a.min(*b)
            }
            ConvexBody::Box2 { half } => p.x.abs() <= half.x + tol && p.y.abs() <= half.y + tol,
            ConvexBody::Polygon { verts } => {
                let n = verts.len();
                (0..n).all(|i| {
                    let e = verts[(i + 1) % n] - verts[i];
                    cross2(e, p - verts[i]) >= -tol * e.norm()
                })
            }
            ConvexBody::Radial { r, .. } => {
                let t = p.y.atan2(p.x);
                p.norm() <= r(t) + tol
            }
            ConvexBody::Linear { base, a_inv, .. } => base.contains(a_inv * p, tol),
        }
    }

    /// A point in the interior: the origin for centered bodies, the vertex
    /// centroid for polygons.
    pub fn interior_point(&self) -> Vec2 {
        match self {
            ConvexBody::Polygon { verts } => {
                verts.iter().sum::<Vec2>() / verts.len() as f64
            }
            ConvexBody::Linear { base, a, .. } => a * base.interior_point(),
            _ => Vec2::zeros(),
        }
    }

    /// Intersection of the line `{p + t·d}` with the body as a `t`-interval,
    /// or `None` when the line misses it. `d` need not be unit.
    pub fn chord(&self, p: Vec2, d: Vec2) -> Option<(f64, f64)> {
        match self {
            ConvexBody::Disk { r } => {
                // |p + t d|² = r²
                let aa = d.dot(&d);
                let bb = 2.0 * p.dot(&d);
                let cc = p.dot(&p) - r * r;
                quadratic_interval(aa, bb, cc)
            }
            ConvexBody::Ellipse { a, b } => {
                let ps = Vec2::new(p.x / a, p.y / b);
                let ds = Vec2::new(d.x / a, d.y / b);
                let aa = ds.dot(&ds);
                let bb = 2.0 * ps.dot(&ds);
                let cc = ps.dot(&ps) - 1.0;
                quadratic_interval(aa, bb, cc)
            }
            ConvexBody::Box2 { half } => {
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for (pc, dc, h) in [(p.x, d.x, half.x), (p.y, d.y, half.y)] {
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
            ConvexBody::Polygon { verts } => {
                let n = verts.len();
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for i in 0..n {
                    let e = verts[(i + 1) % n] - verts[i];
                    // interior satisfies cross2(e, x − v_i) ≥ 0
                    let denom = cross2(e, d);
                    let num = cross2(e, p - verts[i]);
                    if denom.abs() < 1e-300 {
                        if num < 0.0 {
                            return None;
                        }
                    } else {
                        let t = -num / denom;
                        if denom > 0.0 {
                            lo = lo.max(t);
                        } else {
                            hi = hi.min(t);
                        }
                    }
                }
                (lo <= hi).then_some((lo, hi))
            }
            ConvexBody::Radial { .. } => {
                // seed search on the support slab, then bisection
                let dn = d.norm();
                let du = d / dn;
                let t_hi = self.support(du) - p.dot(&du);
                let t_lo = -(self.support(-du) + p.dot(&du));
                if t_hi < t_lo {
                    return None;
                }
                let mut seed = None;
                let n = 96;
                for j in 0..=n {
                    let t = t_lo + (t_hi - t_lo) * j as f64 / n as f64;
                    if self.contains(p + du * t, 0.0) {
                        seed = Some(t);
                        break;
                    }
                }
                let seed = seed?;
                let (a, b) = self.bisect_chord(p, du, seed, t_lo, t_hi);
                Some((a / dn, b / dn))
            }
            ConvexBody::Linear { base, a_inv, .. } => base.chord(a_inv * p, a_inv * d),
        }
    }

    /// Chord of the line `{p + t·d}` (`d` unit) given a parameter `t_seed`
    /// with `p + t_seed·d` known to lie in the body. Exact kinds ignore the
    /// seed; radial kinds bisect from it, which stays reliable for the thin
    /// slices near a support hyperplane.
    pub fn chord_with_seed(&self, p: Vec2, d: Vec2, t_seed: f64) -> Option<(f64, f64)> {
        match self {
            ConvexBody::Radial { .. } => {
                let t_hi = self.support(d) - p.dot(&d);
                let t_lo = -(self.support(-d) + p.dot(&d));
                Some(self.bisect_chord(p, d, t_seed, t_lo, t_hi))
            }
            ConvexBody::Linear { base, a_inv, .. } => {
                let dn = (a_inv * d).norm();
                base.chord_with_seed(a_inv * p, a_inv * d / dn, t_seed * dn)
                    .map(|(a, b)| (a / dn, b / dn))
            }
            _ => self.chord(p, d),
        }
    }

    fn bisect_chord(&self, p: Vec2, d: Vec2, t_seed: f64, t_lo: f64, t_hi: f64) -> (f64, f64) {
        let bisect = |mut inside: f64, mut outside: f64| {
            for _ in 0..60 {
                let mid = 0.5 * (inside + outside);
                if self.contains(p + d * mid, 0.0) {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            0.5 * (inside + outside)
        };
        (bisect(t_seed, t_lo - 1e-9), bisect(t_seed, t_hi + 1e-9))
    }

    /// Boundary point at parameter `θ ∈ [0, 2π)`, counterclockwise.
    pub fn boundary(&self, theta: f64) -> BoundaryPoint {
        match self {
            ConvexBody::Disk { r } => {
                let u = Vec2::new(theta.cos(), theta.sin());
                BoundaryPoint {
                    x: u * *r,
                    normal: u,
                    speed: *r,
                    curvature: Some(1.0 / r),
                }
            }
            ConvexBody::Ellipse { a, b } => {
                let (s, c) = theta.sin_cos();
                let x = Vec2::new(a * c, b * s);
                let tangent = Vec2::new(-a * s, b * c);
                let speed = tangent.norm();
                let normal = Vec2::new(b * c, a * s) / speed;
                let kappa = a * b / speed.powi(3);
                BoundaryPoint {
                    x,
                    normal,
                    speed,
                    curvature: Some(kappa),
                }
            }
            ConvexBody::Box2 { half } => {
                let verts = vec![
                    Vec2::new(half.x, -half.y),
                    Vec2::new(half.x, half.y),
                    Vec2::new(-half.x, half.y),
                    Vec2::new(-half.x, -half.y),
                ];
                polygon_boundary(&verts, theta)
            }
            ConvexBody::Polygon { verts } => polygon_boundary(verts, theta),
            ConvexBody::Radial { r, dr, ddr } => {
                let h = 1e-5;
                let r0 = r(theta);
                let r1 = match dr {
                    Some(g) => g(theta),
                    None => (r(theta + h) - r(theta - h)) / (2.0 * h),
                };
                let r2 = match ddr {
                    Some(g) => g(theta),
                    None => (r(theta + h) - 2.0 * r0 + r(theta - h)) / (h * h),
                };
                let (s, c) = theta.sin_cos();
                let er = Vec2::new(c, s);
                let et = Vec2::new(-s, c);
                let x = er * r0;
                let tangent = er * r1 + et * r0;
                let speed = tangent.norm();
                let normal = Vec2::new(tangent.y, -tangent.x) / speed;
                let kappa = (r0 * r0 + 2.0 * r1 * r1 - r0 * r2) / speed.powi(3);
                BoundaryPoint {
                    x,
                    normal,
                    speed,
                    curvature: Some(kappa),
                }
            }
            ConvexBody::Linear { base, a, a_inv, .. } => {
                let bp = base.boundary(theta);
                let tangent_unit = perp(bp.normal) * -1.0; // ccw tangent of base
                let mapped_t = a * tangent_unit;
                let stretch = mapped_t.norm();
                let normal = {
                    let n = a_inv.transpose() * bp.normal;
                    n / n.norm()
                };
                let det = (a.m11 * a.m22 - a.m12 * a.m21).abs();
                BoundaryPoint {
                    x: a * bp.x,
                    normal,
                    speed: bp.speed * stretch,
                    curvature: bp.curvature.map(|k| k * det / stretch.powi(3)),
                }
            }
        }
    }

    /// Curvature oracle: `(point, outer normal, H_1)`; `CurvatureUnavailable`
    /// at polytope vertices.
    pub fn curvature(&self, theta: f64) -> Result<(Vec2, Vec2, f64), BodyError> {
        let bp = self.boundary(theta);
        match bp.curvature {
            Some(k) => Ok((bp.x, bp.normal, k)),
            None => Err(BodyError::CurvatureUnavailable { param: theta }),
        }
    }

    /// Lebesgue area.
    pub fn area(&self) -> f64 {
        match self {
            ConvexBody::Disk { r } => PI * r * r,
            ConvexBody::Ellipse { a, b } => PI * a * b,
            ConvexBody::Box2 { half } => 4.0 * half.x * half.y,
            ConvexBody::Polygon { verts } => shoelace(verts),
            ConvexBody::Radial { r, .. } => {
                numeric::integrate_periodic(|t| 0.5 * r(t) * r(t), 1e-12, 0.0).value
            }
            ConvexBody::Linear { base, a, .. } => {
                (a.m11 * a.m22 - a.m12 * a.m21).abs() * base.area()
            }
        }
    }

    /// Axis-aligned bounding box `(min, max)` from the support function.
    pub fn bbox(&self) -> (Vec2, Vec2) {
        let ex = Vec2::new(1.0, 0.0);
        let ey = Vec2::new(0.0, 1.0);
        (
            Vec2::new(-self.support(-ex), -self.support(-ey)),
            Vec2::new(self.support(ex), self.support(ey)),
        )
    }

    /// Translate of the support point certified to be on the boundary in
    /// direction `u`; convenience for slicing code.
    pub fn width(&self, u: Vec2) -> f64 {
        self.support(u) + self.support(-u)
    }
}

fn quadratic_interval(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = (-b - sq) / (2.0 * a);
    let t1 = (-b + sq) / (2.0 * a);
    Some((t0.min(t1), t0.max(t1)))
}

fn shoelace(verts: &[Vec2]) -> f64 {
    let n = verts.len();
    0.5 * (0..n)
        .map(|i| cross2(verts[i], verts[(i + 1) % n]))
        .sum::<f64>()
}

/// Signed area of a closed polygon (positive when counterclockwise).
pub fn polygon_area(verts: &[Vec2]) -> f64 {
    shoelace(verts)
}

fn polygon_boundary(verts: &[Vec2], theta: f64) -> BoundaryPoint {
    let n = verts.len();
    let lens: Vec<f64> = (0..n)
        .map(|i| (verts[(i + 1) % n] - verts[i]).norm())
        .collect();
    let total: f64 = lens.iter().sum();
    let mut s = (theta.rem_euclid(TAU)) / TAU * total;
    let mut i = 0;
    while i < n - 1 && s > lens[i] {
        s -= lens[i];
        i += 1;
    }
    let e = verts[(i + 1) % n] - verts[i];
    let len = lens[i];
    let frac = (s / len).clamp(0.0, 1.0);
    let at_vertex = frac * len < GEOM_EPS * total || (1.0 - frac) * len < GEOM_EPS * total;
    BoundaryPoint {
        x: verts[i] + e * frac,
        normal: Vec2::new(e.y, -e.x) / len,
        speed: total / TAU,
        curvature: if at_vertex { None } else { Some(0.0) },
    }
}

/// Positive weight density on a body; constant weights unlock exact fast
/// paths in the measure routines.
#[derive(Clone)]
pub enum WeightFn {
    Uniform(f64),
    Custom {
        f: Arc<dyn Fn(Vec2) -> f64 + Send + Sync>,
        /// Known (min, max) bounds on the body, when available.
        bounds: Option<(f64, f64)>,
    },
}

impl WeightFn {
    pub fn uniform() -> Self {
        WeightFn::Uniform(1.0)
    }

    pub fn constant(c: f64) -> Self {
        assert!(c > 0.0, "weights must be positive");
        WeightFn::Uniform(c)
    }

    pub fn new<F: Fn(Vec2) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        WeightFn::Custom {
            f: Arc::new(f),
            bounds: None,
        }
    }

    pub fn with_bounds<F: Fn(Vec2) -> f64 + Send + Sync + 'static>(f: F, lo: f64, hi: f64) -> Self {
        WeightFn::Custom {
            f: Arc::new(f),
            bounds: Some((lo, hi)),
        }
    }

    #[inline]
    pub fn eval(&self, p: Vec2) -> f64 {
        match self {
            WeightFn::Uniform(c) => *c,
            WeightFn::Custom { f, .. } => f(p),
        }
    }

    /// The constant, for uniform weights.
    pub fn as_uniform(&self) -> Option<f64> {
        match self {
            WeightFn::Uniform(c) => Some(*c),
            WeightFn::Custom { .. } => None,
        }
    }

    /// min/max of the weight over the boundary of `body`, by dense scan.
    pub fn range_on_boundary(&self, body: &ConvexBody, samples: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..samples {
            let t = TAU * j as f64 / samples as f64;
            let v = self.eval(body.boundary(t).x);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Upper envelope of the weight over the body: max over a fine grid,
    /// inflated by 1%. `bounds`, when present, wins.
    pub fn envelope(&self, body: &ConvexBody) -> f64 {
        match self {
            WeightFn::Uniform(c) => *c,
            WeightFn::Custom { bounds: Some((_, hi)), .. } => *hi,
            WeightFn::Custom { f, .. } => {
                let (lo, hi) = body.bbox();
                let n = 128;
                let mut best = 0.0f64;
                for i in 0..=n {
                    for j in 0..=n {
                        let p = Vec2::new(
                            lo.x + (hi.x - lo.x) * i as f64 / n as f64,
                            lo.y + (hi.y - lo.y) * j as f64 / n as f64,
                        );
                        if body.contains(p, 1e-9) {
                            best = best.max(f(p));
                        }
                    }
                }
                best * 1.01
            }
        }
    }
}

impl std::fmt::Debug for WeightFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightFn::Uniform(c) => write!(f, "Uniform({c})"),
            WeightFn::Custom { .. } => write!(f, "Custom"),
        }
    }
}

/// Maximal radius of a Euclidean ball through the boundary point at
/// parameter `theta` that fits inside the body (center on the inward
/// normal); bisection on the inclusion predicate.
pub fn rolling_radius(body: &ConvexBody, theta: f64) -> f64 {
    let bp = body.boundary(theta);
    let dirs = uniform_directions(512);
    let r_max = dirs
        .iter()
        .map(|&u| body.width(u))
        .fold(f64::NEG_INFINITY, f64::max)
        / 2.0
        * 1.01;
    let scale = r_max;
    // ball B(x − r n, r) ⊆ K  ⟺  sup_u (c·u + r − h(u)) ≤ 0
    let fits = |r: f64| {
        let c = bp.x - bp.normal * r;
        let gap = |ang: f64| {
            let u = Vec2::new(ang.cos(), ang.sin());
            c.dot(&u) + r - body.support(u)
        };
        let n = 1024;
        let mut worst = (f64::NEG_INFINITY, 0.0);
        for j in 0..n {
            let ang = TAU * j as f64 / n as f64;
            let g = gap(ang);
            if g > worst.0 {
                worst = (g, ang);
            }
        }
        let w = TAU / n as f64;
        let (_, g) = numeric::golden_max(gap, worst.1 - w, worst.1 + w, 1e-12);
        // tangency is second-order contact, so the gap threshold limits the
        // attainable radius accuracy to ~sqrt(threshold)
        g.max(worst.0) <= scale * 1e-13
    };
    if !fits(scale * 1e-9) {
        return 0.0;
    }
    let mut lo = scale * 1e-9;
    let mut hi = r_max;
    if fits(hi) {
        return hi;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Curvature at a boundary point from positions only: least-squares
/// quadratic fit `w ≈ κv²/2 + c₃v³` in the tangent chart over stencils of
/// radius `h ∈ {1e-2, 5e-3, 2.5e-3}`, Richardson-extrapolated.
pub fn numeric_curvature(body: &ConvexBody, theta: f64) -> f64 {
    let bp = body.boundary(theta);
    let tangent = -perp(bp.normal);
    let fit_at = |h: f64| {
        // collect stencil points with tangent offset within [h/4, h]
        let mut rows: Vec<(f64, f64)> = Vec::new();
        let mut dt = h / bp.speed.max(1e-12);
        for _ in 0..40 {
            let mut count = 0;
            rows.clear();
            for k in 1..=6 {
                for sgn in [-1.0, 1.0] {
                    let p = body.boundary(theta + sgn * dt * k as f64 / 6.0);
                    let v = (p.x - bp.x).dot(&tangent);
                    let w = -(p.x - bp.x).dot(&bp.normal);
                    if v.abs() <= h {
                        rows.push((v, w));
                        count += 1;
                    }
                }
            }
            if count == 12 {
                break;
            }
            dt *= 0.7;
        }
        // LSQ for w = p2 v² + p3 v³
        let (mut s22, mut s23, mut s33, mut b2, mut b3) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(v, w) in &rows {
            let v2 = v * v;
            let v3 = v2 * v;
            s22 += v2 * v2;
            s23 += v2 * v3;
            s33 += v3 * v3;
            b2 += v2 * w;
            b3 += v3 * w;
        }
        let det = s22 * s33 - s23 * s23;
        let p2 = (b2 * s33 - b3 * s23) / det;
        2.0 * p2
    };
    let k1 = fit_at(1e-2);
    let k2 = fit_at(5e-3);
    let k3 = fit_at(2.5e-3);
    // assume κ(h) = κ + c·h²; two Richardson stages with ratio 2
    let r1 = (4.0 * k2 - k1) / 3.0;
    let r2 = (4.0 * k3 - k2) / 3.0;
    (4.0 * r2 - r1) / 3.0
}
