//! Weighted floating bodies.
//!
//! For a convex body `K`, a positive cutting density `φ` and `δ > 0`, the
//! weighted floating body `K_δ^φ` is the intersection of all halfspaces
//! whose complements cut off `φ`-weight at most `δ` from `K`. Per direction
//! `v` the halfspace offset `t_δ(v)` solves `Φ(K ∩ {x·v ≥ t}) = δ`; the
//! module finds these offsets by bracketed root-finding on nested
//! quadratures, intersects the halfspaces over refining direction grids,
//! and measures the weighted deficit `Ψ(K) − Ψ(K_δ^φ)` both directly and
//! through the boundary disintegration (cone) formula.

use crate::bodies::{
    self, boundary_integral, boundary_integral_budget, cross2, halfspace_intersection, measure,
    polygon_area, slice_integral, uniform_directions, BodyError, ConvexBody, HalfspaceSet, Vec2,
    WeightFn,
};
use crate::numeric::{self, Estimate, NumericError};
use rayon::prelude::*;
use statrs::function::gamma::gamma;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FloatingError {
    #[error("floating body is empty (delta too large for this body/weight)")]
    EmptyFloatingBody,
    #[error("delta {delta} is not below the total weight {total}")]
    RootNotBracketed { delta: f64, total: f64 },
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Volume of the k-dimensional unit ball, `π^{k/2}/Γ(k/2+1)`.
pub fn unit_ball_volume(k: usize) -> f64 {
    std::f64::consts::PI.powf(k as f64 / 2.0) / gamma(k as f64 / 2.0 + 1.0)
}

/// Leading constant of the floating-body limit,
/// `α_n = ((n+1)/v_{n-1})^{2/(n+1)} / 2`.
pub fn alpha_n(n: usize) -> f64 {
    0.5 * ((n as f64 + 1.0) / unit_ball_volume(n - 1)).powf(2.0 / (n as f64 + 1.0))
}

/// Tunables for the floating-body pipeline; defaults match the reported
/// experiments.
#[derive(Debug, Clone)]
pub struct FloatingOptions {
    /// Relative tolerance of each cap-measure quadrature.
    pub cap_rel_tol: f64,
    /// Absolute tolerance on the offsets `t_δ(v)`.
    pub offset_tol: f64,
    /// Stop refining the direction grid once the deficit moves by less than
    /// this relative amount under doubling.
    pub grid_rel_tol: f64,
    pub start_directions: usize,
    pub max_directions: usize,
    /// Relative tolerance of the deficit measures.
    pub measure_rel_tol: f64,
}

impl Default for FloatingOptions {
    fn default() -> Self {
        FloatingOptions {
            cap_rel_tol: 1e-8,
            offset_tol: 1e-10,
            grid_rel_tol: 1e-3,
            start_directions: 64,
            max_directions: 32768,
            measure_rel_tol: 1e-9,
        }
    }
}

/// Problem statement for one floating body.
#[derive(Clone)]
pub struct FloatingSpec {
    pub body: ConvexBody,
    /// Cutting density φ (defines the caps).
    pub phi: WeightFn,
    /// Deficit density ψ (defines the measured volume).
    pub psi: WeightFn,
    pub delta: f64,
    pub opts: FloatingOptions,
}

/// Offsets, inner polytope and deficits of one floating body.
#[derive(Debug, Clone)]
pub struct FloatingBodyResult {
    pub directions: Vec<Vec2>,
    pub offsets: Vec<f64>,
    /// Vertices of the halfspace intersection `P_in ⊇ K_δ^φ` (finite grid).
    pub inner: Vec<Vec2>,
    /// `Ψ(K) − Ψ(P_in)` by direct measure difference.
    pub deficit: Estimate,
    /// Same deficit through the cone formula.
    pub deficit_cone: Estimate,
    /// `deficit / δ^{2/(n+1)}`.
    pub normalized: f64,
    pub directions_used: usize,
}

/// Weight of the cap `K ∩ {x·v ≥ t}`:
/// `∫_t^{h_K(v)} ∫_{K ∩ {x·v = s}} φ dλ ds`.
///
/// The outer integral is taken in the substituted variable `w = √(h−s)`,
/// which removes the square-root vanishing of the slice at the support
/// hyperplane.
pub fn cap_measure(
    body: &ConvexBody,
    phi: &WeightFn,
    v: Vec2,
    t: f64,
    rel_tol: f64,
) -> Result<Estimate, FloatingError> {
    let h = body.support(v);
    if t >= h {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let wmax = (h - t).sqrt();
    let inner_tol = (rel_tol * 0.1).max(1e-13);
    let est = numeric::integrate_budget(
        |w| 2.0 * w * slice_integral(body, phi, v, h - w * w, inner_tol),
        0.0,
        wmax,
        rel_tol,
        0.0,
        6000,
    )
    .map_err(FloatingError::Numeric)?;
    Ok(est)
}

/// The offset `t_δ(v)` with `cap_measure(v, t) = δ`, by Brent's method on
/// the bracket `[−h_K(−v), h_K(v)]`; `cap_measure(v, ·)` is continuous and
/// strictly decreasing there.
pub fn floating_offset(
    body: &ConvexBody,
    phi: &WeightFn,
    delta: f64,
    v: Vec2,
    opts: &FloatingOptions,
) -> Result<f64, FloatingError> {
    let total = measure(body, phi, opts.measure_rel_tol)?.value;
    floating_offset_with_total(body, phi, delta, v, total, opts)
}

fn floating_offset_with_total(
    body: &ConvexBody,
    phi: &WeightFn,
    delta: f64,
    v: Vec2,
    phi_total: f64,
    opts: &FloatingOptions,
) -> Result<f64, FloatingError> {
    if !(delta > 0.0) || delta >= phi_total {
        return Err(FloatingError::RootNotBracketed {
            delta,
            total: phi_total,
        });
    }
    let hi = body.support(v);
    let lo = -body.support(-v);
    let g = |t: f64| {
        if t <= lo {
            phi_total - delta
        } else {
            cap_measure(body, phi, v, t, opts.cap_rel_tol)
                .map(|e| e.value)
                .unwrap_or(f64::NAN)
                - delta
        }
    };
    let root = numeric::brent_root(g, lo, hi, opts.offset_tol)?;
    Ok(root)
}

/// The floating body on a fixed direction grid: offsets per direction and
/// the halfspace intersection; no refinement.
pub fn floating_body_with_directions(
    body: &ConvexBody,
    phi: &WeightFn,
    delta: f64,
    directions: &[Vec2],
    opts: &FloatingOptions,
) -> Result<(Vec<f64>, Vec<Vec2>), FloatingError> {
    let phi_total = measure(body, phi, opts.measure_rel_tol)?.value;
    let offsets: Result<Vec<f64>, FloatingError> = directions
        .par_iter()
        .map(|&v| floating_offset_with_total(body, phi, delta, v, phi_total, opts))
        .collect();
    let offsets = offsets?;
    let z = body.interior_point();
    if directions
        .iter()
        .zip(&offsets)
        .any(|(v, &t)| z.dot(v) >= t)
    {
        return Err(FloatingError::EmptyFloatingBody);
    }
    let mut hs = HalfspaceSet::new();
    for (v, &t) in directions.iter().zip(&offsets) {
        hs.push(*v, t);
    }
    let inter = match halfspace_intersection(&hs, z) {
        Ok(i) => i,
        Err(BodyError::EmptyIntersection) => return Err(FloatingError::EmptyFloatingBody),
        Err(e) => return Err(e.into()),
    };
    Ok((offsets, inter.vertices))
}

/// Full pipeline: refine the direction grid by doubling until the deficit
/// stabilizes, then report offsets, the inner polytope and both deficit
/// routes.
pub fn weighted_floating_body(spec: &FloatingSpec) -> Result<FloatingBodyResult, FloatingError> {
    let FloatingSpec {
        body,
        phi,
        psi,
        delta,
        opts,
    } = spec;
    let phi_total = measure(body, phi, opts.measure_rel_tol)?.value;
    let psi_total = measure(body, psi, opts.measure_rel_tol)?;
    let z = body.interior_point();

    let mut k = opts.start_directions;
    let mut dirs = uniform_directions(k);
    let mut offsets: Vec<f64> = Vec::new();
    let mut prev_deficit: Option<f64> = None;
    let (inner, deficit) = loop {
        // a doubled uniform grid keeps the old directions at even indices
        if offsets.is_empty() {
            offsets = dirs
                .par_iter()
                .map(|&v| floating_offset_with_total(body, phi, *delta, v, phi_total, opts))
                .collect::<Result<_, _>>()?;
        } else {
            let old = offsets.clone();
            offsets = (0..k)
                .into_par_iter()
                .map(|i| {
                    if i % 2 == 0 {
                        Ok(old[i / 2])
                    } else {
                        floating_offset_with_total(body, phi, *delta, dirs[i], phi_total, opts)
                    }
                })
                .collect::<Result<_, _>>()?;
        }
        if dirs.iter().zip(&offsets).any(|(v, &t)| z.dot(v) >= t) {
            return Err(FloatingError::EmptyFloatingBody);
        }
        let mut hs = HalfspaceSet::new();
        for (v, &t) in dirs.iter().zip(&offsets) {
            hs.push(*v, t);
        }
        let inter = match halfspace_intersection(&hs, z) {
            Ok(i) => i,
            Err(BodyError::EmptyIntersection) => return Err(FloatingError::EmptyFloatingBody),
            Err(e) => return Err(e.into()),
        };
        let inner_psi = polygon_weight(&inter.vertices, psi);
        let deficit = Estimate {
            value: psi_total.value - inner_psi.value,
            error: psi_total.error + inner_psi.error,
        };
        let stable = prev_deficit
            .map(|p| (deficit.value - p).abs() <= opts.grid_rel_tol * deficit.value.abs())
            .unwrap_or(false);
        prev_deficit = Some(deficit.value);
        if stable || k >= opts.max_directions {
            break (inter.vertices, deficit);
        }
        k *= 2;
        dirs = uniform_directions(k);
    };

    let deficit_cone = deficit_via_cone_formula(body, psi, &inner, z)?;
    Ok(FloatingBodyResult {
        directions: dirs,
        offsets,
        normalized: deficit.value / delta.powf(2.0 / (body.dim() as f64 + 1.0)),
        inner,
        deficit,
        deficit_cone,
        directions_used: k,
    })
}

fn polygon_weight(verts: &[Vec2], w: &WeightFn) -> Estimate {
    match w.as_uniform() {
        Some(c) => Estimate {
            value: c * polygon_area(verts),
            error: 0.0,
        },
        None => {
            let z = verts.iter().sum::<Vec2>() / verts.len() as f64;
            bodies::polygon_measure_radial(verts, z, w)
        }
    }
}

/// Star-shaped radial clipper: distance from `z` to the polygon boundary
/// along a given direction, O(log n) per query.
pub struct RadialClip {
    /// Vertices relative to `z`, counterclockwise, rotated so that the
    /// angle sequence is increasing.
    rel: Vec<Vec2>,
    angles: Vec<f64>,
}

impl RadialClip {
    /// `z` must lie strictly inside the (convex, ccw) polygon.
    pub fn new(verts: &[Vec2], z: Vec2) -> Self {
        let n = verts.len();
        let mut rel: Vec<Vec2> = verts.iter().map(|v| v - z).collect();
        let mut start = 0;
        let mut best = f64::INFINITY;
        for (i, r) in rel.iter().enumerate() {
            let a = r.y.atan2(r.x);
            if a < best {
                best = a;
                start = i;
            }
        }
        rel.rotate_left(start);
        let _ = n;
        let angles: Vec<f64> = rel.iter().map(|r| r.y.atan2(r.x)).collect();
        RadialClip { rel, angles }
    }

    /// Distance `s > 0` with `z + s·u ∈ ∂P` for unit `u`.
    pub fn clip(&self, u: Vec2) -> f64 {
        let a = u.y.atan2(u.x);
        let n = self.rel.len();
        // binary search for the wedge containing angle `a`
        let i = match self.angles.binary_search_by(|x| x.total_cmp(&a)) {
            Ok(i) => i,
            Err(0) => n - 1, // below the first angle: wrap-around wedge
            Err(i) => i - 1,
        };
        let p = self.rel[i];
        let q = self.rel[(i + 1) % n];
        let e = q - p;
        let denom = cross2(u, e);
        if denom.abs() < 1e-300 {
            return p.norm();
        }
        cross2(p, e) / denom
    }
}

/// `Ψ(K) − Ψ(L)` for a polytope `L ⊆ K` with `z ∈ int L`, by the boundary
/// disintegration about `z`:
/// `∫_{∂K} n_K(x)·(x−z)/‖x−z‖^n ∫_{‖x_L−z‖}^{‖x−z‖} ψ(z + t·u) t^{n-1} dt dx`.
pub fn deficit_via_cone_formula(
    body: &ConvexBody,
    psi: &WeightFn,
    inner: &[Vec2],
    z: Vec2,
) -> Result<Estimate, FloatingError> {
    let clip = RadialClip::new(inner, z);
    let n = body.dim() as f64;
    // the radial clip has a derivative kink per polytope vertex; a relative
    // tolerance of 1e-6 keeps the panel count proportionate
    let est = boundary_integral_budget(
        body,
        |bp| {
            let rvec = bp.x - z;
            let r = rvec.norm();
            let u = rvec / r;
            let r_inner = clip.clip(u);
            let radial = numeric::gk15(
                &|t: f64| psi.eval(z + u * t) * t.powf(n - 1.0),
                r_inner,
                r,
            );
            bp.normal.dot(&u) / r.powf(n - 1.0) * radial.value
        },
        1e-6,
        40000,
    )?;
    Ok(est)
}

/// One row of a floating-limit convergence study.
#[derive(Debug, Clone)]
pub struct FloatingLimitRow {
    pub delta: f64,
    pub deficit: f64,
    pub deficit_cone: f64,
    pub normalized: f64,
    pub directions_used: usize,
    pub quadrature_err: f64,
}

#[derive(Debug, Clone)]
pub struct FloatingLimitReport {
    pub rows: Vec<FloatingLimitRow>,
    /// `a` from the fit `normalized ≈ a + b·δ^{1/(n+1)}`.
    pub extrapolated: f64,
    /// `α_n ∫_{∂K} H^{1/(n+1)} φ^{-2/(n+1)} ψ dx`.
    pub predicted: f64,
}

/// Deficit limit predicted by the floating-body theorem, by boundary
/// quadrature of the curvature/weight integrand.
pub fn predicted_floating_limit(
    body: &ConvexBody,
    phi: &WeightFn,
    psi: &WeightFn,
) -> Result<f64, FloatingError> {
    let n = body.dim() as f64;
    let est = boundary_integral(
        body,
        |bp| {
            let kappa = bp.curvature.unwrap_or(0.0).max(0.0);
            kappa.powf(1.0 / (n + 1.0))
                * phi.eval(bp.x).powf(-2.0 / (n + 1.0))
                * psi.eval(bp.x)
        },
        1e-10,
    )?;
    Ok(alpha_n(body.dim()) * est.value)
}

/// Run the floating pipeline over a `δ` grid and extrapolate the
/// normalized deficit against the predicted limit.
pub fn check_floating_limit(
    body: &ConvexBody,
    phi: &WeightFn,
    psi: &WeightFn,
    deltas: &[f64],
    opts: &FloatingOptions,
) -> Result<FloatingLimitReport, FloatingError> {
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let spec = FloatingSpec {
            body: body.clone(),
            phi: phi.clone(),
            psi: psi.clone(),
            delta,
            opts: opts.clone(),
        };
        let r = weighted_floating_body(&spec)?;
        rows.push(FloatingLimitRow {
            delta,
            deficit: r.deficit.value,
            deficit_cone: r.deficit_cone.value,
            normalized: r.normalized,
            directions_used: r.directions_used,
            quadrature_err: r.deficit.error,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.normalized).collect();
    let p = 1.0 / (body.dim() as f64 + 1.0);
    let (extrapolated, _) = numeric::fit_offset_power(&xs, &ys, p);
    let predicted = predicted_floating_limit(body, phi, psi)?;
    Ok(FloatingLimitReport {
        rows,
        extrapolated,
        predicted,
    })
}

/// Offset of the unweighted floating body of the unit disk, from the
/// closed-form cap area `arccos t − t√(1−t²)`; oracle used by tests.
pub fn disk_offset_oracle(delta: f64) -> f64 {
    numeric::brent_root(
        |t| t.acos() - t * (1.0 - t * t).sqrt() - delta,
        0.0,
        1.0,
        1e-14,
    )
    .expect("monotone bracket")
}
