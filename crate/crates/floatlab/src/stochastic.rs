//! Monte Carlo engines: weighted random polytopes, Efron's vertex-count
//! identity, dual random polyhedral sets, and the spherical duality
//! principle.
//!
//! Reproducibility: every replicate draws from its own counter-based
//! ChaCha stream keyed by `(seed, purpose, replicate)`, so estimates are
//! bit-identical no matter how rayon schedules the work. Paired estimators
//! (the two Efron routes, the two duality routes) share their replicate's
//! sample.

use crate::bodies::{
    boundary_integral, convex_hull2, halfspace_intersection, measure, polygon_area,
    polygon_measure_radial, uniform_directions, ConvexBody, HalfspaceSet, Vec2, Vec3, WeightFn,
};
use crate::floating::unit_ball_volume;
use crate::numeric;
use crate::spaces::{sphere_to_chart, spherical_polygon_area, SphericalCap};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::function::gamma::gamma;
use std::f64::consts::{FRAC_PI_2, TAU};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StochasticError {
    #[error("weight exceeded its rejection envelope: {value} > {envelope}")]
    EnvelopeExceeded { value: f64, envelope: f64 },
    #[error("sample count m={m} below the required n+1={min}")]
    TooFewPoints { m: usize, min: usize },
    #[error("spherical body is not contained in an open hemisphere")]
    ImproperBody,
    #[error(transparent)]
    Body(#[from] crate::bodies::BodyError),
}

/// Stream purposes; distinct estimators never share a stream.
pub mod purpose {
    pub const POINTS: u32 = 1;
    pub const EFRON: u32 = 2;
    pub const DUAL: u32 = 3;
    pub const SPHERE_DUAL: u32 = 4;
    pub const MODEL_POINTS: u32 = 5;
    pub const TEST: u32 = 9;
}

/// Counter-based RNG stream for `(seed, purpose, replicate)`.
pub fn stream(seed: u64, purpose: u32, replicate: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((purpose as u64) << 32) | replicate as u64);
    rng
}

/// Monte Carlo mean with its standard error (`sample stddev / √R`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub replicates: usize,
}

impl MCEstimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let (mean, std_error) = numeric::mean_stderr(samples);
        MCEstimate {
            mean,
            std_error,
            replicates: samples.len(),
        }
    }
}

/// Leading constant of the random-polytope limit,
/// `β_n = (n²+n+2)(n²+1)/(2(n+3)(n+1)!) · Γ((n²+1)/(n+1)) · ((n+1)/v_{n-1})^{2/(n+1)}`.
pub fn beta_n(n: usize) -> f64 {
    let nf = n as f64;
    let factorial = gamma(nf + 2.0); // (n+1)!
    (nf * nf + nf + 2.0) * (nf * nf + 1.0) / (2.0 * (nf + 3.0) * factorial)
        * gamma((nf * nf + 1.0) / (nf + 1.0))
        * ((nf + 1.0) / unit_ball_volume(n - 1)).powf(2.0 / (nf + 1.0))
}

/// Sampler for `m` points from the normalized density `φ/Φ(K)`.
#[derive(Clone)]
pub struct SamplerConfig {
    pub body: ConvexBody,
    pub phi: WeightFn,
    pub m: usize,
    pub replicates: usize,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<(), StochasticError> {
        let min = self.body.dim() + 1;
        if self.m < min {
            return Err(StochasticError::TooFewPoints { m: self.m, min });
        }
        Ok(())
    }
}

/// One draw from `Φ/Φ(K)` by rejection from the bounding box under the
/// envelope `M ≥ sup_K φ`.
pub fn sample_point(
    body: &ConvexBody,
    phi: &WeightFn,
    envelope: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec2, StochasticError> {
    let (lo, hi) = body.bbox();
    for _ in 0..100_000_000u64 {
        let p = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if !body.contains(p, 0.0) {
            continue;
        }
        let w = phi.eval(p);
        if w > envelope * (1.0 + 1e-12) {
            return Err(StochasticError::EnvelopeExceeded { value: w, envelope });
        }
        if rng.gen::<f64>() * envelope <= w {
            return Ok(p);
        }
    }
    unreachable!("rejection sampler exhausted its draw budget");
}

pub fn sample_points(
    body: &ConvexBody,
    phi: &WeightFn,
    envelope: f64,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec2>, StochasticError> {
    (0..m)
        .map(|_| sample_point(body, phi, envelope, rng))
        .collect()
}

/// Convergence data of one random-polytope experiment.
#[derive(Debug, Clone)]
pub struct RandomPolytopeReport {
    /// Raw expected deficit `E(Ψ(K) − Ψ(K_m^Φ))`.
    pub deficit: MCEstimate,
    /// Deficit scaled by `m^{2/(n+1)}`, the quantity with a limit.
    pub normalized: MCEstimate,
    /// `β_n ∫ H^{1/(n+1)} φ_pdf^{-2/(n+1)} ψ dx` with `φ_pdf = φ/Φ(K)`.
    pub predicted: f64,
}

/// Expected weighted deficit of the hull of `m` φ-distributed points.
pub fn random_polytope_deficit(
    cfg: &SamplerConfig,
    psi: &WeightFn,
) -> Result<RandomPolytopeReport, StochasticError> {
    cfg.validate()?;
    let envelope = cfg.phi.envelope(&cfg.body);
    let psi_total = measure(&cfg.body, psi, 1e-10)?.value;
    let deficits: Result<Vec<f64>, StochasticError> = (0..cfg.replicates as u32)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(cfg.seed, purpose::POINTS, r);
            let pts = sample_points(&cfg.body, &cfg.phi, envelope, cfg.m, &mut rng)?;
            let hull = convex_hull2(&pts);
            Ok(psi_total - hull_weight(&hull.vertices, psi))
        })
        .collect();
    let deficits = deficits?;
    let exponent = 2.0 / (cfg.body.dim() as f64 + 1.0);
    let scaled: Vec<f64> = deficits
        .iter()
        .map(|d| d * (cfg.m as f64).powf(exponent))
        .collect();
    Ok(RandomPolytopeReport {
        deficit: MCEstimate::from_samples(&deficits),
        normalized: MCEstimate::from_samples(&scaled),
        predicted: predicted_random_limit(&cfg.body, &cfg.phi, psi)?,
    })
}

fn hull_weight(verts: &[Vec2], w: &WeightFn) -> f64 {
    if verts.len() < 3 {
        return 0.0;
    }
    match w.as_uniform() {
        Some(c) => c * polygon_area(verts),
        None => {
            let z = verts.iter().sum::<Vec2>() / verts.len() as f64;
            polygon_measure_radial(verts, z, w).value
        }
    }
}

/// `β_n ∫_{∂K} H^{1/(n+1)} φ_pdf^{-2/(n+1)} ψ dx`.
pub fn predicted_random_limit(
    body: &ConvexBody,
    phi: &WeightFn,
    psi: &WeightFn,
) -> Result<f64, StochasticError> {
    let n = body.dim() as f64;
    let phi_total = measure(body, phi, 1e-10)?.value;
    let est = boundary_integral(
        body,
        |bp| {
            let kappa = bp.curvature.unwrap_or(0.0).max(0.0);
            kappa.powf(1.0 / (n + 1.0))
                * (phi.eval(bp.x) / phi_total).powf(-2.0 / (n + 1.0))
                * psi.eval(bp.x)
        },
        1e-10,
    )?;
    Ok(beta_n(body.dim()) * est.value)
}

/// The two Efron vertex-count estimators, coupled on a common stream.
#[derive(Debug, Clone)]
pub struct EfronReport {
    /// Direct `E f₀(K_m^Φ)`.
    pub direct: MCEstimate,
    /// Transformed `m(1 − E Φ(K_{m-1}^Φ)/Φ(K))`.
    pub transformed: MCEstimate,
    /// Paired per-replicate difference (direct − transformed).
    pub difference: MCEstimate,
    /// Direct estimator scaled by `m^{-(n-1)/(n+1)}`.
    pub normalized: MCEstimate,
    /// `β_n ∫ H^{1/(n+1)} φ_pdf^{(n-1)/(n+1)} dx`.
    pub predicted: f64,
}

/// Vertex count of the weighted random polytope, estimated directly and
/// through the Efron identity; the same points feed both estimators.
pub fn efron_vertex_count(cfg: &SamplerConfig) -> Result<EfronReport, StochasticError> {
    cfg.validate()?;
    let envelope = cfg.phi.envelope(&cfg.body);
    let phi_total = measure(&cfg.body, &cfg.phi, 1e-10)?.value;
    let rows: Result<Vec<(f64, f64)>, StochasticError> = (0..cfg.replicates as u32)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(cfg.seed, purpose::EFRON, r);
            let pts = sample_points(&cfg.body, &cfg.phi, envelope, cfg.m, &mut rng)?;
            let f0 = convex_hull2(&pts).vertex_count() as f64;
            let prefix = convex_hull2(&pts[..cfg.m - 1]);
            let ratio = hull_weight(&prefix.vertices, &cfg.phi) / phi_total;
            Ok((f0, cfg.m as f64 * (1.0 - ratio)))
        })
        .collect();
    let rows = rows?;
    let direct: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let transformed: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let diff: Vec<f64> = rows.iter().map(|r| r.0 - r.1).collect();
    let n = cfg.body.dim() as f64;
    let scale = (cfg.m as f64).powf(-(n - 1.0) / (n + 1.0));
    let normalized: Vec<f64> = direct.iter().map(|x| x * scale).collect();
    let est = boundary_integral(
        &cfg.body,
        |bp| {
            let kappa = bp.curvature.unwrap_or(0.0).max(0.0);
            kappa.powf(1.0 / (n + 1.0))
                * (cfg.phi.eval(bp.x) / phi_total).powf((n - 1.0) / (n + 1.0))
        },
        1e-10,
    )?;
    Ok(EfronReport {
        direct: MCEstimate::from_samples(&direct),
        transformed: MCEstimate::from_samples(&transformed),
        difference: MCEstimate::from_samples(&diff),
        normalized: MCEstimate::from_samples(&normalized),
        predicted: beta_n(cfg.body.dim()) * est.value,
    })
}

/// One halfspace from the motion-invariant measure restricted to
/// `{H⁻(u,t) : h_K(u) ≤ t ≤ h_K(u)+1}`: uniform direction, uniform offset.
pub fn sample_halfspace(body: &ConvexBody, rng: &mut ChaCha8Rng) -> (Vec2, f64) {
    let ang = rng.gen_range(0.0..TAU);
    let u = Vec2::new(ang.cos(), ang.sin());
    let t = body.support(u) + rng.gen::<f64>();
    (u, t)
}

/// Mean width `W = (2/(n v_n)) ∫ h` by a fixed `k`-point rule; in the
/// plane this is twice the circular average of the support.
pub fn mean_width2<F: Fn(Vec2) -> f64>(support: F, k: usize) -> f64 {
    let dirs = uniform_directions(k);
    2.0 * dirs.iter().map(|&u| support(u)).sum::<f64>() / k as f64
}

#[derive(Clone)]
pub struct DualSamplerConfig {
    pub body: ConvexBody,
    pub m: usize,
    pub replicates: usize,
    pub seed: u64,
}

/// Mean-width excess and facet counts of random polyhedral sets.
#[derive(Debug, Clone)]
pub struct DualRandomReport {
    /// `(W(K^m ∩ (K+B²)) − W(K)) · m^{2/(n+1)}`.
    pub width_excess: MCEstimate,
    /// `f_{n-1}(K^m) · m^{-(n-1)/(n+1)}`.
    pub facet_count: MCEstimate,
    /// `2 β_n (n v_n)^{-(n-1)/(n+1)} ∫ H^{n/(n+1)}`.
    pub predicted_width: f64,
    /// `β_n (n v_n)^{-(n-1)/(n+1)} ∫ H^{n/(n+1)}`.
    pub predicted_facets: f64,
}

/// Intersect `m` halfspaces sampled from `μ_K`, clip to the parallel body
/// `K + B²`, and estimate the mean-width excess and facet count of `K^m`.
pub fn dual_random_polyhedron(
    cfg: &DualSamplerConfig,
) -> Result<DualRandomReport, StochasticError> {
    let n = cfg.body.dim() as f64;
    let z = cfg.body.interior_point();
    // tangential discretization of K + B² used for clipping
    let clip_dirs = uniform_directions(1024);
    let clip_offsets: Vec<f64> = clip_dirs
        .iter()
        .map(|&u| cfg.body.support(u) + 1.0)
        .collect();
    let w_body = mean_width2(|u| cfg.body.support(u), 512);
    // a generous box bounds the facet-count intersection when the sampled
    // normals leave a wide angular gap
    let box_bound = cfg.body.bbox().1.norm() + 1e4;

    let rows: Result<Vec<(f64, f64)>, StochasticError> = (0..cfg.replicates as u32)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(cfg.seed, purpose::DUAL, r);
            let mut hs = HalfspaceSet::new();
            for _ in 0..cfg.m {
                let (u, t) = sample_halfspace(&cfg.body, &mut rng);
                hs.push(u, t);
            }
            // facet count of K^m itself: clip by the huge box and count the
            // facets carried by sampled halfspaces
            let mut hs_box = hs.clone();
            for u in uniform_directions(4) {
                hs_box.push(u, box_bound);
            }
            let inter = halfspace_intersection(&hs_box, z)?;
            let mut active: Vec<usize> =
                inter.active.iter().copied().filter(|&i| i < cfg.m).collect();
            active.sort_unstable();
            active.dedup();
            let facets = active.len() as f64;

            // width of K^m ∩ (K + B²)
            let mut hs_par = hs;
            for (u, t) in clip_dirs.iter().zip(&clip_offsets) {
                hs_par.push(*u, *t);
            }
            let clipped = halfspace_intersection(&hs_par, z)?;
            let w_clip = mean_width2(
                |u| {
                    clipped
                        .vertices
                        .iter()
                        .map(|v| v.dot(&u))
                        .fold(f64::NEG_INFINITY, f64::max)
                },
                512,
            );
            Ok((w_clip - w_body, facets))
        })
        .collect();
    let rows = rows?;
    let w_scale = (cfg.m as f64).powf(2.0 / (n + 1.0));
    let f_scale = (cfg.m as f64).powf(-(n - 1.0) / (n + 1.0));
    let width: Vec<f64> = rows.iter().map(|r| r.0 * w_scale).collect();
    let facets: Vec<f64> = rows.iter().map(|r| r.1 * f_scale).collect();

    let integral = boundary_integral(
        &cfg.body,
        |bp| {
            let kappa = bp.curvature.unwrap_or(0.0).max(0.0);
            kappa.powf(n / (n + 1.0))
        },
        1e-10,
    )?;
    let shape = (n * unit_ball_volume(cfg.body.dim())).powf(-(n - 1.0) / (n + 1.0));
    let predicted_facets = beta_n(cfg.body.dim()) * shape * integral.value;
    Ok(DualRandomReport {
        width_excess: MCEstimate::from_samples(&width),
        facet_count: MCEstimate::from_samples(&facets),
        predicted_width: 2.0 * predicted_facets,
        predicted_facets,
    })
}

/// Paired estimates of the spherical dual model through both machineries.
#[derive(Debug, Clone)]
pub struct SphericalDualReport {
    /// `(U₁(K^m) − U₁(K))·m^{2/3}` through the hemisphere-intersection
    /// route (redundancy sweep + Gauss–Bonnet polygon area).
    pub by_intersection: MCEstimate,
    /// Same through the hull-then-polarize route (chart hull + ψ₂
    /// quadrature).
    pub by_polar_hull: MCEstimate,
    /// Paired per-replicate difference of the two routes.
    pub difference: MCEstimate,
    /// Replicates where `f_{n-1}(K^m) ≠ f₀(K°_m)` (must stay zero).
    pub duality_mismatches: usize,
    /// `f_{n-1}(K^m) · m^{-1/3}`.
    pub facet_count: MCEstimate,
    /// `β_n vol(K°)^{-(n-1)/(n+1)} ∫ (H^{S})^{n/(n+1)}`.
    pub predicted_facets: f64,
}

/// Spherical duality principle for `F = U₁` on a proper cap `K`:
/// `E_{μ_K} F(K^m) = E_{K°} F((K°_m)°)`. Sampling hemispheres `H⁻(x)` with
/// `x` uniform in `K°` realizes `μ_K`; the same sample is then evaluated
/// once as a halfspace intersection and once as a polarized hull, and the
/// two routes must agree replicate by replicate.
pub fn spherical_dual_transfer(
    cap: &SphericalCap,
    m: usize,
    replicates: usize,
    seed: u64,
) -> Result<SphericalDualReport, StochasticError> {
    if cap.radius >= FRAC_PI_2 || cap.radius <= 0.0 {
        return Err(StochasticError::ImproperBody);
    }
    let polar = cap.polar();
    let vol_polar = polar.volume();
    let sphere_area = 4.0 * std::f64::consts::PI;

    let rows: Vec<(f64, f64, bool, f64)> = (0..replicates as u32)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, purpose::SPHERE_DUAL, r);
            let pts: Vec<Vec3> = (0..m).map(|_| polar.sample_uniform(&mut rng)).collect();

            // route (a): non-redundant hemispheres of K^m = ∩ H⁻(xᵢ), then
            // vol((K^m)°) as a Gauss–Bonnet polygon area
            let active = nonredundant_hemispheres(&pts);
            let ordered = order_on_cap(&pts, &active);
            let vol_a = spherical_polygon_area(&ordered);
            let u1_a = (vol_polar - vol_a) / sphere_area; // U₁(K^m) − U₁(K)

            // route (b): chart hull of the sample (cap sits around −e₃, so
            // chart the antipodes), then ψ₂ quadrature
            let chart_pts: Vec<Vec2> = pts.iter().map(|p| sphere_to_chart(-p)).collect();
            let hull = convex_hull2(&chart_pts);
            let vol_b = chart_polygon_spherical_area(&hull.vertices);
            let u1_b = (vol_polar - vol_b) / sphere_area;

            let dual_ok = active.len() == hull.vertex_count();
            (u1_a, u1_b, dual_ok, active.len() as f64)
        })
        .collect();

    let scale = (m as f64).powf(2.0 / 3.0);
    let a: Vec<f64> = rows.iter().map(|r| r.0 * scale).collect();
    let b: Vec<f64> = rows.iter().map(|r| r.1 * scale).collect();
    let d: Vec<f64> = rows.iter().map(|r| (r.0 - r.1) * scale).collect();
    let mismatches = rows.iter().filter(|r| !r.2).count();
    let f_scale = (m as f64).powf(-1.0 / 3.0);
    let facets: Vec<f64> = rows.iter().map(|r| r.3 * f_scale).collect();

    // ∫_{∂K} (H^S)^{2/3}: constant cot ρ on a cap boundary of length 2π sin ρ
    let integral = TAU * cap.radius.sin() * (1.0 / cap.radius.tan()).powf(2.0 / 3.0);
    Ok(SphericalDualReport {
        by_intersection: MCEstimate::from_samples(&a),
        by_polar_hull: MCEstimate::from_samples(&b),
        difference: MCEstimate::from_samples(&d),
        duality_mismatches: mismatches,
        facet_count: MCEstimate::from_samples(&facets),
        predicted_facets: beta_n(2) * vol_polar.powf(-1.0 / 3.0) * integral,
    })
}

/// Indices of hemispheres `H⁻(xᵢ)` that carry a facet of `∩ᵢ H⁻(xᵢ)`: the
/// great circle `{z·xᵢ = 0}` contains a point with `z·xⱼ < 0` for all
/// `j ≠ i`. Each constraint is an open half-circle in the angle domain of
/// circle `i`; feasibility is a sweep over the m−1 arcs.
pub fn nonredundant_hemispheres(pts: &[Vec3]) -> Vec<usize> {
    let m = pts.len();
    let mut active = Vec::new();
    for i in 0..m {
        let xi = pts[i] / pts[i].norm();
        let trial = if xi.x.abs() < 0.9 {
            Vec3::new(1.0, 0.0, 0.0)
        } else {
            Vec3::new(0.0, 1.0, 0.0)
        };
        let a = {
            let v = trial - xi * trial.dot(&xi);
            v / v.norm()
        };
        let b = xi.cross(&a);
        let mut events: Vec<(f64, i32)> = Vec::with_capacity(2 * m);
        let mut at_zero = 0usize; // arcs already open at angle 0
        let mut feasible = true;
        for (j, p) in pts.iter().enumerate() {
            if j == i {
                continue;
            }
            let ca = a.dot(p);
            let cb = b.dot(p);
            if (ca * ca + cb * cb).sqrt() < 1e-15 {
                feasible = false; // p ∥ xᵢ: constraint excludes the circle
                break;
            }
            // z(θ)·p < 0 ⟺ θ ∈ (φ + π/2, φ + 3π/2) with φ = atan2(cb, ca)
            let phi = cb.atan2(ca);
            let lo = (phi + FRAC_PI_2).rem_euclid(TAU);
            let hi = (phi + 3.0 * FRAC_PI_2).rem_euclid(TAU);
            events.push((lo, 1));
            events.push((hi, -1));
            if hi < lo {
                at_zero += 1; // arc wraps through θ = 0
            }
        }
        if !feasible {
            continue;
        }
        events.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let need = (m - 1) as i32;
        let mut count = at_zero as i32;
        let mut ok = count == need;
        for (_, delta) in events {
            count += delta;
            if count == need {
                ok = true;
                break;
            }
        }
        if ok {
            active.push(i);
        }
    }
    active
}

/// Cyclic order of the active points around their spherical centroid (they
/// lie in an open hemisphere, so the order is well defined).
fn order_on_cap(pts: &[Vec3], active: &[usize]) -> Vec<Vec3> {
    let mut sel: Vec<Vec3> = active.iter().map(|&i| pts[i]).collect();
    if sel.len() < 3 {
        return sel;
    }
    let axis = {
        let s: Vec3 = sel.iter().sum();
        s / s.norm()
    };
    let trial = if axis.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let e1 = {
        let v = trial - axis * trial.dot(&axis);
        v / v.norm()
    };
    let e2 = axis.cross(&e1);
    sel.sort_by(|p, q| {
        f64::atan2(p.dot(&e2), p.dot(&e1)).total_cmp(&f64::atan2(q.dot(&e2), q.dot(&e1)))
    });
    sel
}

/// Spherical area of the region whose gnomonic chart image is the given
/// polygon: `∫ (1+|x̄|²)^{-3/2}` over the polygon.
fn chart_polygon_spherical_area(verts: &[Vec2]) -> f64 {
    if verts.len() < 3 {
        return 0.0;
    }
    let z = verts.iter().sum::<Vec2>() / verts.len() as f64;
    let w = WeightFn::new(|p: Vec2| (1.0 + p.norm_squared()).powf(-1.5));
    polygon_measure_radial(verts, z, &w).value
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn disk_cfg(m: usize, replicates: usize, seed: u64) -> SamplerConfig {
        SamplerConfig {
            body: ConvexBody::disk(1.0),
            phi: WeightFn::uniform(),
            m,
            replicates,
            seed,
        }
    }

    #[test]
    fn beta_2_value() {
        // (2/3)·Γ(5/3)·(3/2)^{2/3}
        assert_relative_eq!(beta_n(2), 0.788620652554583, epsilon = 1e-12);
    }

    #[test]
    fn sampler_mean_is_center() {
        let sq = ConvexBody::square(2.0);
        let mut rng = stream(7, purpose::TEST, 0);
        let pts = sample_points(&sq, &WeightFn::uniform(), 1.0, 40_000, &mut rng).unwrap();
        let mean = pts.iter().sum::<Vec2>() / pts.len() as f64;
        // per-axis variance 1/3 on [−1,1]
        let se = (1.0f64 / 3.0 / pts.len() as f64).sqrt();
        assert!(mean.x.abs() < 3.0 * se, "mean.x = {}", mean.x);
        assert!(mean.y.abs() < 3.0 * se, "mean.y = {}", mean.y);
    }

    #[test]
    fn sampler_radial_law_uniform_disk() {
        let d = ConvexBody::disk(1.0);
        let mut rng = stream(11, purpose::TEST, 0);
        let pts = sample_points(&d, &WeightFn::uniform(), 1.0, 20_000, &mut rng).unwrap();
        for r in [0.3, 0.6, 0.9] {
            let frac = pts.iter().filter(|p| p.norm() <= r).count() as f64 / pts.len() as f64;
            let p = r * r;
            let se = (p * (1.0 - p) / pts.len() as f64).sqrt();
            assert!(
                (frac - p).abs() < 3.0 * se + 1e-9,
                "r={r}: frac={frac}, expected {p}"
            );
        }
    }

    #[test]
    fn sampler_weighted_radial_ks() {
        // φ = (1+|x|²)^{-3/2} on the unit disk; radial CDF by quadrature
        let d = ConvexBody::disk(1.0);
        let phi = WeightFn::new(|p: Vec2| (1.0 + p.norm_squared()).powf(-1.5));
        let mut rng = stream(13, purpose::TEST, 0);
        let n = 4000;
        let pts = sample_points(&d, &phi, 1.0, n, &mut rng).unwrap();
        let density = |r: f64| TAU * r * (1.0 + r * r).powf(-1.5);
        let total = numeric::integrate(density, 0.0, 1.0, 1e-12, 0.0).unwrap().value;
        let cdf = |r: f64| {
            if r <= 0.0 {
                0.0
            } else if r >= 1.0 {
                1.0
            } else {
                numeric::integrate(density, 0.0, r, 1e-12, 0.0).unwrap().value / total
            }
        };
        let mut radii: Vec<f64> = pts.iter().map(|p| p.norm()).collect();
        let dstat = numeric::ks_statistic(&mut radii, cdf);
        // 1% critical value 1.628/√n
        assert!(
            dstat < 1.628 / (n as f64).sqrt(),
            "KS statistic {dstat} too large"
        );
    }

    #[test]
    fn envelope_violation_reported() {
        let d = ConvexBody::disk(1.0);
        let phi = WeightFn::new(|p: Vec2| 1.0 + p.x.abs());
        let mut rng = stream(5, purpose::TEST, 0);
        let res = sample_points(&d, &phi, 1.0, 1000, &mut rng);
        assert!(matches!(res, Err(StochasticError::EnvelopeExceeded { .. })));
    }

    #[test]
    fn determinism_same_seed_same_bits() {
        let cfg = disk_cfg(64, 8, 99);
        let a = random_polytope_deficit(&cfg, &WeightFn::uniform()).unwrap();
        let b = random_polytope_deficit(&cfg, &WeightFn::uniform()).unwrap();
        assert_eq!(a.deficit.mean.to_bits(), b.deficit.mean.to_bits());
        assert_eq!(a.deficit.std_error.to_bits(), b.deficit.std_error.to_bits());
    }

    #[test]
    fn triangle_three_point_hull_area() {
        // E area(hull of 3 uniform points) = area(T)/12
        let tri = ConvexBody::polygon(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ]);
        let cfg = SamplerConfig {
            body: tri,
            phi: WeightFn::uniform(),
            m: 3,
            replicates: 40_000,
            seed: 21,
        };
        let rep = random_polytope_deficit(&cfg, &WeightFn::uniform()).unwrap();
        let area = 0.5;
        let expected_deficit = area - area / 12.0;
        assert!(
            (rep.deficit.mean - expected_deficit).abs() < 3.0 * rep.deficit.std_error,
            "deficit {} ± {} vs {}",
            rep.deficit.mean,
            rep.deficit.std_error,
            expected_deficit
        );
    }

    #[test]
    fn deficit_scales_linearly_in_psi() {
        let cfg = disk_cfg(128, 16, 3);
        let a = random_polytope_deficit(&cfg, &WeightFn::uniform()).unwrap();
        let b = random_polytope_deficit(&cfg, &WeightFn::constant(2.5)).unwrap();
        assert_relative_eq!(b.deficit.mean, 2.5 * a.deficit.mean, max_relative = 1e-12);
    }

    #[test]
    fn efron_minimal_m_exact() {
        // m = 3 in the plane: the hull of 3 points has 3 vertices a.s.
        let cfg = disk_cfg(3, 200, 17);
        let rep = efron_vertex_count(&cfg).unwrap();
        assert_relative_eq!(rep.direct.mean, 3.0, epsilon = 1e-12);
        assert_eq!(rep.direct.std_error, 0.0);
    }

    #[test]
    fn efron_identity_within_3_sigma() {
        let cfg = disk_cfg(100, 400, 23);
        let rep = efron_vertex_count(&cfg).unwrap();
        assert!(
            rep.difference.mean.abs() <= 3.0 * rep.difference.std_error + 1e-9,
            "difference {} ± {}",
            rep.difference.mean,
            rep.difference.std_error
        );
    }

    #[test]
    fn sampled_halfspaces_contain_body() {
        let e = ConvexBody::ellipse(1.7, 0.6);
        let mut rng = stream(31, purpose::TEST, 1);
        for _ in 0..500 {
            let (u, t) = sample_halfspace(&e, &mut rng);
            assert!(e.support(u) <= t + 1e-12);
            assert!(t <= e.support(u) + 1.0 + 1e-12);
        }
    }

    #[test]
    fn halfspace_offset_uniform_ks() {
        let d = ConvexBody::disk(1.0);
        let mut rng = stream(37, purpose::TEST, 2);
        let n = 4000;
        let mut gaps: Vec<f64> = (0..n)
            .map(|_| {
                let (u, t) = sample_halfspace(&d, &mut rng);
                t - d.support(u)
            })
            .collect();
        let dstat = numeric::ks_statistic(&mut gaps, |x| x.clamp(0.0, 1.0));
        assert!(dstat < 1.628 / (n as f64).sqrt());
    }

    #[test]
    fn mean_width_disk_exact() {
        let d = ConvexBody::disk(1.0);
        assert_relative_eq!(mean_width2(|u| d.support(u), 512), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn dual_facet_count_bounded_by_m() {
        let cfg = DualSamplerConfig {
            body: ConvexBody::disk(1.0),
            m: 64,
            replicates: 20,
            seed: 7,
        };
        let rep = dual_random_polyhedron(&cfg).unwrap();
        let scale = (cfg.m as f64).powf(-1.0 / 3.0);
        assert!(rep.facet_count.mean / scale <= cfg.m as f64 + 1e-9);
        assert!(rep.width_excess.mean > 0.0);
        assert_relative_eq!(
            rep.predicted_facets,
            beta_n(2) * (2.0 * PI).powf(-1.0 / 3.0) * 2.0 * PI,
            max_relative = 1e-9
        );
    }

    #[test]
    fn nonredundant_matches_hull_small_cases() {
        let polar = SphericalCap::new(Vec3::new(0.0, 0.0, -1.0), 0.5);
        for r in 0..20u32 {
            let mut rng = stream(41, purpose::TEST, r);
            let pts: Vec<Vec3> = (0..12).map(|_| polar.sample_uniform(&mut rng)).collect();
            let active = nonredundant_hemispheres(&pts);
            let chart: Vec<Vec2> = pts.iter().map(|p| sphere_to_chart(-p)).collect();
            let hull = convex_hull2(&chart);
            assert_eq!(active.len(), hull.vertex_count(), "replicate {r}");
        }
    }

    #[test]
    fn spherical_dual_routes_agree() {
        let cap = SphericalCap::new(Vec3::new(0.0, 0.0, 1.0), 0.8);
        let rep = spherical_dual_transfer(&cap, 64, 60, 51).unwrap();
        assert_eq!(rep.duality_mismatches, 0);
        assert!(
            rep.difference.mean.abs() <= 3.0 * rep.difference.std_error + 1e-9,
            "difference {} ± {}",
            rep.difference.mean,
            rep.difference.std_error
        );
        // facet count of K^m never exceeds m
        assert!(rep.facet_count.mean * (64f64).powf(1.0 / 3.0) <= 64.0);
    }

    #[test]
    fn improper_cap_rejected() {
        let cap = SphericalCap::new(Vec3::new(0.0, 0.0, 1.0), FRAC_PI_2 + 0.1);
        assert!(matches!(
            spherical_dual_transfer(&cap, 16, 4, 1),
            Err(StochasticError::ImproperBody)
        ));
    }
}
