//! Spherical and hyperbolic geometry through gnomonic charts.
//!
//! The gnomonic projection maps geodesics to straight lines, so intrinsic
//! convexity matches Euclidean convexity of the chart image and the whole
//! Euclidean engine applies verbatim: intrinsic volume is the chart
//! integral of the Jacobian density `ψ_n` and intrinsic curvature is a
//! pointwise transfer of the Euclidean one.
//!
//! Spherical chart (upper hemisphere around `e₃`):
//! `g(x) = x/(x·e₃) − e₃`, density `(1+|x̄|²)^{-(n+1)/2}`.
//! Hyperbolic chart (hyperboloid model, Lorentz product `∘`):
//! `g(x) = x/(x∘e₃) + e₃`, density `(1−|x̄|²)^{-(n+1)/2}`, image in the
//! open unit ball (Beltrami–Cayley–Klein model).

use crate::bodies::{
    boundary_integral, convex_hull2, measure, polygon_measure_radial, ConvexBody, Vec2, Vec3,
    WeightFn,
};
use crate::floating::{
    alpha_n, check_floating_limit, FloatingError, FloatingLimitReport, FloatingOptions,
};
use crate::numeric::Estimate;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpacesError {
    #[error("point outside the chart domain")]
    OutOfChart,
    #[error("model body violates the chart margin (|x̄| ≤ {max_radius})")]
    ImproperBody { max_radius: f64 },
    #[error(transparent)]
    Body(#[from] crate::bodies::BodyError),
    #[error(transparent)]
    Floating(#[from] FloatingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    Spherical,
    Hyperbolic,
}

/// A gnomonic chart of `S²` or `H²` with its Jacobian density.
#[derive(Debug, Clone, Copy)]
pub struct GeometryChart {
    pub kind: ChartKind,
}

/// Lorentz product `x∘y = x₁y₁ + x₂y₂ − x₃y₃`.
#[inline]
pub fn lorentz(x: Vec3, y: Vec3) -> f64 {
    x.x * y.x + x.y * y.y - x.z * y.z
}

/// Spherical gnomonic projection of an upper-hemisphere point.
pub fn sphere_to_chart(x: Vec3) -> Vec2 {
    Vec2::new(x.x / x.z, x.y / x.z)
}

/// Inverse of [`sphere_to_chart`].
pub fn chart_to_sphere(p: Vec2) -> Vec3 {
    Vec3::new(p.x, p.y, 1.0) / (1.0 + p.norm_squared()).sqrt()
}

impl GeometryChart {
    pub fn spherical() -> Self {
        GeometryChart {
            kind: ChartKind::Spherical,
        }
    }

    pub fn hyperbolic() -> Self {
        GeometryChart {
            kind: ChartKind::Hyperbolic,
        }
    }

    /// Jacobian density `ψ_n` of the chart at a chart point (n = 2).
    pub fn density(&self, p: Vec2) -> f64 {
        match self.kind {
            ChartKind::Spherical => (1.0 + p.norm_squared()).powf(-1.5),
            ChartKind::Hyperbolic => (1.0 - p.norm_squared()).powf(-1.5),
        }
    }

    /// The density as a [`WeightFn`] with bounds valid inside chart radius
    /// `r_max`.
    pub fn density_weight(&self, r_max: f64) -> WeightFn {
        match self.kind {
            ChartKind::Spherical => {
                WeightFn::with_bounds(|p: Vec2| (1.0 + p.norm_squared()).powf(-1.5),
                    (1.0 + r_max * r_max).powf(-1.5),
                    1.0)
            }
            ChartKind::Hyperbolic => {
                let hi = (1.0 - r_max * r_max).powf(-1.5);
                WeightFn::with_bounds(|p: Vec2| (1.0 - p.norm_squared()).powf(-1.5), 1.0, hi)
            }
        }
    }

    /// Chart radius allowed by the model margin: `x·e₃ ≥ 0.05` on the
    /// sphere, `|x̄| ≤ 0.99` in the Klein ball.
    pub fn max_chart_radius(&self) -> f64 {
        match self.kind {
            ChartKind::Spherical => (1.0 / (0.05f64 * 0.05) - 1.0).sqrt(),
            ChartKind::Hyperbolic => 0.99,
        }
    }

    /// Gnomonic projection `g(x)` of a model point.
    pub fn to_chart(&self, x: Vec3) -> Result<Vec2, SpacesError> {
        match self.kind {
            ChartKind::Spherical => {
                if x.z <= 0.0 {
                    return Err(SpacesError::OutOfChart);
                }
                // x/(x·e₃) − e₃
                Ok(sphere_to_chart(x))
            }
            ChartKind::Hyperbolic => {
                if x.z <= 0.0 || lorentz(x, x) > -0.5 {
                    return Err(SpacesError::OutOfChart);
                }
                // x/(x∘e₃) + e₃ with x∘e₃ = −x₃
                let s = lorentz(x, Vec3::new(0.0, 0.0, 1.0));
                Ok(Vec2::new(x.x / s, x.y / s))
            }
        }
    }

    /// Inverse projection back to the model surface.
    pub fn from_chart(&self, p: Vec2) -> Result<Vec3, SpacesError> {
        match self.kind {
            ChartKind::Spherical => Ok(chart_to_sphere(p)),
            ChartKind::Hyperbolic => {
                let r2 = p.norm_squared();
                if r2 >= 1.0 {
                    return Err(SpacesError::OutOfChart);
                }
                // the exact inverse of the implemented g: (e₃ − p)/√(1−|p|²)
                let s = (1.0 - r2).sqrt();
                Ok(Vec3::new(-p.x / s, -p.y / s, 1.0 / s))
            }
        }
    }

    /// Geodesic distance between two model points.
    pub fn distance(&self, x: Vec3, y: Vec3) -> f64 {
        match self.kind {
            ChartKind::Spherical => x.dot(&y).clamp(-1.0, 1.0).acos(),
            ChartKind::Hyperbolic => (-lorentz(x, y)).max(1.0).acosh(),
        }
    }
}

/// An intrinsic convex body carried by its chart image.
#[derive(Clone)]
pub struct ModelBody {
    pub chart: GeometryChart,
    pub chart_body: ConvexBody,
}

impl ModelBody {
    /// Wrap a chart body, enforcing the chart margin on its support.
    pub fn new(chart: GeometryChart, chart_body: ConvexBody) -> Result<Self, SpacesError> {
        let max_radius = chart.max_chart_radius();
        let worst = crate::bodies::uniform_directions(256)
            .into_iter()
            .map(|u| chart_body.support(u))
            .fold(0.0f64, f64::max);
        if worst > max_radius {
            return Err(SpacesError::ImproperBody { max_radius });
        }
        Ok(ModelBody { chart, chart_body })
    }

    /// Spherical cap of geodesic radius `rho` about the pole `e₃`: chart
    /// image is the disk of radius `tan ρ`.
    pub fn spherical_cap(rho: f64) -> Result<Self, SpacesError> {
        if !(rho > 0.0 && rho < FRAC_PI_2) {
            return Err(SpacesError::ImproperBody {
                max_radius: GeometryChart::spherical().max_chart_radius(),
            });
        }
        ModelBody::new(GeometryChart::spherical(), ConvexBody::disk(rho.tan()))
    }

    /// Hyperbolic disk of geodesic radius `r` about `e₃`: chart image is
    /// the disk of radius `tanh r`.
    pub fn hyperbolic_disk(r: f64) -> Result<Self, SpacesError> {
        ModelBody::new(GeometryChart::hyperbolic(), ConvexBody::disk(r.tanh()))
    }

    pub fn density_weight(&self) -> WeightFn {
        let r_max = crate::bodies::uniform_directions(256)
            .into_iter()
            .map(|u| self.chart_body.support(u))
            .fold(0.0f64, f64::max);
        self.chart.density_weight(r_max)
    }

    /// Intrinsic volume `vol_n` of the body: chart integral of `ψ_n`.
    pub fn volume(&self) -> Result<Estimate, SpacesError> {
        Ok(measure(&self.chart_body, &self.density_weight(), 1e-9)?)
    }

    /// Intrinsic Gauss–Kronecker curvature at the boundary point with
    /// chart parameter `theta`:
    /// `H^{S} = H·((1+|x̄|²)/(1+(x̄·n)²))^{3/2}` and
    /// `H^{H} = H·((1−|x̄|²)/(1−(x̄·n)²))^{3/2}`.
    pub fn curvature(&self, theta: f64) -> Result<f64, SpacesError> {
        let (x, normal, kappa) = self.chart_body.curvature(theta)?;
        let xn = x.dot(&normal);
        let factor = match self.chart.kind {
            ChartKind::Spherical => (1.0 + x.norm_squared()) / (1.0 + xn * xn),
            ChartKind::Hyperbolic => (1.0 - x.norm_squared()) / (1.0 - xn * xn),
        };
        Ok(kappa * factor.powf(1.5))
    }

    /// The floating area `∫_{∂K} (H^{model})^{1/(n+1)} dx`, computed in the
    /// chart as `∫_{∂K̄} H^{1/(n+1)} (1±|x̄|²)^{∓(n-1)/2} dx̄`.
    pub fn floating_area(&self) -> Result<Estimate, SpacesError> {
        let kind = self.chart.kind;
        let est = boundary_integral(
            &self.chart_body,
            |bp| {
                let kappa = bp.curvature.unwrap_or(0.0).max(0.0);
                let r2 = bp.x.norm_squared();
                let dens = match kind {
                    ChartKind::Spherical => (1.0 + r2).powf(-0.5),
                    ChartKind::Hyperbolic => (1.0 - r2).powf(-0.5),
                };
                kappa.powf(1.0 / 3.0) * dens
            },
            1e-9,
        )?;
        Ok(est)
    }

    /// Floating-body convergence study with `φ = ψ = ψ_n`; since
    /// `g(K_δ) = g(K)^{ψ_n}_δ`, the chart pipeline computes the intrinsic
    /// floating body exactly. The predicted limit is
    /// `α_n · floating_area`.
    pub fn floating_body_limit(
        &self,
        deltas: &[f64],
        opts: &FloatingOptions,
    ) -> Result<FloatingLimitReport, SpacesError> {
        let w = self.density_weight();
        let mut rep = check_floating_limit(&self.chart_body, &w, &w, deltas, opts)?;
        // same number through the curvature-transfer identity; kept as the
        // reported prediction
        rep.predicted = alpha_n(2) * self.floating_area()?.value;
        Ok(rep)
    }
}

/// Monte Carlo report for intrinsic random polytopes.
#[derive(Debug, Clone)]
pub struct ModelRandomReport {
    /// `(vol(K) − vol(K_m)) · m^{2/(n+1)}`.
    pub normalized_deficit: crate::stochastic::MCEstimate,
    /// `f₀(K_m) · m^{-(n-1)/(n+1)}`.
    pub normalized_vertices: crate::stochastic::MCEstimate,
    /// `β_n vol(K)^{2/(n+1)} · floating_area`.
    pub predicted_deficit: f64,
    /// `β_n vol(K)^{-(n-1)/(n+1)} · floating_area`.
    pub predicted_vertices: f64,
}

/// Hulls of `m` points drawn from the intrinsic uniform distribution
/// (chart density `ψ_n/Ψ_n(K̄)`); gnomonic charts map intrinsic hulls to
/// Euclidean hulls, so the deficit is measured chart-side with `ψ_n`.
pub fn model_random_polytope(
    body: &ModelBody,
    m: usize,
    replicates: usize,
    seed: u64,
) -> Result<ModelRandomReport, SpacesError> {
    use crate::stochastic::{purpose, sample_points, stream, MCEstimate};
    let w = body.density_weight();
    let envelope = w.envelope(&body.chart_body);
    let vol = body.volume()?.value;
    let rows: Vec<(f64, f64)> = (0..replicates as u32)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, purpose::MODEL_POINTS, r);
            let pts = sample_points(&body.chart_body, &w, envelope, m, &mut rng)
                .expect("envelope covers the density");
            let hull = convex_hull2(&pts);
            let hull_vol = if hull.vertex_count() < 3 {
                0.0
            } else {
                let z = hull.vertices.iter().sum::<Vec2>() / hull.vertex_count() as f64;
                polygon_measure_radial(&hull.vertices, z, &w).value
            };
            (vol - hull_vol, hull.vertex_count() as f64)
        })
        .collect();
    let d_scale = (m as f64).powf(2.0 / 3.0);
    let v_scale = (m as f64).powf(-1.0 / 3.0);
    let deficits: Vec<f64> = rows.iter().map(|r| r.0 * d_scale).collect();
    let verts: Vec<f64> = rows.iter().map(|r| r.1 * v_scale).collect();
    let fa = body.floating_area()?.value;
    let beta = crate::stochastic::beta_n(2);
    Ok(ModelRandomReport {
        normalized_deficit: MCEstimate::from_samples(&deficits),
        normalized_vertices: MCEstimate::from_samples(&verts),
        predicted_deficit: beta * vol.powf(2.0 / 3.0) * fa,
        predicted_vertices: beta * vol.powf(-1.0 / 3.0) * fa,
    })
}

/// A spherical cap `{x ∈ S² : x·axis ≥ cos ρ}`.
#[derive(Debug, Clone, Copy)]
pub struct SphericalCap {
    pub axis: Vec3,
    pub radius: f64,
}

impl SphericalCap {
    pub fn new(axis: Vec3, radius: f64) -> Self {
        SphericalCap {
            axis: axis / axis.norm(),
            radius,
        }
    }

    /// Polar body: the cap of radius `π/2 − ρ` about the antipode.
    pub fn polar(&self) -> SphericalCap {
        SphericalCap {
            axis: -self.axis,
            radius: FRAC_PI_2 - self.radius,
        }
    }

    /// Spherical area `2π(1 − cos ρ)`.
    pub fn volume(&self) -> f64 {
        TAU * (1.0 - self.radius.cos())
    }

    pub fn contains(&self, x: Vec3, tol: f64) -> bool {
        x.dot(&self.axis) >= self.radius.cos() - tol
    }

    /// Uniform draw w.r.t. spherical area (height is uniform on a sphere).
    pub fn sample_uniform(&self, rng: &mut ChaCha8Rng) -> Vec3 {
        let z = rng.gen_range(self.radius.cos()..1.0);
        let phi = rng.gen_range(0.0..TAU);
        let r = (1.0 - z * z).sqrt();
        let (e1, e2) = orthonormal_frame(self.axis);
        e1 * (r * phi.cos()) + e2 * (r * phi.sin()) + self.axis * z
    }
}

fn orthonormal_frame(axis: Vec3) -> (Vec3, Vec3) {
    let trial = if axis.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let e1 = {
        let v = trial - axis * trial.dot(&axis);
        v / v.norm()
    };
    (e1, axis.cross(&e1))
}

/// Area of a convex spherical polygon (vertices in cyclic order, geodesic
/// sides) by the angle excess `Σ interior angles − (k−2)π`.
pub fn spherical_polygon_area(verts: &[Vec3]) -> f64 {
    let k = verts.len();
    if k < 3 {
        return 0.0;
    }
    let mut excess = -(k as f64 - 2.0) * PI;
    for i in 0..k {
        let v = verts[i];
        let u = verts[(i + k - 1) % k];
        let w = verts[(i + 1) % k];
        let tu = {
            let t = u - v * u.dot(&v);
            t / t.norm()
        };
        let tw = {
            let t = w - v * w.dot(&v);
            t / t.norm()
        };
        excess += tu.dot(&tw).clamp(-1.0, 1.0).acos();
    }
    excess
}
