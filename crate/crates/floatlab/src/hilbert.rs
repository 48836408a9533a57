//! Hilbert geometries on the interior of a convex body `C`.
//!
//! The distance is half the log cross ratio along the chord through two
//! points; it is induced by the Finsler norm `‖v‖_x = (1/t⁺ + 1/t⁻)/2`
//! whose unit ball `I_x` is the harmonic symmetrization of `C` at `x`.
//! Volume densities are ratios of the Finsler ball (Busemann) or its polar
//! (Holmes–Thompson) against the Euclidean unit ball; both feed the
//! floating area `Ω_C` and the centro-affine limit of `Ω_C(λC)` as `λ ↑ 1`.

use crate::bodies::{boundary_integral, ConvexBody, Mat2, Vec2};
use crate::floating::unit_ball_volume;
use crate::numeric::{self, Estimate};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HilbertError {
    #[error("ambient body must contain the origin in its interior")]
    OriginNotInterior,
    #[error("point ({0}, {1}) is not interior to the ambient body")]
    PointOutsideDomain(f64, f64),
    #[error(transparent)]
    Body(#[from] crate::bodies::BodyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeFlavor {
    Busemann,
    HolmesThompson,
}

/// A Hilbert geometry `(C, d_C)` with a chosen volume flavor.
#[derive(Clone)]
pub struct HilbertGeometry {
    pub ambient: ConvexBody,
    pub flavor: VolumeFlavor,
}

impl HilbertGeometry {
    pub fn new(ambient: ConvexBody, flavor: VolumeFlavor) -> Result<Self, HilbertError> {
        // origin interior ⟺ h_C(u) > 0 in every direction
        let ok = crate::bodies::uniform_directions(128)
            .into_iter()
            .all(|u| ambient.support(u) > 1e-12);
        if !ok {
            return Err(HilbertError::OriginNotInterior);
        }
        Ok(HilbertGeometry { ambient, flavor })
    }

    fn assert_interior(&self, x: Vec2) {
        assert!(
            self.ambient.contains(x, -1e-12),
            "point ({}, {}) outside the Hilbert domain",
            x.x,
            x.y
        );
    }

    /// Chord times `(t⁺, t⁻)` with `x ± t^± v ∈ ∂C`; scales like `1/|v|`.
    pub fn chord(&self, x: Vec2, v: Vec2) -> (f64, f64) {
        self.assert_interior(x);
        let (enter, exit) = self
            .ambient
            .chord_with_seed(x, v / v.norm(), 0.0)
            .expect("interior point: the line meets the body");
        let vn = v.norm();
        (exit / vn, -enter / vn)
    }

    /// Hilbert distance `d_C(x,y) = ½ log [p,x,y,q]` with `p,x,y,q` in
    /// order along the chord.
    pub fn distance(&self, x: Vec2, y: Vec2) -> f64 {
        self.assert_interior(x);
        self.assert_interior(y);
        let l = (y - x).norm();
        if l == 0.0 {
            return 0.0;
        }
        let d = (y - x) / l;
        let (enter, exit) = self
            .ambient
            .chord_with_seed(x, d, 0.0)
            .expect("interior point: the line meets the body");
        // p = x + enter·d (enter < 0), q = x + exit·d (exit > l)
        let cross_ratio = ((l - enter) / (-enter)) * (exit / (exit - l));
        0.5 * cross_ratio.ln()
    }

    /// Finsler norm `‖v‖_x = (1/t⁺ + 1/t⁻)/2`.
    pub fn finsler_norm(&self, x: Vec2, v: Vec2) -> f64 {
        let (tp, tm) = self.chord(x, v);
        0.5 * (1.0 / tp + 1.0 / tm)
    }

    /// Support value of `I_x` through the polar–difference–polar chain:
    /// `h_{I_x}(u) = gauge_{D((C−x)*)}(u) = sup_w (u·w)/h_{D((C−x)*)}(w)`,
    /// where `h_{D((C−x)*)}(w) = (gauge_{C−x}(w) + gauge_{C−x}(−w))/2`.
    pub fn finsler_support_polar_chain(&self, x: Vec2, u: Vec2) -> f64 {
        let objective = |ang: f64| {
            let w = Vec2::new(ang.cos(), ang.sin());
            let (tp, tm) = self.chord(x, w);
            // gauge of C−x at ±w is 1/t±
            let h_dp = 0.5 * (1.0 / tp + 1.0 / tm);
            u.dot(&w) / h_dp
        };
        let n = 128;
        let mut best = (f64::NEG_INFINITY, 0.0);
        for j in 0..n {
            let ang = std::f64::consts::TAU * j as f64 / n as f64;
            let v = objective(ang);
            if v > best.0 {
                best = (v, ang);
            }
        }
        let w = std::f64::consts::TAU / n as f64;
        let (_, val) = numeric::golden_max(objective, best.1 - w, best.1 + w, 1e-12);
        val.max(best.0)
    }

    /// The Finsler unit ball `I_x = (D((C−x)*))*` as a radial convex body;
    /// its two constructions (radial boundary at `1/‖v‖_x` and the
    /// polar-chain support) are cross-checked at build time.
    pub fn finsler_unit_ball(&self, x: Vec2) -> FinslerBall {
        self.assert_interior(x);
        let geom = self.clone();
        let ball = ConvexBody::radial(move |theta: f64| {
            1.0 / geom.finsler_norm(x, Vec2::new(theta.cos(), theta.sin()))
        });
        for j in 0..8 {
            let ang = 0.3 + std::f64::consts::TAU * j as f64 / 8.0;
            let u = Vec2::new(ang.cos(), ang.sin());
            let radial_route = ball.support(u);
            let chain_route = self.finsler_support_polar_chain(x, u);
            assert!(
                (radial_route - chain_route).abs() <= 1e-9 * radial_route.abs().max(1.0),
                "Finsler ball constructions disagree: {radial_route} vs {chain_route}"
            );
        }
        FinslerBall { base: x, ball }
    }

    /// Busemann density `v_n/λ_n(I_x)`.
    pub fn busemann_density(&self, x: Vec2) -> f64 {
        self.assert_interior(x);
        let area = 0.5
            * numeric::integrate_periodic(
                |theta| {
                    let rho = 1.0 / self.finsler_norm(x, Vec2::new(theta.cos(), theta.sin()));
                    rho * rho
                },
                1e-10,
                0.0,
            )
            .value;
        unit_ball_volume(2) / area
    }

    /// Holmes–Thompson density `λ_n((I_x)*)/v_n`; the polar's radial
    /// function is the reciprocal support of `I_x`.
    pub fn holmes_thompson_density(&self, x: Vec2) -> f64 {
        self.assert_interior(x);
        let area = 0.5
            * numeric::integrate_periodic(
                |theta| {
                    let h =
                        self.finsler_support_polar_chain(x, Vec2::new(theta.cos(), theta.sin()));
                    1.0 / (h * h)
                },
                1e-9,
                0.0,
            )
            .value;
        area / unit_ball_volume(2)
    }

    /// Flavor-selected volume density `σ_C(x)`.
    pub fn volume_density(&self, x: Vec2) -> f64 {
        match self.flavor {
            VolumeFlavor::Busemann => self.busemann_density(x),
            VolumeFlavor::HolmesThompson => self.holmes_thompson_density(x),
        }
    }

    /// Hilbert floating area
    /// `Ω_C(K) = ∫_{∂K} H^{1/(n+1)} σ_C^{(n-1)/(n+1)} dx` for `K ⊂ int C`.
    pub fn floating_area(&self, body: &ConvexBody) -> Result<Estimate, HilbertError> {
        let est = boundary_integral(
            body,
            |bp| {
                let kappa = bp.curvature.unwrap_or(0.0).max(0.0);
                kappa.powf(1.0 / 3.0) * self.volume_density(bp.x).powf(1.0 / 3.0)
            },
            1e-7,
        )?;
        Ok(est)
    }
}

/// Finsler unit ball at a base point, as a genuine convex body.
pub struct FinslerBall {
    pub base: Vec2,
    pub ball: ConvexBody,
}

/// Centro-affine surface area
/// `Ω_n(C) = ∫_{∂C} H^{1/2}/(x·n_C(x))^{(n-1)/2} dx` (origin interior).
pub fn centroaffine_surface_area(c: &ConvexBody) -> Result<Estimate, HilbertError> {
    let est = boundary_integral(
        c,
        |bp| {
            let kappa = bp.curvature.unwrap_or(0.0).max(0.0);
            kappa.sqrt() / bp.x.dot(&bp.normal).sqrt()
        },
        1e-10,
    )?;
    Ok(est)
}

#[derive(Debug, Clone)]
pub struct OmegaLimitRow {
    pub lambda: f64,
    pub omega: f64,
    /// `2^{(n-1)/2} · Ω_C(λC) · (1−λ)^{(n-1)/2}`.
    pub scaled: f64,
}

#[derive(Debug, Clone)]
pub struct OmegaLimitReport {
    pub rows: Vec<OmegaLimitRow>,
    /// `a` from the fit `scaled ≈ a + b(1−λ)^{1/2}`.
    pub extrapolated: f64,
    /// `Ω_n(C)`.
    pub predicted: f64,
}

/// Centro-affine limit study: `2^{(n-1)/2} Ω_C(λC)(1−λ)^{(n-1)/2} → Ω_n(C)`
/// as `λ ↑ 1` for the Busemann floating area.
pub fn omegacp_limit(
    geom: &HilbertGeometry,
    lambdas: &[f64],
) -> Result<OmegaLimitReport, HilbertError> {
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        assert!(lambda > 0.0 && lambda < 1.0, "λ must lie in (0,1)");
        let scaled_body = ConvexBody::linear_image(
            Mat2::new(lambda, 0.0, 0.0, lambda),
            geom.ambient.clone(),
        );
        let omega = geom.floating_area(&scaled_body)?.value;
        rows.push(OmegaLimitRow {
            lambda,
            omega,
            scaled: 2f64.sqrt() * omega * (1.0 - lambda).sqrt(),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| 1.0 - r.lambda).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.scaled).collect();
    let (extrapolated, _) = numeric::fit_offset_power(&xs, &ys, 0.5);
    let predicted = centroaffine_surface_area(&geom.ambient)?.value;
    Ok(OmegaLimitReport {
        rows,
        extrapolated,
        predicted,
    })
}

/// Pointwise density blow-up check at a boundary parameter:
/// returns `(σ_C(λx)(1−λ)^{(n+1)/2}, H^{1/2}/(2 x·n)^{(n+1)/2})`.
pub fn berck_pointwise(
    geom: &HilbertGeometry,
    theta: f64,
    lambda: f64,
) -> Result<(f64, f64), HilbertError> {
    let (x, normal, kappa) = geom.ambient.curvature(theta)?;
    let lhs = geom.volume_density(x * lambda) * (1.0 - lambda).powf(1.5);
    let rhs = kappa.sqrt() / (2.0 * x.dot(&normal)).powf(1.5);
    Ok((lhs, rhs))
}

/// Klein-model hyperbolic distance in the unit disk,
/// `cosh d = (1 − x·y)/√((1−|x|²)(1−|y|²))`; test oracle for the
/// ellipsoid isometry.
pub fn klein_distance(x: Vec2, y: Vec2) -> f64 {
    let num = 1.0 - x.dot(&y);
    let den = ((1.0 - x.norm_squared()) * (1.0 - y.norm_squared())).sqrt();
    (num / den).max(1.0).acosh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::uniform_directions;
    use approx::assert_relative_eq;
    use rand::Rng;
    use std::f64::consts::PI;

    fn disk_geom(flavor: VolumeFlavor) -> HilbertGeometry {
        HilbertGeometry::new(ConvexBody::disk(1.0), flavor).unwrap()
    }

    #[test]
    fn chord_examples() {
        let g = disk_geom(VolumeFlavor::Busemann);
        let (tp, tm) = g.chord(Vec2::zeros(), Vec2::new(0.3, 0.4));
        // unit disk from the center: t± = 1/|v| = 2
        assert_relative_eq!(tp, 2.0, epsilon = 1e-10);
        assert_relative_eq!(tm, 2.0, epsilon = 1e-10);
        let (tp, tm) = g.chord(Vec2::new(0.5, 0.0), Vec2::new(1.0, 0.0));
        assert_relative_eq!(tp, 0.5, epsilon = 1e-12);
        assert_relative_eq!(tm, 1.5, epsilon = 1e-12);
        // square [−1,1]², diagonal through the center
        let sq = HilbertGeometry::new(ConvexBody::square(2.0), VolumeFlavor::Busemann).unwrap();
        let diag = Vec2::new(1.0, 1.0) / 2f64.sqrt();
        let (tp, tm) = sq.chord(Vec2::zeros(), diag);
        assert_relative_eq!(tp, 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(tm, 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn distance_half_log_three() {
        let g = disk_geom(VolumeFlavor::Busemann);
        let d = g.distance(Vec2::zeros(), Vec2::new(0.5, 0.0));
        assert_relative_eq!(d, 0.5 * 3f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(d, 0.549306, epsilon = 1e-6);
    }

    #[test]
    fn distance_symmetric_and_zero_on_diagonal() {
        let g = disk_geom(VolumeFlavor::Busemann);
        let mut rng = crate::stochastic::stream(3, 9, 7);
        for _ in 0..200 {
            let x = Vec2::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
            let y = Vec2::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
            assert_relative_eq!(g.distance(x, y), g.distance(y, x), epsilon = 1e-11);
        }
        assert_eq!(g.distance(Vec2::new(0.2, 0.1), Vec2::new(0.2, 0.1)), 0.0);
    }

    #[test]
    fn ellipse_hilbert_is_klein_after_normalization() {
        // d_C on an ellipse equals the Klein distance of the disk preimages
        let a = Mat2::new(2.0, 0.0, 0.0, 1.0);
        let g = HilbertGeometry::new(
            ConvexBody::linear_image(a, ConvexBody::disk(1.0)),
            VolumeFlavor::Busemann,
        )
        .unwrap();
        let mut rng = crate::stochastic::stream(5, 9, 7);
        for _ in 0..100 {
            let x = Vec2::new(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)) * 0.9;
            let y = Vec2::new(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)) * 0.9;
            let dx = g.distance(a * x, a * y);
            assert_relative_eq!(dx, klein_distance(x, y), epsilon = 1e-9);
        }
    }

    #[test]
    fn triangle_inequality_random_triples() {
        for geom in [
            disk_geom(VolumeFlavor::Busemann),
            HilbertGeometry::new(ConvexBody::ellipse(1.5, 0.8), VolumeFlavor::Busemann).unwrap(),
        ] {
            let mut rng = crate::stochastic::stream(11, 9, 7);
            for _ in 0..10_000 {
                let s = |rng: &mut rand_chacha::ChaCha8Rng| {
                    loop {
                        let p = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                        if geom.ambient.contains(p * 1.02, 0.0) {
                            return p;
                        }
                    }
                };
                let (x, y, z) = (s(&mut rng), s(&mut rng), s(&mut rng));
                let lhs = geom.distance(x, z);
                let rhs = geom.distance(x, y) + geom.distance(y, z);
                assert!(lhs <= rhs + 1e-10, "triangle violated: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn affine_invariance_of_distance() {
        let g = disk_geom(VolumeFlavor::Busemann);
        let mats = [
            Mat2::new(1.3, 0.4, -0.2, 0.9),
            Mat2::new(0.5, 0.0, 0.8, 1.7),
            Mat2::new(-1.1, 0.3, 0.2, 0.8),
        ];
        let mut rng = crate::stochastic::stream(13, 9, 7);
        for a in mats {
            let ga = HilbertGeometry::new(
                ConvexBody::linear_image(a, ConvexBody::disk(1.0)),
                VolumeFlavor::Busemann,
            )
            .unwrap();
            for _ in 0..100 {
                let x = Vec2::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
                let y = Vec2::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
                assert_relative_eq!(ga.distance(a * x, a * y), g.distance(x, y), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn finsler_norm_examples_and_homogeneity() {
        let g = disk_geom(VolumeFlavor::Busemann);
        // center of the disk: Euclidean norm
        let v = Vec2::new(0.3, -0.4);
        assert_relative_eq!(g.finsler_norm(Vec2::zeros(), v), 0.5, epsilon = 1e-10);
        // x = (1/2, 0), v = e₁: (1/t⁺ + 1/t⁻)/2 = (2 + 2/3)/2 = 4/3
        assert_relative_eq!(
            g.finsler_norm(Vec2::new(0.5, 0.0), Vec2::new(1.0, 0.0)),
            4.0 / 3.0,
            epsilon = 1e-10
        );
        let mut rng = crate::stochastic::stream(17, 9, 7);
        for _ in 0..100 {
            let x = Vec2::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let v = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if v.norm() < 1e-3 {
                continue;
            }
            let n1 = g.finsler_norm(x, v);
            let n2 = g.finsler_norm(x, v * 2.0);
            assert_relative_eq!(n2, 2.0 * n1, max_relative = 1e-10);
        }
    }

    #[test]
    fn finsler_norm_triangle_inequality() {
        let g = HilbertGeometry::new(ConvexBody::ellipse(1.3, 0.9), VolumeFlavor::Busemann)
            .unwrap();
        let x = Vec2::new(0.3, -0.2);
        let mut rng = crate::stochastic::stream(19, 9, 7);
        for _ in 0..300 {
            let v = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let w = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let lhs = g.finsler_norm(x, v + w);
            let rhs = g.finsler_norm(x, v) + g.finsler_norm(x, w);
            assert!(lhs <= rhs + 1e-10);
        }
    }

    #[test]
    fn unit_ball_at_center_of_disk_is_disk() {
        let g = disk_geom(VolumeFlavor::Busemann);
        let fb = g.finsler_unit_ball(Vec2::zeros());
        for u in uniform_directions(32) {
            assert_relative_eq!(fb.ball.support(u), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn unit_ball_of_centered_ellipse_is_itself() {
        // centrally symmetric C: harmonic symmetrization at 0 returns C
        let e = ConvexBody::ellipse(1.5, 0.7);
        let g = HilbertGeometry::new(e.clone(), VolumeFlavor::Busemann).unwrap();
        let fb = g.finsler_unit_ball(Vec2::zeros());
        for u in uniform_directions(32) {
            assert_relative_eq!(fb.ball.support(u), e.support(u), epsilon = 1e-9);
        }
    }

    #[test]
    fn unit_ball_centrally_symmetric() {
        let g = HilbertGeometry::new(
            ConvexBody::polygon(vec![
                Vec2::new(1.2, -0.6),
                Vec2::new(0.9, 0.9),
                Vec2::new(-0.8, 1.0),
                Vec2::new(-1.1, -0.4),
                Vec2::new(0.2, -1.2),
            ]),
            VolumeFlavor::Busemann,
        )
        .unwrap();
        let fb = g.finsler_unit_ball(Vec2::new(0.2, 0.1));
        for u in uniform_directions(16) {
            assert_relative_eq!(fb.ball.support(u), fb.ball.support(-u), epsilon = 1e-9);
        }
    }

    #[test]
    fn busemann_density_disk_closed_form() {
        // σ(x) = (1−|x|²)^{-3/2}: Klein-model hyperbolic density
        let g = disk_geom(VolumeFlavor::Busemann);
        for r in [0.0, 0.3, 0.6, 0.9] {
            let x = Vec2::new(r, 0.0);
            assert_relative_eq!(
                g.busemann_density(x),
                (1.0 - r * r).powf(-1.5),
                max_relative = 1e-8
            );
        }
        // monotone blow-up along a radius
        let vals: Vec<f64> = [0.1, 0.4, 0.7, 0.95]
            .iter()
            .map(|&r| g.busemann_density(Vec2::new(0.0, r)))
            .collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn densities_unit_at_disk_center() {
        for flavor in [VolumeFlavor::Busemann, VolumeFlavor::HolmesThompson] {
            let g = disk_geom(flavor);
            assert_relative_eq!(g.volume_density(Vec2::zeros()), 1.0, max_relative = 1e-8);
        }
    }

    #[test]
    fn busemann_equals_holmes_thompson_on_ellipse() {
        // for an ellipsoid both flavors are the hyperbolic density
        let e = ConvexBody::ellipse(1.4, 0.9);
        let gb = HilbertGeometry::new(e.clone(), VolumeFlavor::Busemann).unwrap();
        let gh = HilbertGeometry::new(e, VolumeFlavor::HolmesThompson).unwrap();
        for p in [Vec2::new(0.3, 0.2), Vec2::new(-0.6, 0.1), Vec2::new(0.0, 0.5)] {
            assert_relative_eq!(
                gb.volume_density(p),
                gh.volume_density(p),
                max_relative = 1e-7
            );
        }
    }

    #[test]
    fn floating_area_small_disk_is_affine_surface_area() {
        // K = εB²: Ω_C(K) ≈ 2π ε^{2/3} (σ_C ≈ 1 near the center)
        let g = disk_geom(VolumeFlavor::Busemann);
        let eps = 1e-3;
        let fa = g.floating_area(&ConvexBody::disk(eps)).unwrap().value;
        assert_relative_eq!(fa, 2.0 * PI * eps.powf(2.0 / 3.0), max_relative = 1e-4);
    }

    #[test]
    fn floating_area_matches_hyperbolic_chart() {
        // C = unit disk (Busemann): Ω_C(K) = ∫ H^{1/3}(1−|x|²)^{-1/2},
        // the hyperbolic-chart floating area from the spaces module
        let g = disk_geom(VolumeFlavor::Busemann);
        let k = ConvexBody::disk(0.8f64.tanh());
        let omega = g.floating_area(&k).unwrap().value;
        let mb = crate::spaces::ModelBody::hyperbolic_disk(0.8).unwrap();
        let chart = mb.floating_area().unwrap().value;
        assert_relative_eq!(omega, chart, max_relative = 1e-6);
    }

    #[test]
    fn centroaffine_disk_and_invariance() {
        let disk = ConvexBody::disk(1.0);
        assert_relative_eq!(
            centroaffine_surface_area(&disk).unwrap().value,
            2.0 * PI,
            max_relative = 1e-9
        );
        // ellipse = A(disk): Ω_n is GL(2)-invariant
        let e = ConvexBody::ellipse(2.0, 1.0);
        assert_relative_eq!(
            centroaffine_surface_area(&e).unwrap().value,
            2.0 * PI,
            max_relative = 1e-8
        );
        let a = Mat2::new(1.4, 0.7, -0.3, 1.1);
        let sheared = ConvexBody::linear_image(a, ConvexBody::ellipse(1.2, 0.8));
        let base = centroaffine_surface_area(&ConvexBody::ellipse(1.2, 0.8))
            .unwrap()
            .value;
        assert_relative_eq!(
            centroaffine_surface_area(&sheared).unwrap().value,
            base,
            max_relative = 1e-7
        );
    }

    #[test]
    fn berck_pointwise_disk() {
        // at x = (1,0) on the disk: limit is 2^{-3/2}
        let g = disk_geom(VolumeFlavor::Busemann);
        let (lhs, rhs) = berck_pointwise(&g, 0.0, 0.995).unwrap();
        assert_relative_eq!(rhs, 2f64.powf(-1.5), epsilon = 1e-12);
        assert_relative_eq!(lhs, rhs, max_relative = 5e-3);
    }

    #[test]
    fn density_scaled_sequence_bounded() {
        // σ_C(λx)(1−λ)^{3/2} stays bounded toward the boundary
        for geom in [
            disk_geom(VolumeFlavor::Busemann),
            HilbertGeometry::new(ConvexBody::ellipse(2.0, 1.0), VolumeFlavor::Busemann).unwrap(),
        ] {
            let x = geom.ambient.boundary(0.7).x;
            let mut worst = 0.0f64;
            for &lambda in &[0.5, 0.7, 0.9, 0.99, 0.999] {
                let v = geom.volume_density(x * lambda) * (1.0 - lambda).powf(1.5);
                worst = worst.max(v);
            }
            assert!(worst < 1.0, "scaled density blew up: {worst}");
        }
    }
}
