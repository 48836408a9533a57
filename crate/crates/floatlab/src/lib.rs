//! Numerical laboratory for weighted floating bodies, random polytopal
//! approximation and floating areas.
//!
//! The crate computes, at desk scale, the constructive objects of convex
//! floating-body theory and checks the associated limit theorems against
//! closed-form oracles:
//!
//! - [`bodies`] — convex bodies in dimension 2 and 3: support functions,
//!   boundary parametrizations with Gauss–Kronecker curvature, convex hulls,
//!   halfspace intersections and weighted region measures.
//! - [`floating`] — weighted floating bodies `K_δ^φ`, cap-measure
//!   root-finding, volume deficits and the deficit/δ^{2/(n+1)} limit.
//! - [`stochastic`] — Monte Carlo engines: weighted random polytopes,
//!   Efron's vertex-count identity, dual random polyhedral sets and the
//!   spherical duality principle.
//! - [`spaces`] — spherical and hyperbolic geometry through gnomonic charts.
//! - [`hilbert`] — Hilbert geometries: cross-ratio distance, Finsler norms,
//!   Busemann/Holmes–Thompson densities and the centro-affine limit.
//! - [`lab`] — experiment orchestration, CSV/SVG emission and the planar
//!   best-approximation study, behind the `floatlab` CLI.

pub mod bodies;
pub mod floating;
pub mod hilbert;
pub mod lab;
pub mod numeric;
pub mod spaces;
pub mod stochastic;

pub use bodies::{ConvexBody, WeightFn};
