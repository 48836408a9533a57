//! Planar convex hull (Andrew's monotone chain) with epsilon-robust turn
//! predicates. Affinely dependent inputs come back flagged degenerate, not
//! as errors: random samples can be arbitrarily close to degenerate.

use super::{cross2, Vec2, GEOM_EPS};

#[derive(Debug, Clone)]
pub struct Hull2 {
    /// Hull vertices, counterclockwise; collinear interior points dropped.
    pub vertices: Vec<Vec2>,
    /// Set when the input was (near-)collinear; `vertices` then holds the
    /// extreme segment endpoints.
    pub degenerate: bool,
}

impl Hull2 {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

/// Convex hull of a planar point set.
pub fn convex_hull2(points: &[Vec2]) -> Hull2 {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    pts.dedup_by(|p, q| (*p - *q).norm() == 0.0);
    if pts.len() < 3 {
        return Hull2 {
            vertices: pts,
            degenerate: true,
        };
    }
    let scale = pts
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let eps = GEOM_EPS * scale * scale;

    let chain = |iter: &mut dyn Iterator<Item = &Vec2>| -> Vec<Vec2> {
        let mut out: Vec<Vec2> = Vec::new();
        for &p in iter {
            while out.len() >= 2 {
                let a = out[out.len() - 2];
                let b = out[out.len() - 1];
                if cross2(b - a, p - a) <= eps {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        out
    };

    let lower = chain(&mut pts.iter());
    let upper = chain(&mut pts.iter().rev());
    let mut vertices = lower;
    vertices.pop();
    vertices.extend_from_slice(&upper[..upper.len() - 1]);
    let degenerate = vertices.len() < 3;
    Hull2 {
        vertices,
        degenerate,
    }
}
