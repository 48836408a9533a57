use floatlab::bodies::{ConvexBody, WeightFn};
use floatlab::floating::{check_floating_limit, FloatingOptions};
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let disk = ConvexBody::disk(1.0);
    let uni = WeightFn::uniform();
    let deltas = [1e-3, 1e-4, 1e-5, 1e-6];
    let rep = check_floating_limit(&disk, &uni, &uni, &deltas, &FloatingOptions::default()).unwrap();
    for r in &rep.rows {
        println!("delta={:9.1e} deficit={:.6e} cone={:.6e} norm={:.6} dirs={}", r.delta, r.deficit, r.deficit_cone, r.normalized, r.directions_used);
    }
    println!("extrapolated={:.6} predicted={:.6} rel_dev={:.4}%", rep.extrapolated, rep.predicted, (rep.extrapolated-rep.predicted).abs()/rep.predicted*100.0);
    println!("elapsed: {:.2?}", t0.elapsed());
}
