//! Shared numerical kernels: adaptive quadrature, root bracketing,
//! 1D maximization, least-squares fits and small statistics helpers.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericError {
    /// Adaptive refinement exhausted its interval budget before reaching
    /// the requested tolerance.
    #[error("tolerance not met: estimate {estimate}, error {error} > budget {requested}")]
    ToleranceNotMet {
        estimate: f64,
        error: f64,
        requested: f64,
    },
    #[error("root not bracketed on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")]
    RootNotBracketed { lo: f64, hi: f64, flo: f64, fhi: f64 },
}

/// Value with an error estimate, as returned by the quadrature routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

// 15-point Kronrod abscissae (positive half) with the embedded 7-point
// Gauss rule; QUADPACK qk15 values.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Single Gauss–Kronrod 7/15 panel on `[a, b]`: returns the Kronrod value
/// and |K15 − G7| as the error estimate.
pub(crate) fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            // odd Kronrod indices coincide with the Gauss nodes
            gauss += WG[j / 2] * fsum;
        }
    }
    Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Splits the worst panel until `sum of panel errors <= abs_tol + rel_tol*|I|`
/// or the panel budget is exhausted (in which case the best estimate is
/// still returned inside the error).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Estimate, NumericError> {
    integrate_budget(f, a, b, rel_tol, abs_tol, 4000)
}

pub fn integrate_budget<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<Estimate, NumericError> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    // (error, a, b, value); linear scan for the worst panel keeps the code
    // simple and the panel counts here are small.
    let mut panels: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(64);
    let first = gk15(&f, a, b);
    panels.push((first.error, a, b, first.value));
    loop {
        let value: f64 = panels.iter().map(|p| p.3).sum();
        let error: f64 = panels.iter().map(|p| p.0).sum();
        let target = abs_tol + rel_tol * value.abs();
        if error <= target || error <= f64::EPSILON * value.abs() * 50.0 {
            return Ok(Estimate { value, error });
        }
        if panels.len() >= max_panels {
            return Err(NumericError::ToleranceNotMet {
                estimate: value,
                error,
                requested: target,
            });
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .0.total_cmp(&y.1 .0))
            .expect("nonempty");
        let (_, pa, pb, _) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        let left = gk15(&f, pa, mid);
        let right = gk15(&f, mid, pb);
        panels.push((left.error, pa, mid, left.value));
        panels.push((right.error, mid, pb, right.value));
    }
}

/// Trapezoid rule with doubling for smooth periodic integrands on
/// `[0, 2π)`; converges spectrally for analytic integrands.
pub fn integrate_periodic<F: Fn(f64) -> f64>(f: F, rel_tol: f64, abs_tol: f64) -> Estimate {
    let tau = std::f64::consts::TAU;
    let mut n = 32usize;
    let mut prev = f64::NAN;
    let mut value = 0.0;
    let max_n = 1 << 21;
    while n <= max_n {
        let h = tau / n as f64;
        let mut sum = 0.0;
        for k in 0..n {
            sum += f(k as f64 * h);
        }
        value = sum * h;
        let err = (value - prev).abs();
        if err <= abs_tol + rel_tol * value.abs() {
            return Estimate { value, error: err };
        }
        prev = value;
        n *= 2;
    }
    Estimate {
        value,
        error: (value - prev).abs(),
    }
}

/// Brent's method for a root of `f` on the bracket `[lo, hi]`.
///
/// `f(lo)` and `f(hi)` must have opposite signs. Converges to absolute
/// tolerance `tol` on the abscissa.
pub fn brent_root<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, NumericError> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericError::RootNotBracketed { lo, hi, flo: fa, fhi: fb });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation / secant step
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Ok(b)
}

/// Golden-section maximization of `f` on `[lo, hi]` to abscissa tolerance
/// `tol`; assumes a single interior maximum on the bracket.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = lo;
    let mut b = hi;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Least-squares fit of `y ≈ a + b·x^p`; returns `(a, b)`.
///
/// Used for the extrapolation models `a + b·δ^{1/(n+1)}` and
/// `a + b·(1−λ)^{1/2}` of the convergence studies.
pub fn fit_offset_power(xs: &[f64], ys: &[f64], p: f64) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points to extrapolate");
    let ts: Vec<f64> = xs.iter().map(|&x| x.powf(p)).collect();
    let n = ts.len() as f64;
    let tbar = ts.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, y) in ts.iter().zip(ys) {
        num += (t - tbar) * (y - ybar);
        den += (t - tbar) * (t - tbar);
    }
    let b = if den > 0.0 { num / den } else { 0.0 };
    (ybar - b * tbar, b)
}

/// Slope of the least-squares line through `(ln x, ln y)`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let xbar = lx.iter().sum::<f64>() / n;
    let ybar = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        num += (x - xbar) * (y - ybar);
        den += (x - xbar) * (x - xbar);
    }
    num / den
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    assert!(n >= 1);
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}

/// One-sample Kolmogorov–Smirnov statistic of `samples` against the CDF
/// `cdf`; returns `sup |F_n − F|`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let fx = cdf(x);
        let lo = i as f64 / n;
        let hi = (i as f64 + 1.0) / n;
        d = d.max((fx - lo).abs()).max((hi - fx).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn gk_polynomial_exact() {
        // K15 integrates degree <= 22 exactly; x^10 on [0,1] = 1/11
        let est = integrate(|x| x.powi(10), 0.0, 1.0, 1e-12, 0.0).unwrap();
        assert_relative_eq!(est.value, 1.0 / 11.0, max_relative = 1e-14);
    }

    #[test]
    fn adaptive_sqrt_singularity() {
        // d/ds of a circular cap: integrand ~ sqrt near the endpoint
        let est = integrate(|x| (1.0 - x * x).sqrt(), -1.0, 1.0, 1e-10, 1e-14).unwrap();
        assert_relative_eq!(est.value, PI / 2.0, max_relative = 1e-9);
    }

    #[test]
    fn periodic_spectral() {
        let est = integrate_periodic(|t| (t.sin()).exp(), 1e-12, 0.0);
        // 2π I_0(1), modified Bessel
        assert_relative_eq!(est.value, 7.95492652101284, max_relative = 1e-10);
    }

    #[test]
    fn brent_cubic() {
        let r = brent_root(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert_relative_eq!(r, 2f64.powf(1.0 / 3.0), epsilon = 1e-12);
    }

    #[test]
    fn brent_rejects_unbracketed() {
        assert!(brent_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn golden_parabola() {
        let (x, fx) = golden_max(|x| 1.0 - (x - 0.3) * (x - 0.3), -1.0, 1.0, 1e-10);
        assert_relative_eq!(x, 0.3, epsilon = 1e-8);
        assert_relative_eq!(fx, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn offset_power_recovers_exact_model() {
        let xs = [1e-3f64, 1e-4, 1e-5, 1e-6];
        let ys: Vec<f64> = xs.iter().map(|&x| 4.0 + 2.5 * x.powf(1.0 / 3.0)).collect();
        let (a, b) = fit_offset_power(&xs, &ys, 1.0 / 3.0);
        assert_relative_eq!(a, 4.0, epsilon = 1e-12);
        assert_relative_eq!(b, 2.5, epsilon = 1e-9);
    }

    #[test]
    fn ks_uniform_self() {
        // deterministic stratified sample has tiny KS distance vs U[0,1]
        let mut xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d = ks_statistic(&mut xs, |x| x.clamp(0.0, 1.0));
        assert!(d <= 0.5e-3 + 1e-12, "d = {d}");
    }
}
