//! Experiment configuration: a small TOML schema (one table per concern)
//! parsed into typed specs, with CLI-level overrides applied on top.
//!
//! ```toml
//! [experiment]
//! kind = "floating"        # floating | random | dual | spherical |
//!                          # hyperbolic | hilbert | omegacp | bestapprox
//! seed = 42
//! replicates = 400
//! out = "out/report"       # output basename (.csv / .svg appended)
//! format = "csv"           # csv | svg | both
//!
//! [body]
//! kind = "disk"            # disk | ellipse | square | box | polygon |
//!                          # regular-gon | smooth-wave
//! radius = 1.0
//!
//! [weights]
//! phi = "uniform"          # uniform | const:<c> | invcube |
//!                          # spherical-density | hyperbolic-density
//! psi = "uniform"
//!
//! [grid]
//! deltas = [1e-3, 1e-4, 1e-5, 1e-6]
//! # ms = [512, 1024, 2048, 4096]
//! # lambdas = [0.9, 0.95, 0.975, 0.99]
//! # budgets = [8, 16, 32, 64, 128]
//!
//! [model]                  # spherical / hyperbolic experiments
//! cap_radius = 0.8
//!
//! [hilbert]                # hilbert / omegacp experiments
//! flavor = "busemann"      # busemann | holmes-thompson
//! body_radius = 0.6        # K = disk(body_radius) inside the ambient C
//! ```

use crate::bodies::{ConvexBody, Vec2, WeightFn};
use crate::hilbert::VolumeFlavor;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config field `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config io error: {0}")]
    Io(#[from] std::io::Error),
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Floating,
    Random,
    Dual,
    Spherical,
    Hyperbolic,
    Hilbert,
    OmegaCp,
    BestApprox,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "floating" => ExperimentKind::Floating,
            "random" => ExperimentKind::Random,
            "dual" => ExperimentKind::Dual,
            "spherical" => ExperimentKind::Spherical,
            "hyperbolic" => ExperimentKind::Hyperbolic,
            "hilbert" => ExperimentKind::Hilbert,
            "omegacp" => ExperimentKind::OmegaCp,
            "bestapprox" => ExperimentKind::BestApprox,
            other => {
                return Err(invalid(
                    "experiment.kind",
                    format!("unknown experiment kind `{other}`"),
                ))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Floating => "floating",
            ExperimentKind::Random => "random",
            ExperimentKind::Dual => "dual",
            ExperimentKind::Spherical => "spherical",
            ExperimentKind::Hyperbolic => "hyperbolic",
            ExperimentKind::Hilbert => "hilbert",
            ExperimentKind::OmegaCp => "omegacp",
            ExperimentKind::BestApprox => "bestapprox",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
    Both,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "csv" => OutputFormat::Csv,
            "svg" => OutputFormat::Svg,
            "both" => OutputFormat::Both,
            other => {
                return Err(invalid(
                    "experiment.format",
                    format!("unknown format `{other}` (csv|svg|both)"),
                ))
            }
        })
    }
}

// raw TOML shape
#[derive(Debug, Deserialize)]
struct RawConfig {
    experiment: RawExperiment,
    body: Option<RawBody>,
    weights: Option<RawWeights>,
    grid: Option<RawGrid>,
    model: Option<RawModel>,
    hilbert: Option<RawHilbert>,
}

#[derive(Debug, Deserialize)]
struct RawExperiment {
    kind: String,
    seed: Option<u64>,
    replicates: Option<usize>,
    out: Option<String>,
    format: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RawBody {
    kind: String,
    radius: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    side: Option<f64>,
    hx: Option<f64>,
    hy: Option<f64>,
    vertices: Option<Vec<[f64; 2]>>,
    k: Option<usize>,
    circumradius: Option<f64>,
    amplitude: Option<f64>,
    lobes: Option<usize>,
}

#[derive(Debug, Deserialize)]
struct RawWeights {
    phi: Option<String>,
    psi: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RawGrid {
    deltas: Option<Vec<f64>>,
    ms: Option<Vec<usize>>,
    lambdas: Option<Vec<f64>>,
    budgets: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
struct RawModel {
    cap_radius: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct RawHilbert {
    flavor: Option<String>,
    body_radius: Option<f64>,
}

/// Fully resolved experiment configuration.
#[derive(Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub replicates: usize,
    pub out: String,
    pub format: OutputFormat,
    pub body: ConvexBody,
    pub phi: WeightFn,
    pub psi: WeightFn,
    pub deltas: Vec<f64>,
    pub ms: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub budgets: Vec<usize>,
    pub cap_radius: f64,
    pub flavor: VolumeFlavor,
    pub hilbert_body_radius: f64,
}

/// Overrides supplied on the CLI.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
    pub out: Option<String>,
    pub format: Option<String>,
    pub flavor: Option<String>,
}

pub fn parse_config(text: &str, overrides: &Overrides) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text)?;
    let kind = ExperimentKind::parse(&raw.experiment.kind)?;

    let seed = overrides.seed.or(raw.experiment.seed).unwrap_or(42);
    let replicates = overrides
        .replicates
        .or(raw.experiment.replicates)
        .unwrap_or(100);
    if replicates < 1 {
        return Err(invalid("experiment.replicates", "must be at least 1"));
    }
    let out = overrides
        .out
        .clone()
        .or(raw.experiment.out.clone())
        .unwrap_or_else(|| format!("floatlab_{}", kind.name()));
    let format = OutputFormat::parse(
        overrides
            .format
            .as_deref()
            .or(raw.experiment.format.as_deref())
            .unwrap_or("csv"),
    )?;

    let body = match &raw.body {
        Some(b) => parse_body(b)?,
        None => ConvexBody::disk(1.0),
    };
    let (phi, psi) = match &raw.weights {
        Some(w) => (
            parse_weight(w.phi.as_deref().unwrap_or("uniform"), "weights.phi")?,
            parse_weight(w.psi.as_deref().unwrap_or("uniform"), "weights.psi")?,
        ),
        None => (WeightFn::uniform(), WeightFn::uniform()),
    };

    let grid = raw.grid.as_ref();
    let deltas = grid
        .and_then(|g| g.deltas.clone())
        .unwrap_or_else(|| vec![1e-3, 1e-4, 1e-5, 1e-6]);
    let ms = grid
        .and_then(|g| g.ms.clone())
        .unwrap_or_else(|| vec![512, 1024, 2048, 4096]);
    let lambdas = grid
        .and_then(|g| g.lambdas.clone())
        .unwrap_or_else(|| vec![0.9, 0.95, 0.975, 0.99]);
    let budgets = grid
        .and_then(|g| g.budgets.clone())
        .unwrap_or_else(|| vec![8, 16, 32, 64]);
    check_monotone(&deltas, false, "grid.deltas")?;
    check_monotone_usize(&ms, "grid.ms")?;
    check_monotone(&lambdas, true, "grid.lambdas")?;
    check_monotone_usize(&budgets, "grid.budgets")?;

    let cap_radius = raw.model.as_ref().and_then(|m| m.cap_radius).unwrap_or(0.8);
    if !(cap_radius > 0.0 && cap_radius < std::f64::consts::FRAC_PI_2) {
        return Err(invalid("model.cap_radius", "must lie in (0, π/2)"));
    }
    let flavor = match overrides
        .flavor
        .as_deref()
        .or(raw.hilbert.as_ref().and_then(|h| h.flavor.as_deref()))
        .unwrap_or("busemann")
    {
        "busemann" => VolumeFlavor::Busemann,
        "holmes-thompson" => VolumeFlavor::HolmesThompson,
        other => {
            return Err(invalid(
                "hilbert.flavor",
                format!("unknown flavor `{other}` (busemann|holmes-thompson)"),
            ))
        }
    };
    let hilbert_body_radius = raw
        .hilbert
        .as_ref()
        .and_then(|h| h.body_radius)
        .unwrap_or(0.6);
    if !(hilbert_body_radius > 0.0 && hilbert_body_radius < 1.0) {
        return Err(invalid("hilbert.body_radius", "must lie in (0, 1)"));
    }

    Ok(ExperimentConfig {
        kind,
        seed,
        replicates,
        out,
        format,
        body,
        phi,
        psi,
        deltas,
        ms,
        lambdas,
        budgets,
        cap_radius,
        flavor,
        hilbert_body_radius,
    })
}

fn check_monotone(xs: &[f64], increasing: bool, field: &str) -> Result<(), ConfigError> {
    let ok = if increasing {
        xs.windows(2).all(|w| w[0] < w[1])
    } else {
        xs.windows(2).all(|w| w[0] > w[1])
    };
    if xs.is_empty() || !ok {
        return Err(invalid(
            field,
            format!(
                "must be nonempty and strictly {}",
                if increasing { "increasing" } else { "decreasing" }
            ),
        ));
    }
    Ok(())
}

fn check_monotone_usize(xs: &[usize], field: &str) -> Result<(), ConfigError> {
    if xs.is_empty() || !xs.windows(2).all(|w| w[0] < w[1]) {
        return Err(invalid(field, "must be nonempty and strictly increasing"));
    }
    Ok(())
}

fn parse_body(raw: &RawBody) -> Result<ConvexBody, ConfigError> {
    match raw.kind.as_str() {
        "disk" => {
            let r = raw.radius.unwrap_or(1.0);
            if r <= 0.0 {
                return Err(invalid("body.radius", "must be positive"));
            }
            Ok(ConvexBody::disk(r))
        }
        "ellipse" => {
            let a = raw.a.ok_or_else(|| invalid("body.a", "required for ellipse"))?;
            let b = raw.b.ok_or_else(|| invalid("body.b", "required for ellipse"))?;
            if a <= 0.0 || b <= 0.0 {
                return Err(invalid("body.a", "semiaxes must be positive"));
            }
            Ok(ConvexBody::ellipse(a, b))
        }
        "square" => {
            let side = raw.side.unwrap_or(1.0);
            if side <= 0.0 {
                return Err(invalid("body.side", "must be positive"));
            }
            Ok(ConvexBody::square(side))
        }
        "box" => {
            let hx = raw.hx.ok_or_else(|| invalid("body.hx", "required for box"))?;
            let hy = raw.hy.ok_or_else(|| invalid("body.hy", "required for box"))?;
            Ok(ConvexBody::box2(hx, hy))
        }
        "polygon" => {
            let verts = raw
                .vertices
                .as_ref()
                .ok_or_else(|| invalid("body.vertices", "required for polygon"))?;
            if verts.len() < 3 {
                return Err(invalid("body.vertices", "need at least 3 vertices"));
            }
            Ok(ConvexBody::polygon(
                verts.iter().map(|v| Vec2::new(v[0], v[1])).collect(),
            ))
        }
        "regular-gon" => {
            let k = raw.k.ok_or_else(|| invalid("body.k", "required for regular-gon"))?;
            if k < 3 {
                return Err(invalid("body.k", "need k ≥ 3"));
            }
            Ok(ConvexBody::regular_gon(k, raw.circumradius.unwrap_or(1.0)))
        }
        "smooth-wave" => {
            let amp = raw.amplitude.unwrap_or(0.1);
            let lobes = raw.lobes.unwrap_or(3);
            // convexity of r = 1 + a·cos(kθ) needs r² + 2r'² − r r'' > 0
            let worst = 1.0 - amp;
            if amp < 0.0 || worst * worst - (1.0 + amp) * amp * (lobes * lobes) as f64 + 0.0 <= 0.0 && amp * (lobes * lobes) as f64 >= worst {
                return Err(invalid("body.amplitude", "wave body would be non-convex"));
            }
            let l = lobes as f64;
            Ok(ConvexBody::radial_with_derivatives(
                move |t: f64| 1.0 + amp * (l * t).cos(),
                move |t: f64| -amp * l * (l * t).sin(),
                move |t: f64| -amp * l * l * (l * t).cos(),
            ))
        }
        other => Err(invalid(
            "body.kind",
            format!("unknown body kind `{other}`; see `floatlab list-bodies`"),
        )),
    }
}

fn parse_weight(spec: &str, field: &str) -> Result<WeightFn, ConfigError> {
    if spec == "uniform" {
        return Ok(WeightFn::uniform());
    }
    if let Some(c) = spec.strip_prefix("const:") {
        let c: f64 = c
            .parse()
            .map_err(|_| invalid(field, format!("bad constant `{c}`")))?;
        if c <= 0.0 {
            return Err(invalid(field, "constant weight must be positive"));
        }
        return Ok(WeightFn::constant(c));
    }
    match spec {
        // (1+|x|²)^{-3/2}: the spherical chart density
        "invcube" | "spherical-density" => Ok(WeightFn::with_bounds(
            |p: Vec2| (1.0 + p.norm_squared()).powf(-1.5),
            0.0,
            1.0,
        )),
        // (1−|x|²)^{-3/2}: the hyperbolic chart density (body must stay
        // inside the unit ball)
        "hyperbolic-density" => Ok(WeightFn::new(|p: Vec2| {
            (1.0 - p.norm_squared()).powf(-1.5)
        })),
        other => Err(invalid(
            field,
            format!("unknown weight `{other}` (uniform|const:<c>|invcube|spherical-density|hyperbolic-density)"),
        )),
    }
}

/// Body kinds understood by the config, for `floatlab list-bodies`.
pub fn body_catalog() -> &'static [(&'static str, &'static str)] {
    &[
        ("disk", "radius — disk of given radius centered at the origin"),
        ("ellipse", "a, b — axis-aligned ellipse x²/a² + y²/b² ≤ 1"),
        ("square", "side — square [−side/2, side/2]²"),
        ("box", "hx, hy — box |x| ≤ hx, |y| ≤ hy"),
        ("polygon", "vertices = [[x,y],...] — convex polygon"),
        ("regular-gon", "k, circumradius — regular k-gon"),
        (
            "smooth-wave",
            "amplitude, lobes — smooth body r(θ) = 1 + amplitude·cos(lobes·θ)",
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = parse_config(
            "[experiment]\nkind = \"floating\"\n",
            &Overrides::default(),
        )
        .unwrap();
        assert_eq!(cfg.kind, ExperimentKind::Floating);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.deltas.len(), 4);
    }

    #[test]
    fn unknown_body_kind_names_field() {
        let err = parse_config(
            "[experiment]\nkind = \"floating\"\n[body]\nkind = \"torus\"\n",
            &Overrides::default(),
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("body.kind"), "message: {msg}");
        assert!(msg.contains("torus"));
    }

    #[test]
    fn overrides_win() {
        let cfg = parse_config(
            "[experiment]\nkind = \"random\"\nseed = 1\nreplicates = 10\n",
            &Overrides {
                seed: Some(7),
                replicates: Some(25),
                ..Overrides::default()
            },
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.replicates, 25);
    }

    #[test]
    fn grids_must_be_monotone() {
        let err = parse_config(
            "[experiment]\nkind = \"floating\"\n[grid]\ndeltas = [1e-3, 1e-3]\n",
            &Overrides::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("grid.deltas"));
    }

    #[test]
    fn weight_specs() {
        assert!(parse_weight("uniform", "w").is_ok());
        assert!(parse_weight("const:2.5", "w").is_ok());
        assert!(parse_weight("invcube", "w").is_ok());
        assert!(parse_weight("bogus", "w").is_err());
    }
}
