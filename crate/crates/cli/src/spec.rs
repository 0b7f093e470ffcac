//! Curve specs: the JSON input schema and loading into framed curves.
//!
//! A curve without an admissible asymptotic framing (closed planar curves,
//! say) is not an error at load time: it comes back `Bare` and the caller
//! reports the frame-free invariants.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use curvature_core::construction::{self, Provenance};
use curvature_core::curve::{builtin, fourier_fit, BuiltinParams};
use curvature_core::framing::asymptotic_normal;
use curvature_core::{Curve64, Error, Framed64, Result, Vector64};

use crate::CurveArgs;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveSpec {
    /// named curve, with optional torus-knot parameters
    Builtin {
        name: String,
        #[serde(default)]
        p: Option<i64>,
        #[serde(default)]
        q: Option<i64>,
        #[serde(default)]
        big_r: Option<f64>,
        #[serde(default)]
        small_r: Option<f64>,
        #[serde(default)]
        sigma: Option<f64>,
    },
    /// closed loop given by points at uniform parameters, refit on a
    /// trigonometric basis (even count, at least 16)
    Samples { points: Vec<[f64; 3]> },
    /// the constructed example with prescribed normal loop
    Example2 {
        #[serde(default)]
        sigma: Option<f64>,
    },
}

pub enum Loaded {
    Framed {
        framed: Framed64,
        provenance: Option<Provenance>,
    },
    Bare {
        curve: Curve64,
        reason: String,
    },
}

pub fn from_args(args: &CurveArgs, samples: usize) -> Result<Loaded> {
    match (&args.builtin, &args.input) {
        (Some(name), None) => {
            let params = BuiltinParams {
                p: args.p,
                q: args.q,
                ..BuiltinParams::default()
            };
            from_builtin(name, args.sigma, params, samples)
        }
        (None, Some(path)) => from_file(path, args, samples),
        _ => Err(Error::InvalidSpec(
            "pass exactly one of --builtin NAME or --input FILE".into(),
        )),
    }
}

fn from_file(path: &Path, args: &CurveArgs, samples: usize) -> Result<Loaded> {
    let text = fs::read_to_string(path)?;
    let parsed: CurveSpec = serde_json::from_str(&text)?;
    match parsed {
        CurveSpec::Builtin {
            name,
            p,
            q,
            big_r,
            small_r,
            sigma,
        } => {
            let d = BuiltinParams::default();
            let params = BuiltinParams {
                p: p.unwrap_or(args.p),
                q: q.unwrap_or(args.q),
                big_r: big_r.unwrap_or(d.big_r),
                small_r: small_r.unwrap_or(d.small_r),
            };
            from_builtin(&name, sigma.unwrap_or(args.sigma), params, samples)
        }
        CurveSpec::Samples { points } => {
            let pts: Vec<Vector64> = points.iter().map(|&p| Vector64::from_array(p)).collect();
            frame_or_bare(fourier_fit(&pts)?, samples)
        }
        CurveSpec::Example2 { sigma } => built_example(sigma.unwrap_or(args.sigma)),
    }
}

fn from_builtin(name: &str, sigma: f64, params: BuiltinParams, samples: usize) -> Result<Loaded> {
    if name == "example2" {
        return built_example(sigma);
    }
    frame_or_bare(builtin(name, params)?, samples)
}

fn built_example(sigma: f64) -> Result<Loaded> {
    let built = construction::example2(sigma)?;
    Ok(Loaded::Framed {
        framed: built.framed,
        provenance: Some(built.provenance),
    })
}

fn frame_or_bare(curve: Curve64, samples: usize) -> Result<Loaded> {
    match asymptotic_normal(&curve, samples) {
        Ok(framed) => Ok(Loaded::Framed {
            framed,
            provenance: None,
        }),
        Err(e @ (Error::NotAsymptotic { .. } | Error::NoDarbouxFraming(_))) => Ok(Loaded::Bare {
            reason: e.to_string(),
            curve,
        }),
        Err(e) => Err(e),
    }
}
