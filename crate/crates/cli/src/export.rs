//! `export`: write a curve and everything computed from it as plain files —
//! samples, projection with crossings, spherical image, frame fields, and the
//! invariant report.

use std::path::PathBuf;
use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use curvature_core::invariants::full_report;
use curvature_core::projection::{random_admissible_direction, self_crossings};
use curvature_core::{Curve64, Result, Vector64};

use crate::analyze::report_options;
use crate::spec::{self, Loaded};
use crate::{artifacts, CurveArgs, RunArgs};

#[derive(Serialize)]
struct SamplesSpec {
    kind: &'static str,
    points: Vec<[f64; 3]>,
}

/// Re-loadable spec for the exported curve: its own samples.
fn samples_spec(c: &Curve64, n: usize) -> SamplesSpec {
    SamplesSpec {
        kind: "samples",
        points: Curve64::grid(n, false)
            .into_iter()
            .map(|t| c.position(t).to_array())
            .collect(),
    }
}

pub fn run(curve: &CurveArgs, run: &RunArgs) -> Result<ExitCode> {
    let out = run.out.clone().unwrap_or_else(|| PathBuf::from("export"));
    let loaded = spec::from_args(curve, run.samples)?;
    let c = match &loaded {
        Loaded::Framed { framed, .. } => &framed.curve,
        Loaded::Bare { curve, .. } => curve,
    };

    let u = match run.direction {
        Some(d) => Vector64::from_array(d).normalized(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
            random_admissible_direction(c, None, &mut rng)?.0
        }
    };
    let crossings = self_crossings(c, u, 4096)?;

    artifacts::write_text(&out, "curve.json", &artifacts::json(&samples_spec(c, 1024))?)?;
    artifacts::write_text(&out, "curve_samples.csv", &artifacts::samples_csv(c, 1024))?;
    artifacts::write_text(&out, "projection.csv", &artifacts::projection_csv(c, u, 1024))?;
    artifacts::write_text(&out, "crossings.csv", &artifacts::crossings_csv(&crossings))?;

    match &loaded {
        Loaded::Framed { framed, provenance } => {
            artifacts::write_text(
                &out,
                "spherical_image.csv",
                &artifacts::spherical_image_csv(framed, 1024),
            )?;
            artifacts::write_text(&out, "frames.csv", &artifacts::frames_csv(framed, 1024))?;
            if let Some(p) = provenance {
                artifacts::write_text(&out, "provenance.json", &artifacts::json(p)?)?;
            }
            let report = full_report(framed, &report_options(run))?;
            artifacts::write_text(&out, "report.json", &artifacts::json(&report)?)?;
            artifacts::write_text(
                &out,
                "residuals.csv",
                &artifacts::residuals_csv(&report, run.tol),
            )?;
        }
        Loaded::Bare { curve, reason } => {
            artifacts::write_text(
                &out,
                "frames.txt",
                &format!("no asymptotic framing: {reason}\n"),
            )?;
            let report = crate::analyze::bare_report(curve, reason.clone(), run)?;
            artifacts::write_text(&out, "report.json", &artifacts::json(&report)?)?;
        }
    }
    eprintln!("exported to {}", out.display());
    Ok(ExitCode::SUCCESS)
}
