//! `reproduce`: rebuild a studied curve from scratch, run the whole identity
//! suite against it, and write the plot data files.

use std::path::PathBuf;
use std::process::ExitCode;

use curvature_core::construction::{example2, Provenance};
use curvature_core::curve::{builtin, BuiltinParams};
use curvature_core::framing::{asymptotic_normal, spherical_image_intersection};
use curvature_core::invariants::full_report;
use curvature_core::projection::self_crossings;
use curvature_core::{Error, Framed64, Result, Vector64};

use crate::analyze::{failing, report_options};
use crate::{artifacts, Format, RunArgs};

pub fn run(which: &str, sigma: f64, run: &RunArgs) -> Result<ExitCode> {
    let (framed, provenance): (Framed64, Option<Provenance>) = match which {
        "kovaleva" => {
            let c = builtin("kovaleva", BuiltinParams::default())?;
            (asymptotic_normal(&c, run.samples)?, None)
        }
        "example2" => {
            let built = example2(sigma)?;
            (built.framed, Some(built.provenance))
        }
        other => return Err(Error::InvalidSpec(format!("unknown study `{other}`"))),
    };

    let mut opts = report_options(run);
    if opts.pinned_directions.is_empty() {
        opts.pinned_directions = vec![[0.0, 0.0, 1.0]];
    }
    let report = full_report(&framed, &opts)?;

    let mut fails = failing(&report, run.tol);
    let crossed = spherical_image_intersection(&framed).is_some();
    match which {
        "kovaleva" => {
            if report.lk_rounded != 0 {
                fails.push(format!("lk = {} (expected 0)", report.lk_rounded));
            }
            if !crossed {
                fails.push("spherical image should self-intersect".into());
            }
        }
        _ => {
            if report.lk_rounded != 2 {
                fails.push(format!("lk = {} (expected 2)", report.lk_rounded));
            }
            if crossed {
                fails.push("spherical image should be injective".into());
            }
            let p = provenance.as_ref().expect("construction provenance");
            if !p.coefficients.iter().all(|&c| c > 0.0) {
                fails.push("closing weights must all be positive".into());
            }
            if !(p.closure_residual < 1e-8) {
                fails.push(format!("closure residual = {}", p.closure_residual));
            }
        }
    }

    let out = run
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("reproduce-{which}")));
    let u = Vector64::from_array(opts.pinned_directions[0]).normalized();
    let crossings = self_crossings(&framed.curve, u, 4096)?;
    artifacts::write_text(&out, "report.json", &artifacts::json(&report)?)?;
    artifacts::write_text(
        &out,
        "residuals.csv",
        &artifacts::residuals_csv(&report, run.tol),
    )?;
    artifacts::write_text(
        &out,
        "projection.csv",
        &artifacts::projection_csv(&framed.curve, u, 1024),
    )?;
    artifacts::write_text(&out, "crossings.csv", &artifacts::crossings_csv(&crossings))?;
    artifacts::write_text(
        &out,
        "spherical_image.csv",
        &artifacts::spherical_image_csv(&framed, 1024),
    )?;
    artifacts::write_text(
        &out,
        "tangent_indicatrix.csv",
        &artifacts::tangent_indicatrix_csv(&framed.curve, 1024),
    )?;
    if let Some(p) = &provenance {
        artifacts::write_text(&out, "provenance.json", &artifacts::json(p)?)?;
        artifacts::write_text(
            &out,
            "anchors.csv",
            &artifacts::anchors_csv(&framed.curve, &p.anchors),
        )?;
    }

    match run.format {
        Format::Json => print!("{}", artifacts::json(&report)?),
        Format::Csv => print!("{}", artifacts::residuals_csv(&report, run.tol)),
    }
    if fails.is_empty() {
        eprintln!("{which}: all identities hold; artifacts in {}", out.display());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{which} failed: {}", fails.join("; "));
        Ok(ExitCode::from(3))
    }
}
