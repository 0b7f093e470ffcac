//! `analyze`: one curve in, one invariant report out. Exit 0 only when every
//! identity residual sits inside the tolerance and every inequality holds.

use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use curvature_core::invariants::{
    full_report, self_linking, writhe_average, writhe_gauss, InvariantReport, ReportOptions,
};
use curvature_core::projection::{
    crossing_number, random_admissible_direction, rotation_index, self_crossings,
};
use curvature_core::{Curve64, Error, Result, Vector64};

use crate::spec::{self, Loaded};
use crate::{artifacts, CurveArgs, Format, RunArgs};

pub fn report_options(run: &RunArgs) -> ReportOptions {
    ReportOptions {
        seed: run.seed,
        mc_directions: run.dirs.unwrap_or(2000),
        pinned_directions: run.direction.into_iter().collect(),
        ..ReportOptions::default()
    }
}

/// Names of report entries outside tolerance; empty means exit 0.
pub fn failing(r: &InvariantReport, tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    if !r.lk_residual.is_finite() || r.lk_residual > tol {
        out.push(format!("lk_integer = {}", r.lk_residual));
    }
    for (k, v) in &r.identity_residuals {
        if !v.is_finite() || *v > tol {
            out.push(format!("{k} = {v}"));
        }
    }
    for (k, ok) in &r.inequality_flags {
        if !ok {
            out.push(format!("{k} = false"));
        }
    }
    let dev = (r.writhe_mc - r.writhe_gauss).abs();
    if !(dev <= 3.0 * r.writhe_mc_stderr) {
        out.push(format!("writhe_mc_3sigma = {dev}"));
    }
    out
}

pub fn run(curve: &CurveArgs, run: &RunArgs) -> Result<ExitCode> {
    match spec::from_args(curve, run.samples)? {
        Loaded::Framed { framed, provenance } => {
            let report = full_report(&framed, &report_options(run))?;
            match run.format {
                Format::Json => print!("{}", artifacts::json(&report)?),
                Format::Csv => print!("{}", artifacts::residuals_csv(&report, run.tol)),
            }
            if let Some(dir) = &run.out {
                artifacts::write_text(dir, "report.json", &artifacts::json(&report)?)?;
                artifacts::write_text(
                    dir,
                    "residuals.csv",
                    &artifacts::residuals_csv(&report, run.tol),
                )?;
                if let Some(p) = &provenance {
                    artifacts::write_text(dir, "provenance.json", &artifacts::json(p)?)?;
                }
            }
            let fails = failing(&report, run.tol);
            if fails.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("outside tolerance: {}", fails.join("; "));
                Ok(ExitCode::from(3))
            }
        }
        Loaded::Bare { curve, reason } => {
            let report = bare_report(&curve, reason, run)?;
            match run.format {
                Format::Json => print!("{}", artifacts::json(&report)?),
                Format::Csv => print!("{}", bare_csv(&report)),
            }
            if let Some(dir) = &run.out {
                artifacts::write_text(dir, "report.json", &artifacts::json(&report)?)?;
            }
            let dev = (report.writhe_mc - report.writhe_gauss).abs();
            if dev <= 3.0 * report.writhe_mc_stderr {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("outside tolerance: writhe_mc_3sigma = {dev}");
                Ok(ExitCode::from(3))
            }
        }
    }
}

/// Frame-free invariants for curves with no asymptotic framing.
#[derive(Serialize)]
pub struct BareReport {
    pub curve: String,
    pub writhe_gauss: f64,
    pub writhe_mc: f64,
    pub writhe_mc_stderr: f64,
    pub cr_by_direction: Vec<BareDirection>,
    pub rot: Option<i64>,
    pub sl: Option<i64>,
    pub skipped: Vec<String>,
}

#[derive(Serialize)]
pub struct BareDirection {
    pub direction: [f64; 3],
    pub crossing_number: i64,
}

pub fn bare_report(c: &Curve64, reason: String, run: &RunArgs) -> Result<BareReport> {
    let mut skipped = vec![format!("framing: {reason}")];
    let wr = writhe_gauss(c)?;
    let (mc, se) = writhe_average(c, run.dirs.unwrap_or(2000).max(100), run.seed)?;

    let mut dirs = Vec::new();
    if let Some(d) = run.direction {
        let u = Vector64::from_array(d).normalized();
        let crossings = self_crossings(c, u, 4096)?;
        dirs.push(BareDirection {
            direction: [u.x, u.y, u.z],
            crossing_number: crossing_number(&crossings),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    for _ in 0..8 {
        let (u, crossings) = random_admissible_direction(c, None, &mut rng)?;
        dirs.push(BareDirection {
            direction: [u.x, u.y, u.z],
            crossing_number: crossing_number(&crossings),
        });
    }

    let sl = match self_linking(c) {
        Ok(s) => Some(s.value),
        Err(Error::NoSelfLinking(msg)) => {
            skipped.push(format!("self-linking: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    let rot_dir = run
        .direction
        .map(Vector64::from_array)
        .unwrap_or_else(|| Vector64::new(0.0, 0.0, 1.0));
    let rot = match rotation_index(c, rot_dir) {
        Ok(r) => Some(r),
        Err(Error::NonGenericDirection(msg)) | Err(Error::ResolutionFailure(msg)) => {
            skipped.push(format!("rotation index: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };

    Ok(BareReport {
        curve: c.name.clone(),
        writhe_gauss: wr,
        writhe_mc: mc,
        writhe_mc_stderr: se,
        cr_by_direction: dirs,
        rot,
        sl,
        skipped,
    })
}

fn bare_csv(r: &BareReport) -> String {
    use std::fmt::Write as _;
    let mut s = String::from("name,value\n");
    let _ = writeln!(s, "curve,{}", r.curve);
    let _ = writeln!(s, "writhe_gauss,{}", r.writhe_gauss);
    let _ = writeln!(s, "writhe_mc,{}", r.writhe_mc);
    let _ = writeln!(s, "writhe_mc_stderr,{}", r.writhe_mc_stderr);
    for d in &r.cr_by_direction {
        let _ = writeln!(
            s,
            "cr[{} {} {}],{}",
            d.direction[0], d.direction[1], d.direction[2], d.crossing_number
        );
    }
    let _ = writeln!(s, "rot,{}", opt(r.rot));
    let _ = writeln!(s, "sl,{}", opt(r.sl));
    for sk in &r.skipped {
        let _ = writeln!(s, "skipped,{}", sk.replace(',', ";"));
    }
    s
}

fn opt(v: Option<i64>) -> String {
    v.map_or_else(|| "none".into(), |x| x.to_string())
}
