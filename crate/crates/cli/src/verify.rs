//! `verify`: cross-module identity checks on the built-in curves and a batch
//! of seeded random ones, reported as a machine-readable table. One row per
//! check; exit 0 only when every row passes.
//!
//! The `mutation_theorem1` row is a self-test of the checker itself: it
//! re-runs the crossing-count identity with the crossing signs deliberately
//! flipped and passes only if that corruption is detected.

use std::fmt::Write as _;
use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use curvature_core::curve::{builtin, fit_closure, random_band_limited, BuiltinParams};
use curvature_core::framing::asymptotic_normal;
use curvature_core::invariants::{linking_of_framing, twist, writhe_average, writhe_gauss};
use curvature_core::projection::{
    crossing_number, normal_direction_zeros, random_admissible_direction, self_crossings,
};
use curvature_core::{Curve64, Error, Framed64, Result, Vector64};

use crate::{artifacts, Format, RunArgs};

#[derive(Serialize)]
struct CheckRow {
    check: &'static str,
    curve: String,
    pass: bool,
    detail: String,
}

fn stream_seed(seed: u64, i: u64) -> u64 {
    seed ^ (i.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn run(run: &RunArgs, n_random: usize) -> Result<ExitCode> {
    let dirs = run.dirs.unwrap_or(400).max(100);
    let mut rows = Vec::new();

    let builtins = [
        ("coiled-trefoil", BuiltinParams::default()),
        (
            "torus-knot",
            BuiltinParams {
                p: 2,
                q: 5,
                ..BuiltinParams::default()
            },
        ),
        ("lifted-eight", BuiltinParams::default()),
    ];
    for (name, params) in builtins {
        let c = builtin(name, params)?;
        let framed = asymptotic_normal(&c, run.samples)?;
        framed_checks(&framed, run.seed, &mut rows)?;
        unframed_checks(&c, dirs, run.seed, &mut rows)?;
    }
    rows.push(mutation_check(run.samples, run.seed)?);

    for i in 0..n_random {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(run.seed, 0xC0 + i as u64));
        let c = random_band_limited(&mut rng, 6);
        let c = Curve64 {
            name: format!("random-{i}"),
            ..c
        };
        unframed_checks(&c, dirs, run.seed, &mut rows)?;
        rows.push(rigid_motion_check(&c)?);
    }

    match run.format {
        Format::Json => print!("{}", artifacts::json(&rows)?),
        Format::Csv => print!("{}", table_csv(&rows)),
    }
    if let Some(dir) = &run.out {
        artifacts::write_text(dir, "verify.json", &artifacts::json(&rows)?)?;
    }

    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        eprintln!("{} checks passed", rows.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{failed} of {} checks failed", rows.len());
        Ok(ExitCode::from(3))
    }
}

fn framed_checks(framed: &Framed64, seed: u64, rows: &mut Vec<CheckRow>) -> Result<()> {
    let c = &framed.curve;
    let lk = linking_of_framing(c, &framed.normal)?;
    let sign = framed.tau_g_sign() as i64;

    let mut bad = None;
    for i in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, i));
        let (u, crossings) = random_admissible_direction(c, Some(framed), &mut rng)?;
        let zeros = normal_direction_zeros(framed, u)?.len() as i64;
        let rhs = crossing_number(&crossings) + zeros / 2 * sign;
        if rhs != lk {
            bad = Some((u, rhs));
            break;
        }
    }
    rows.push(CheckRow {
        check: "theorem1",
        curve: c.name.clone(),
        pass: bad.is_none(),
        detail: match bad {
            None => format!("lk = {lk} over 8 directions"),
            Some((u, rhs)) => format!("rhs {rhs} != lk {lk} at [{} {} {}]", u.x, u.y, u.z),
        },
    });

    let wr = writhe_gauss(c)?;
    let (tw, _) = twist(c, &framed.normal)?;
    let resid = (lk as f64 - wr - tw).abs();
    rows.push(CheckRow {
        check: "calugareanu",
        curve: c.name.clone(),
        pass: resid < 1e-3,
        detail: format!("|Lk - Wr - Tw| = {resid:.3e}"),
    });
    Ok(())
}

fn unframed_checks(c: &Curve64, dirs: usize, seed: u64, rows: &mut Vec<CheckRow>) -> Result<()> {
    let wr = writhe_gauss(c)?;
    let (mc, se) = writhe_average(c, dirs, seed)?;
    let dev = (mc - wr).abs();
    rows.push(CheckRow {
        check: "writhe_mc",
        curve: c.name.clone(),
        pass: dev <= 3.0 * se,
        detail: format!("|mc - gauss| = {dev:.3e} vs 3se = {:.3e} over {dirs} directions", 3.0 * se),
    });

    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, 0xA11));
    let (u, crossings) = random_admissible_direction(c, None, &mut rng)?;
    let opposite = self_crossings(c, -u, 4096)?;
    let (a, b) = (crossing_number(&crossings), crossing_number(&opposite));
    rows.push(CheckRow {
        check: "antipodal",
        curve: c.name.clone(),
        pass: a == b && crossings.len() == opposite.len(),
        detail: format!(
            "cr(u) = {a} ({} crossings); cr(-u) = {b} ({} crossings)",
            crossings.len(),
            opposite.len()
        ),
    });
    Ok(())
}

/// Writhe is a rigid-motion invariant; rebuild the curve rotated and shifted
/// and compare.
fn rigid_motion_check(c: &Curve64) -> Result<CheckRow> {
    let (ca, sa) = (0.7f64.cos(), 0.7f64.sin());
    let (cb, sb) = (0.4f64.cos(), 0.4f64.sin());
    let shift = Vector64::new(0.3, -0.2, 0.5);
    let moved = fit_closure(&format!("{}-moved", c.name), 1024, |t| {
        let p = c.position(t);
        let q = Vector64::new(ca * p.x - sa * p.y, sa * p.x + ca * p.y, p.z);
        Vector64::new(q.x, cb * q.y - sb * q.z, sb * q.y + cb * q.z) + shift
    })?;
    let wr = writhe_gauss(c)?;
    let wr2 = writhe_gauss(&moved)?;
    let resid = (wr - wr2).abs();
    Ok(CheckRow {
        check: "rigid_motion_writhe",
        curve: c.name.clone(),
        pass: resid < 1e-6,
        detail: format!("|Wr - Wr_moved| = {resid:.3e}"),
    })
}

/// Negating every crossing sign must break the crossing-count identity on a
/// curve with a nonzero signed crossing number.
fn mutation_check(samples: usize, seed: u64) -> Result<CheckRow> {
    let c: Curve64 = builtin("lifted-eight", BuiltinParams::default())?;
    let framed = asymptotic_normal(&c, samples)?;
    let lk = linking_of_framing(&c, &framed.normal)?;
    let sign = framed.tau_g_sign() as i64;

    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, 0xB07));
    let mut pick = None;
    for _ in 0..32 {
        let (u, crossings) = random_admissible_direction(&c, Some(&framed), &mut rng)?;
        if crossing_number(&crossings) != 0 {
            pick = Some((u, crossings));
            break;
        }
    }
    let (u, crossings) = pick.ok_or(Error::SamplingFailure { tries: 32 })?;
    let zeros = normal_direction_zeros(&framed, u)?.len() as i64;
    let cr = crossing_number(&crossings);
    let honest = cr + zeros / 2 * sign;
    let corrupted = -cr + zeros / 2 * sign;
    Ok(CheckRow {
        check: "mutation_theorem1",
        curve: c.name.clone(),
        pass: honest == lk && corrupted != lk,
        detail: format!("honest rhs {honest} = lk {lk}; sign-flipped rhs {corrupted} rejected"),
    })
}

fn table_csv(rows: &[CheckRow]) -> String {
    let mut s = String::from("check,curve,pass,detail\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            r.check,
            r.curve,
            r.pass,
            r.detail.replace(',', ";")
        );
    }
    s
}
