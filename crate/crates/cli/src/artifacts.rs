//! Plain-data artifact writers: small CSV tables and JSON files. Floats go
//! through `Display`, which is the shortest round-trip form, so identical
//! runs produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use curvature_core::invariants::InvariantReport;
use curvature_core::projection::{Crossing, CrossingKind, PlanarProjection};
use curvature_core::{Curve64, Framed64, Result, Vector64};

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), text)?;
    Ok(())
}

pub fn json<S: Serialize>(value: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn samples_csv(c: &Curve64, n: usize) -> String {
    let mut s = String::from("t,x,y,z\n");
    for t in Curve64::grid(n, false) {
        let p = c.position(t);
        let _ = writeln!(s, "{t},{},{},{}", p.x, p.y, p.z);
    }
    s
}

pub fn projection_csv(c: &Curve64, u: Vector64, n: usize) -> String {
    let proj = PlanarProjection::new(c, u);
    let mut s = String::from("t,x,y,height\n");
    for t in Curve64::grid(n, false) {
        let (x, y) = proj.point(t);
        let _ = writeln!(s, "{t},{x},{y},{}", proj.height(t));
    }
    s
}

pub fn crossings_csv(crossings: &[Crossing<f64>]) -> String {
    let mut s = String::from("t_plus,t_minus,x,y,sign,angle,height_gap,kind\n");
    for c in crossings {
        let kind = match c.kind {
            CrossingKind::SelfCrossing => "self",
            CrossingKind::Local => "local",
            CrossingKind::Nonlocal => "nonlocal",
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{kind}",
            c.t_plus, c.t_minus, c.point.0, c.point.1, c.sign, c.angle, c.height_gap
        );
    }
    s
}

pub fn spherical_image_csv(f: &Framed64, n: usize) -> String {
    let mut s = String::from("t,nx,ny,nz\n");
    for t in Curve64::grid(n, false) {
        let v = f.normal.unit(t);
        let _ = writeln!(s, "{t},{},{},{}", v.x, v.y, v.z);
    }
    s
}

pub fn tangent_indicatrix_csv(c: &Curve64, n: usize) -> String {
    let mut s = String::from("t,tx,ty,tz\n");
    for t in Curve64::grid(n, false) {
        let v = c.jet(t).d1.normalized();
        let _ = writeln!(s, "{t},{},{},{}", v.x, v.y, v.z);
    }
    s
}

/// Anchor points p1..pk of a constructed curve, as marks on its tangent
/// indicatrix.
pub fn anchors_csv(c: &Curve64, anchors: &[f64]) -> String {
    let mut s = String::from("i,t,tx,ty,tz\n");
    for (i, &t) in anchors.iter().enumerate() {
        let v = c.jet(t).d1.normalized();
        let _ = writeln!(s, "{},{t},{},{},{}", i + 1, v.x, v.y, v.z);
    }
    s
}

pub fn frames_csv(f: &Framed64, n: usize) -> String {
    let mut s = String::from("t,tx,ty,tz,npx,npy,npz,nx,ny,nz,kappa_g,tau_g\n");
    for t in Curve64::grid(n, false) {
        let tv = f.curve.jet(t).d1.normalized();
        let nv = f.normal.unit(t);
        let np = nv.cross(tv);
        let g = f.geodesic(t);
        let _ = writeln!(
            s,
            "{t},{},{},{},{},{},{},{},{},{},{},{}",
            tv.x, tv.y, tv.z, np.x, np.y, np.z, nv.x, nv.y, nv.z, g.kappa_g, g.tau_g
        );
    }
    s
}

pub fn residuals_csv(r: &InvariantReport, tol: f64) -> String {
    let mut s = String::from("kind,name,value,pass\n");
    let _ = writeln!(
        s,
        "residual,lk_integer,{},{}",
        r.lk_residual,
        r.lk_residual.is_finite() && r.lk_residual <= tol
    );
    for (k, v) in &r.identity_residuals {
        let _ = writeln!(s, "residual,{k},{v},{}", v.is_finite() && *v <= tol);
    }
    for (k, ok) in &r.inequality_flags {
        let _ = writeln!(s, "flag,{k},{ok},{ok}");
    }
    s
}
