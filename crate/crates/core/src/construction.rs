//! Closing a curve with a prescribed normal loop.
//!
//! Start from an embedded loop n on the unit sphere, derive the tangent
//! field T = n×n'/|n'| it forces on any curve framed by n, then pick a
//! positive speed ρ — a combination of bump functions — so that Γ' = ρT
//! integrates to a closed curve. The pipeline produces built-in `example2`.

use crate::curve::{fourier_fit, ClosedCurve, TrigSeries};
use crate::error::{Error, Result};
use crate::framing::{FramedCurve, NormalField};
use crate::numeric::affine_solution_set;
use crate::numeric::roots_periodic;
use crate::scalar::Real;
use crate::vec3::Vec3;
use serde::Serialize;

/// A closed loop on the unit sphere with two derivatives.
#[derive(Clone, Debug)]
pub struct SphericalLoop<T: Real> {
    kind: LoopKind<T>,
}

#[derive(Clone, Debug)]
enum LoopKind<T: Real> {
    /// the scaled oscillating band (3+sin t)·(cos, sin)(5/2·cos t) with the
    /// third component completing it to unit length
    Band { sigma: T },
    Series([TrigSeries<T>; 3]),
}

impl<T: Real> SphericalLoop<T> {
    /// Loop given by trigonometric components; must already be unit-norm.
    pub fn from_series(xyz: [TrigSeries<T>; 3]) -> Result<Self> {
        let out = Self {
            kind: LoopKind::Series(xyz),
        };
        for t in ClosedCurve::<T>::grid(2048, true) {
            let (n, _, _) = out.jet(t);
            if (n.norm() - T::one()).abs() > T::of(1e-12) {
                return Err(Error::InvalidSpec(format!(
                    "spherical loop leaves the unit sphere at t={}",
                    t.to_f64().unwrap_or(f64::NAN)
                )));
            }
        }
        Ok(out)
    }

    pub fn sigma(&self) -> Option<T> {
        match &self.kind {
            LoopKind::Band { sigma } => Some(*sigma),
            LoopKind::Series(_) => None,
        }
    }

    /// n, n', n'' at t.
    pub fn jet(&self, t: T) -> (Vec3<T>, Vec3<T>, Vec3<T>) {
        match &self.kind {
            LoopKind::Band { sigma } => band_jet(*sigma, t),
            LoopKind::Series(xyz) => {
                let ev = |m: usize| {
                    Vec3::new(xyz[0].eval(t, m), xyz[1].eval(t, m), xyz[2].eval(t, m))
                };
                (ev(0), ev(1), ev(2))
            }
        }
    }

    /// Fitted field representation for framing a constructed curve.
    pub fn normal_field(&self, n: usize) -> Result<NormalField<T>> {
        let half = T::of(0.5);
        let samples: Vec<Vec3<T>> = (0..n)
            .map(|k| {
                let t = T::two_pi() * (T::of_usize(k) + half) / T::of_usize(n);
                self.jet(t).0
            })
            .collect();
        NormalField::from_samples_offset(&samples)
    }
}

fn band_jet<T: Real>(sigma: T, t: T) -> (Vec3<T>, Vec3<T>, Vec3<T>) {
    let (st, ct) = t.sin_cos();
    let a = T::of(3.0) + st;
    let (a1, a2) = (ct, -st);
    let w = T::of(2.5) * ct;
    let (w1, w2) = (-T::of(2.5) * st, -T::of(2.5) * ct);
    let (sw, cw) = w.sin_cos();
    let two = T::of(2.0);

    let n1 = sigma * a * cw;
    let n1p = sigma * (a1 * cw - a * sw * w1);
    let n1pp = sigma * (a2 * cw - two * a1 * sw * w1 - a * cw * w1 * w1 - a * sw * w2);

    let n2 = sigma * a * sw;
    let n2p = sigma * (a1 * sw + a * cw * w1);
    let n2pp = sigma * (a2 * sw + two * a1 * cw * w1 - a * sw * w1 * w1 + a * cw * w2);

    let q = T::one() - sigma * sigma * a * a;
    let q1 = -two * sigma * sigma * a * a1;
    let q2 = -two * sigma * sigma * (a1 * a1 + a * a2);
    let n3 = q.sqrt();
    let n3p = q1 / (two * n3);
    let n3pp = q2 / (two * n3) - q1 * q1 / (T::of(4.0) * q * n3);

    (
        Vec3::new(n1, n2, n3),
        Vec3::new(n1p, n2p, n3p),
        Vec3::new(n1pp, n2pp, n3pp),
    )
}

/// The scaled band loop; σ must stay below 1/4 so the completing component
/// is real (the band magnitude peaks at 4σ, at t = π/2).
pub fn example2_normal<T: Real>(sigma: T) -> Result<SphericalLoop<T>> {
    if sigma <= T::zero() {
        return Err(Error::InvalidSpec(format!(
            "band scale must be positive, got {}",
            sigma.to_f64().unwrap_or(f64::NAN)
        )));
    }
    if sigma * T::of(4.0) >= T::one() {
        return Err(Error::ImaginaryComponent {
            sigma: sigma.to_f64().unwrap_or(f64::NAN),
            at: std::f64::consts::FRAC_PI_2,
        });
    }
    Ok(SphericalLoop {
        kind: LoopKind::Band { sigma },
    })
}

/// Unit tangent field T = n×n'/|n'| forced by a normal loop, with its
/// geodesic torsion |n'| (per raw parameter; arclength rescaling happens
/// once a curve exists).
#[derive(Clone, Debug)]
pub struct TangentField<T: Real> {
    pub normal_loop: SphericalLoop<T>,
}

/// Derive the tangent field of a loop, verifying the loop is immersed.
pub fn tangent_from_normal<T: Real>(normal_loop: &SphericalLoop<T>) -> Result<TangentField<T>> {
    for t in ClosedCurve::<T>::grid(4096, true) {
        let (_, n1, _) = normal_loop.jet(t);
        if n1.norm() < T::of(1e-10) {
            return Err(Error::NotImmersed {
                at: t.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(TangentField {
        normal_loop: normal_loop.clone(),
    })
}

impl<T: Real> TangentField<T> {
    pub fn tangent(&self, t: T) -> Vec3<T> {
        let (n, n1, _) = self.normal_loop.jet(t);
        n.cross(n1) / n1.norm()
    }

    /// |n'| per raw parameter.
    pub fn tau_g(&self, t: T) -> T {
        self.normal_loop.jet(t).1.norm()
    }

    pub fn tangent_deriv(&self, t: T) -> Vec3<T> {
        let (n, n1, n2) = self.normal_loop.jet(t);
        let w = n1.norm();
        let tangent = n.cross(n1) / w;
        (n.cross(n2) - tangent * (n1.dot(n2) / w)) / w
    }

    pub fn samples(&self, n: usize) -> Vec<Vec3<T>> {
        ClosedCurve::<T>::grid(n, true)
            .into_iter()
            .map(|t| self.tangent(t))
            .collect()
    }

    /// Parameters where T stalls (|T'| = 0): the cusps of the T-trace, which
    /// become the inflections of any curve built on this field. T' is always
    /// parallel to n×T, so the signed component gives a transversal zero.
    pub fn cusps(&self) -> Vec<T> {
        roots_periodic(
            |t| {
                let (n, _, _) = self.normal_loop.jet(t);
                self.tangent_deriv(t).dot(n.cross(self.tangent(t)))
            },
            4096,
        )
    }
}

/// Support-function test for 0 ∈ int conv(T): margin = min over unit w of
/// max_t ⟨T(t), w⟩, positive exactly when the origin is interior.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HullCheck<T> {
    pub contains_origin: bool,
    pub margin: T,
    pub boundary_degenerate: bool,
}

pub fn hull_contains_origin<T: Real>(samples: &[Vec3<T>]) -> HullCheck<T> {
    debug_assert!(samples.len() >= 256);
    let support = |w: Vec3<T>| -> T {
        samples
            .iter()
            .fold(T::of(-2.0), |acc, &p| acc.max(p.dot(w)))
    };
    // coarse deterministic sweep: Fibonacci lattice over the sphere
    let m = 4096usize;
    let golden = T::of(0.618_033_988_749_894_9);
    let mut best_w = Vec3::new(T::zero(), T::zero(), T::one());
    let mut best = support(best_w);
    for k in 0..m {
        let z = T::one() - T::of(2.0) * (T::of_usize(k) + T::of(0.5)) / T::of_usize(m);
        let r = (T::one() - z * z).max(T::zero()).sqrt();
        let ang = T::two_pi() * (T::of_usize(k) * golden).fract();
        let w = Vec3::new(r * ang.cos(), r * ang.sin(), z);
        let h = support(w);
        if h < best {
            best = h;
            best_w = w;
        }
    }
    // shrinking local caps around the incumbent
    let mut radius = T::of(0.3);
    for _ in 0..28 {
        let e1 = best_w.any_orthogonal();
        let e2 = best_w.cross(e1).normalized();
        for j in 0..32 {
            let ang = T::two_pi() * T::of_usize(j) / T::of(32.0);
            let w = (best_w + (e1 * ang.cos() + e2 * ang.sin()) * radius).normalized();
            let h = support(w);
            if h < best {
                best = h;
                best_w = w;
            }
        }
        radius = radius * T::of(0.5);
    }
    let tol = T::of(1e-4);
    HullCheck {
        contains_origin: best > tol,
        margin: best,
        boundary_degenerate: best.abs() <= tol,
    }
}

/// Periodic bump family φ_i(t) ∝ (offset + cos(t − t_i))^exponent, each
/// normalized to unit integral.
#[derive(Clone, Debug)]
pub struct BumpBasis<T: Real> {
    pub anchors: Vec<T>,
    pub exponent: u32,
    pub offset: T,
    norm: T,
}

impl<T: Real> BumpBasis<T> {
    pub fn new(anchors: Vec<T>, exponent: u32, offset: T) -> Result<Self> {
        if offset <= T::one() {
            return Err(Error::InvalidSpec(format!(
                "bump offset must exceed 1 for positivity, got {}",
                offset.to_f64().unwrap_or(f64::NAN)
            )));
        }
        if exponent == 0 || anchors.is_empty() {
            return Err(Error::InvalidSpec(
                "bump basis needs a positive exponent and at least one anchor".into(),
            ));
        }
        // (offset + cos)^k is a degree-k trigonometric polynomial, so the
        // uniform average with more than k+1 nodes integrates it exactly
        let n = (4 * exponent as usize + 64).next_power_of_two();
        let mut acc = T::zero();
        for t in ClosedCurve::<T>::grid(n, false) {
            acc = acc + (offset + t.cos()).powi(exponent as i32);
        }
        let norm = acc * T::two_pi() / T::of_usize(n);
        Ok(Self {
            anchors,
            exponent,
            offset,
            norm,
        })
    }

    pub fn count(&self) -> usize {
        self.anchors.len()
    }

    pub fn phi(&self, i: usize, t: T) -> T {
        (self.offset + (t - self.anchors[i]).cos()).powi(self.exponent as i32) / self.norm
    }
}

/// The five anchor parameters used by the built-in construction.
pub fn default_anchors<T: Real>() -> Vec<T> {
    let pi6 = T::two_pi() / T::of(12.0);
    vec![
        pi6 * T::of(7.0),
        pi6 * T::of(11.0),
        pi6,
        pi6 * T::of(5.0),
        pi6 * T::of(3.0),
    ]
}

/// Positive weights closing ∮ ρT: coefficients, moments, and the achieved
/// residual; `rho` evaluates ρ = Σ c_i φ_i.
#[derive(Clone, Debug)]
pub struct ClosureSolution<T: Real> {
    pub coefficients: Vec<T>,
    pub moments: Vec<Vec3<T>>,
    pub residual: T,
    pub margin: T,
    pub basis: BumpBasis<T>,
}

impl<T: Real> ClosureSolution<T> {
    pub fn rho(&self, t: T) -> T {
        let mut acc = T::zero();
        for (i, &c) in self.coefficients.iter().enumerate() {
            acc = acc + c * self.basis.phi(i, t);
        }
        acc
    }
}

/// Solve Σ c_i p_i = 0 with p_i = ∫ φ_i T dt, c_1 normalized to 1 and all
/// c_i required positive. The solution set is affine; the returned point
/// maximizes the smallest coefficient over it, so no symmetry among the
/// anchors is assumed.
pub fn closure_coefficients<T: Real>(
    tangent: impl Fn(T) -> Vec3<T>,
    basis: &BumpBasis<T>,
) -> Result<ClosureSolution<T>> {
    let k = basis.count();
    if k < 4 {
        return Err(Error::InvalidSpec(format!(
            "closing a space curve needs at least four bumps, got {k}"
        )));
    }
    let n = (8 * basis.exponent as usize).max(4096).next_power_of_two();
    let ts = ClosedCurve::<T>::grid(n, false);
    let tangents: Vec<Vec3<T>> = ts.iter().map(|&t| tangent(t)).collect();
    let h = T::two_pi() / T::of_usize(n);
    let moments: Vec<Vec3<T>> = (0..k)
        .map(|i| {
            let mut acc = Vec3::new(T::zero(), T::zero(), T::zero());
            for (j, &t) in ts.iter().enumerate() {
                acc = acc + tangents[j] * basis.phi(i, t);
            }
            acc * h
        })
        .collect();

    // c_1 = 1; unknowns c_2..c_k solve a 3-row system
    let rows: Vec<Vec<T>> = (0..3)
        .map(|c| (1..k).map(|i| moments[i].to_array()[c]).collect())
        .collect();
    let rhs: Vec<T> = (0..3).map(|c| -moments[0].to_array()[c]).collect();
    let (particular, null_basis) = affine_solution_set(&rows, &rhs)?;

    let mut x = particular;
    // maximize min_i x_i over the affine set: the objective is concave and
    // piecewise linear along any line, so exact ternary search per direction
    let sweeps = if null_basis.is_empty() { 0 } else { 3 };
    for _ in 0..sweeps {
        for dir in &null_basis {
            let f = |lam: T| -> T {
                x.iter()
                    .zip(dir)
                    .map(|(&xi, &di)| xi + lam * di)
                    .fold(T::of(f64::INFINITY), |m, v| m.min(v))
            };
            let (mut lo, mut hi) = (T::of(-1e6), T::of(1e6));
            for _ in 0..220 {
                let third = (hi - lo) / T::of(3.0);
                let (l1, l2) = (lo + third, hi - third);
                if f(l1) < f(l2) {
                    lo = l1;
                } else {
                    hi = l2;
                }
            }
            let lam = (lo + hi) * T::of(0.5);
            for (xi, &di) in x.iter_mut().zip(dir) {
                *xi = *xi + lam * di;
            }
        }
    }

    let margin = x.iter().fold(T::of(f64::INFINITY), |m, &v| m.min(v));
    if margin <= T::zero() {
        return Err(Error::ClosureInfeasible {
            margin: margin.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut coefficients = vec![T::one()];
    coefficients.extend_from_slice(&x);
    let mut sum = Vec3::new(T::zero(), T::zero(), T::zero());
    for (i, &c) in coefficients.iter().enumerate() {
        sum = sum + moments[i] * c;
    }
    let residual = sum.norm();
    if residual >= T::of(1e-10) {
        return Err(Error::QuadratureFailure(format!(
            "closure system solved to residual {} only",
            residual.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(ClosureSolution {
        coefficients,
        moments,
        residual,
        margin,
        basis: basis.clone(),
    })
}

/// Γ(t) = ∫₀ᵗ ρ(s)T(s) ds as a Fourier-backed closed curve: the sampled
/// integrand is fitted, the fit integrated term by term. The mean of ρT is
/// the closure defect and must vanish.
pub fn integrate_curve<T: Real>(
    name: &str,
    n: usize,
    rho: impl Fn(T) -> T,
    tangent: impl Fn(T) -> Vec3<T>,
) -> Result<ClosedCurve<T>> {
    let samples: Vec<Vec3<T>> = ClosedCurve::<T>::grid(n, false)
        .into_iter()
        .map(|t| tangent(t) * rho(t))
        .collect();
    let mut mean = Vec3::new(T::zero(), T::zero(), T::zero());
    for &s in &samples {
        mean = mean + s;
    }
    mean = mean / T::of_usize(n);
    let gap = mean.norm() * T::two_pi();
    if gap >= T::of(1e-8) {
        return Err(Error::ClosureFailure {
            gap: gap.to_f64().unwrap_or(f64::NAN),
            limit: 1e-8,
        });
    }
    let velocity = fourier_fit(&samples)?;
    let mut xyz: [TrigSeries<T>; 3] = [
        TrigSeries::constant(T::zero()),
        TrigSeries::constant(T::zero()),
        TrigSeries::constant(T::zero()),
    ];
    for c in 0..3 {
        let v = &velocity.xyz[c];
        let mut s = TrigSeries::constant(T::zero());
        let mut at_zero = T::zero();
        for (idx, (&ak, &bk)) in v.a.iter().zip(&v.b).enumerate() {
            let kf = T::of_usize(idx + 1);
            s.a.push(-bk / kf);
            s.b.push(ak / kf);
            at_zero = at_zero - bk / kf;
        }
        s.a0 = -at_zero; // Γ(0) = 0
        xyz[c] = s;
    }
    Ok(ClosedCurve {
        name: name.into(),
        xyz,
    })
}

/// Everything the pipeline chose, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub sigma: f64,
    pub anchors: Vec<f64>,
    pub exponent: u32,
    pub offset: f64,
    pub coefficients: Vec<f64>,
    pub closure_residual: f64,
    pub closure_margin: f64,
    pub hull_margin: f64,
    pub closure_gap: f64,
}

pub struct Example2<T: Real> {
    pub framed: FramedCurve<T>,
    pub solution: ClosureSolution<T>,
    pub provenance: Provenance,
}

/// Full construction: band loop → tangent field → hull test → closing
/// weights → integrated framed curve. The bump exponent is escalated until
/// the positive solution has a comfortable margin; sharper bumps concentrate
/// the moments toward the anchor tangents, which is what feasibility needs.
pub fn example2<T: Real>(sigma: T) -> Result<Example2<T>> {
    let normal_loop = example2_normal(sigma)?;
    let field = tangent_from_normal(&normal_loop)?;
    let hull = hull_contains_origin(&field.samples(1024));
    if !hull.contains_origin {
        return Err(Error::ClosureInfeasible {
            margin: hull.margin.to_f64().unwrap_or(f64::NAN),
        });
    }
    let anchors = default_anchors::<T>();
    let offset = T::of(1.1);
    let mut best: Option<(u32, ClosureSolution<T>)> = None;
    let mut worst_infeasible = f64::NEG_INFINITY;
    for exponent in [10u32, 12, 14] {
        let basis = BumpBasis::new(anchors.clone(), exponent, offset)?;
        match closure_coefficients(|t| field.tangent(t), &basis) {
            Ok(sol) => {
                let good = sol.margin >= T::of(0.02);
                if best
                    .as_ref()
                    .map_or(true, |(_, prev)| sol.margin > prev.margin)
                {
                    best = Some((exponent, sol));
                }
                if good {
                    break;
                }
            }
            Err(Error::ClosureInfeasible { margin }) => {
                worst_infeasible = worst_infeasible.max(margin);
            }
            Err(e) => return Err(e),
        }
    }
    let Some((exponent, solution)) = best else {
        return Err(Error::ClosureInfeasible {
            margin: worst_infeasible,
        });
    };
    let curve = integrate_curve(
        "example2",
        4096,
        |t| solution.rho(t),
        |t| field.tangent(t),
    )?;
    let mut gap_mean = Vec3::new(T::zero(), T::zero(), T::zero());
    let n_gap = 4096usize;
    for t in ClosedCurve::<T>::grid(n_gap, false) {
        gap_mean = gap_mean + field.tangent(t) * solution.rho(t);
    }
    let closure_gap = (gap_mean / T::of_usize(n_gap)).norm() * T::two_pi();
    let normal = normal_loop.normal_field(2048)?;
    let framed = FramedCurve::new(curve, normal)?;
    let provenance = Provenance {
        sigma: sigma.to_f64().unwrap_or(f64::NAN),
        anchors: anchors
            .iter()
            .map(|a| a.to_f64().unwrap_or(f64::NAN))
            .collect(),
        exponent,
        offset: offset.to_f64().unwrap_or(f64::NAN),
        coefficients: solution
            .coefficients
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect(),
        closure_residual: solution.residual.to_f64().unwrap_or(f64::NAN),
        closure_margin: solution.margin.to_f64().unwrap_or(f64::NAN),
        hull_margin: hull.margin.to_f64().unwrap_or(f64::NAN),
        closure_gap: closure_gap.to_f64().unwrap_or(f64::NAN),
    };
    Ok(Example2 {
        framed,
        solution,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integrate_periodic;

    fn great_circle_loop() -> SphericalLoop<f64> {
        let mut x = TrigSeries::constant(0.0);
        x.a.push(1.0);
        x.b.push(0.0);
        let mut y = TrigSeries::constant(0.0);
        y.a.push(0.0);
        y.b.push(1.0);
        let z = TrigSeries::constant(0.0);
        SphericalLoop::from_series([x, y, z]).unwrap()
    }

    fn latitude_loop(eps: f64) -> SphericalLoop<f64> {
        let c = (1.0f64 - eps * eps).sqrt();
        let mut x = TrigSeries::constant(0.0);
        x.a.push(eps);
        x.b.push(0.0);
        let mut y = TrigSeries::constant(0.0);
        y.a.push(0.0);
        y.b.push(eps);
        let z = TrigSeries::constant(c);
        SphericalLoop::from_series([x, y, z]).unwrap()
    }

    #[test]
    fn band_is_unit_and_immersed() {
        let lp = example2_normal(0.22f64).unwrap();
        for t in ClosedCurve::<f64>::grid(2048, true) {
            let (n, n1, _) = lp.jet(t);
            assert!((n.norm() - 1.0).abs() < 1e-14, "norm off at t={t}");
            assert!(n1.norm() > 1e-3);
        }
    }

    #[test]
    fn band_scale_above_quarter_is_imaginary() {
        match example2_normal(0.3f64) {
            Err(Error::ImaginaryComponent { sigma, at }) => {
                assert!((sigma - 0.3).abs() < 1e-15);
                assert!((at - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
            }
            other => panic!("expected imaginary component, got {other:?}"),
        }
    }

    #[test]
    fn tangent_is_unit_and_orthogonal() {
        let lp = example2_normal(0.22f64).unwrap();
        let tf = tangent_from_normal(&lp).unwrap();
        for t in ClosedCurve::<f64>::grid(4096, true) {
            let (n, _, _) = lp.jet(t);
            let tang = tf.tangent(t);
            assert!(tang.dot(n).abs() < 1e-12);
            assert!((tang.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn band_tangent_has_two_cusps() {
        let lp = example2_normal(0.22f64).unwrap();
        let tf = tangent_from_normal(&lp).unwrap();
        let cusps = tf.cusps();
        assert_eq!(cusps.len(), 2, "cusps at {cusps:?}");
        for &t in &cusps {
            assert!(tf.tangent_deriv(t).norm() < 1e-6);
        }
    }

    #[test]
    fn great_circle_tangent_is_the_pole() {
        let tf = tangent_from_normal(&great_circle_loop()).unwrap();
        for t in ClosedCurve::<f64>::grid(256, true) {
            let tang = tf.tangent(t);
            assert!((tang - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn hull_of_great_circle_is_boundary_degenerate() {
        let samples: Vec<Vec3<f64>> = ClosedCurve::<f64>::grid(512, true)
            .into_iter()
            .map(|t| Vec3::new(t.cos(), t.sin(), 0.0))
            .collect();
        let hull = hull_contains_origin(&samples);
        assert!(!hull.contains_origin);
        assert!(hull.boundary_degenerate);
        assert!(hull.margin.abs() < 1e-4);
    }

    #[test]
    fn hull_of_cap_field_excludes_origin() {
        let tf = tangent_from_normal(&latitude_loop(0.1)).unwrap();
        let hull = hull_contains_origin(&tf.samples(512));
        assert!(!hull.contains_origin);
        assert!(!hull.boundary_degenerate);
        assert!((hull.margin + 0.1).abs() < 1e-3);
    }

    #[test]
    fn bumps_integrate_to_one() {
        let basis = BumpBasis::new(default_anchors::<f64>(), 14, 1.1f64).unwrap();
        for i in 0..basis.count() {
            let total = integrate_periodic(|t| basis.phi(i, t), 1e-12).unwrap();
            assert!((total - 1.0).abs() < 1e-10);
            for t in ClosedCurve::<f64>::grid(256, false) {
                assert!(basis.phi(i, t) > 0.0);
            }
        }
    }

    #[test]
    fn symmetric_tetrahedral_field_gets_equal_coefficients() {
        // four bump-blended tetrahedron vertices, cyclically permuted by the
        // rotoreflection (x,y,z) -> (y,-x,-z); anchors a quarter turn apart
        let s = 1.0f64 / 3.0f64.sqrt();
        let verts = [
            Vec3::new(s, s, s),
            Vec3::new(s, -s, -s),
            Vec3::new(-s, -s, s),
            Vec3::new(-s, s, -s),
        ];
        let q = std::f64::consts::FRAC_PI_2;
        let anchors: Vec<f64> = (0..4).map(|j| q / 2.0 + q * j as f64).collect();
        let field = |t: f64| -> Vec3<f64> {
            let mut acc = Vec3::new(0.0, 0.0, 0.0);
            for (j, v) in verts.iter().enumerate() {
                let w = (1.1 + (t - anchors[j]).cos()).powi(8);
                acc = acc + *v * w;
            }
            acc.normalized()
        };
        let basis = BumpBasis::new(anchors.clone(), 10, 1.1f64).unwrap();
        let sol = closure_coefficients(field, &basis).unwrap();
        for &c in &sol.coefficients {
            assert!((c - 1.0).abs() < 1e-9, "coefficients {:?}", sol.coefficients);
        }
        assert!(sol.residual < 1e-10);
    }

    #[test]
    fn one_sided_field_is_infeasible() {
        let tf = tangent_from_normal(&latitude_loop(0.3)).unwrap();
        let basis = BumpBasis::new(default_anchors::<f64>(), 10, 1.1f64).unwrap();
        match closure_coefficients(|t| tf.tangent(t), &basis) {
            Err(Error::ClosureInfeasible { margin }) => assert!(margin <= 0.0),
            other => panic!("expected infeasible closure, got {other:?}"),
        }
    }

    #[test]
    fn unit_speed_great_circle_tangent_closes_to_a_circle() {
        let curve = integrate_curve(
            "circle-from-tangent",
            256,
            |_| 1.0f64,
            |t: f64| Vec3::new(t.cos(), t.sin(), 0.0),
        )
        .unwrap();
        let center = Vec3::new(0.0, 1.0, 0.0);
        for t in ClosedCurve::<f64>::grid(128, true) {
            let p = curve.position(t);
            assert!(((p - center).norm() - 1.0).abs() < 1e-12);
            assert!(p.z.abs() < 1e-12);
        }
        assert!((curve.position(0.0)).norm() < 1e-12);
    }

    #[test]
    fn perturbed_weights_fail_to_close() {
        let built = example2(0.22f64).unwrap();
        let mut sol = built.solution.clone();
        let last = sol.coefficients.len() - 1;
        sol.coefficients[last] = sol.coefficients[last] * 1.1;
        let field = tangent_from_normal(&example2_normal(0.22f64).unwrap()).unwrap();
        match integrate_curve("broken", 4096, |t| sol.rho(t), |t| field.tangent(t)) {
            Err(Error::ClosureFailure { gap, .. }) => assert!(gap > 1e-8),
            other => panic!("expected closure failure, got {other:?}"),
        }
    }

    #[test]
    fn pipeline_builds_a_valid_framed_curve() {
        let built = example2(0.22f64).unwrap();
        let p = &built.provenance;
        assert_eq!(p.exponent, 14);
        assert!(p.closure_residual < 1e-10);
        assert!(p.closure_gap < 1e-8);
        assert!(p.closure_margin >= 0.02);
        assert!(p.hull_margin > 0.2);
        assert!((p.coefficients[2] - p.coefficients[3]).abs() < 1e-6);
        let (lo, _) = built.framed.tau_g_range(2048);
        assert!(lo > 0.0, "geodesic torsion must stay positive, min {lo}");
        assert_eq!(built.framed.validate(1024).unwrap(), 1.0);
    }
}
