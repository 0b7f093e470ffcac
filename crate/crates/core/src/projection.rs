//! Planar projections of space curves: crossing detection with Newton
//! refinement, crossing numbers, ribbon (curve vs. push-off) diagrams,
//! rotation index, planar inflections, star-shapedness, and admissible
//! direction sampling.

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::framing::FramedCurve;
use crate::numeric::{random_unit, roots_periodic, winding_turns};
use crate::scalar::Real;
use crate::vec3::Vec3;
use rand::Rng;

/// Projection direction with a deterministic right-handed basis
/// (e1, e2, u).
#[derive(Clone, Copy, Debug)]
pub struct Direction<T> {
    pub u: Vec3<T>,
    pub e1: Vec3<T>,
    pub e2: Vec3<T>,
}

impl<T: Real> Direction<T> {
    pub fn new(u: Vec3<T>) -> Self {
        let u = u.normalized();
        let z = Vec3::new(T::zero(), T::zero(), T::one());
        let x = Vec3::new(T::one(), T::zero(), T::zero());
        let cand = u.cross(z);
        let e1 = if cand.norm() < T::of(1e-6) {
            u.cross(x).normalized()
        } else {
            cand.normalized()
        };
        let e2 = u.cross(e1);
        Self { u, e1, e2 }
    }

    pub fn plane(&self, v: Vec3<T>) -> (T, T) {
        (v.dot(self.e1), v.dot(self.e2))
    }

    pub fn height(&self, v: Vec3<T>) -> T {
        v.dot(self.u)
    }
}

/// A curve seen along a direction: planar coordinates plus height.
#[derive(Clone)]
pub struct PlanarProjection<'a, T> {
    pub curve: &'a ClosedCurve<T>,
    pub dir: Direction<T>,
}

impl<'a, T: Real> PlanarProjection<'a, T> {
    pub fn new(curve: &'a ClosedCurve<T>, u: Vec3<T>) -> Self {
        Self {
            curve,
            dir: Direction::new(u),
        }
    }

    pub fn point(&self, t: T) -> (T, T) {
        self.dir.plane(self.curve.position(t))
    }

    pub fn velocity(&self, t: T) -> (T, T) {
        self.dir.plane(self.curve.deriv(t, 1))
    }

    pub fn height(&self, t: T) -> T {
        self.dir.height(self.curve.position(t))
    }
}

/// One transversal double point of a projected diagram.
#[derive(Clone, Copy, Debug)]
pub struct Crossing<T> {
    /// parameter of the strand with the larger height
    pub t_plus: T,
    /// parameter of the strand with the smaller height
    pub t_minus: T,
    pub point: (T, T),
    pub sign: i8,
    pub angle: T,
    pub height_gap: T,
    pub kind: CrossingKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingKind {
    SelfCrossing,
    Local,
    Nonlocal,
}

fn cross2<T: Real>(a: (T, T), b: (T, T)) -> T {
    a.0 * b.1 - a.1 * b.0
}

/// Polyline sampled from a parametric plane curve, with a uniform spatial
/// hash over segment bounding boxes for candidate-pair generation.
struct Polyline<T> {
    ts: Vec<T>,
    pts: Vec<(T, T)>,
}

impl<T: Real> Polyline<T> {
    fn sample(f: &impl Fn(T) -> (T, T), n: usize) -> Self {
        let ts = ClosedCurve::<T>::grid(n, true);
        let pts = ts.iter().map(|&t| f(t)).collect();
        Self { ts, pts }
    }

    fn seg(&self, i: usize) -> ((T, T), (T, T)) {
        let n = self.pts.len();
        (self.pts[i], self.pts[(i + 1) % n])
    }
}

fn seg_intersect<T: Real>(a: ((T, T), (T, T)), b: ((T, T), (T, T))) -> Option<(T, T)> {
    let r = (a.1 .0 - a.0 .0, a.1 .1 - a.0 .1);
    let s = (b.1 .0 - b.0 .0, b.1 .1 - b.0 .1);
    let den = cross2(r, s);
    if den == T::zero() {
        return None;
    }
    let q = (b.0 .0 - a.0 .0, b.0 .1 - a.0 .1);
    let tt = cross2(q, s) / den;
    let uu = cross2(q, r) / den;
    if tt >= T::zero() && tt < T::one() && uu >= T::zero() && uu < T::one() {
        Some((tt, uu))
    } else {
        None
    }
}

/// All candidate parameter pairs where two (possibly identical) sampled
/// plane curves intersect. For the self case pass the same polyline twice
/// with `same = true` to skip adjacent segments.
fn candidate_pairs<T: Real>(pa: &Polyline<T>, pb: &Polyline<T>, same: bool) -> Vec<(T, T)> {
    let na = pa.pts.len();
    let nb = pb.pts.len();
    // bounding box of everything
    let mut lo = (T::infinity(), T::infinity());
    let mut hi = (T::neg_infinity(), T::neg_infinity());
    for &(x, y) in pa.pts.iter().chain(pb.pts.iter()) {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let cells = 96usize;
    let span = ((hi.0 - lo.0).max(T::of(1e-30)), (hi.1 - lo.1).max(T::of(1e-30)));
    let cell_of = |x: T, y: T| -> (isize, isize) {
        let cx = ((x - lo.0) / span.0 * T::of_usize(cells))
            .floor()
            .to_f64()
            .unwrap_or(0.0) as isize;
        let cy = ((y - lo.1) / span.1 * T::of_usize(cells))
            .floor()
            .to_f64()
            .unwrap_or(0.0) as isize;
        (cx.clamp(0, cells as isize - 1), cy.clamp(0, cells as isize - 1))
    };
    let mut grid: Vec<Vec<u32>> = vec![Vec::new(); cells * cells];
    let insert = |grid: &mut Vec<Vec<u32>>, p: &Polyline<T>, base: u32| {
        for i in 0..p.pts.len() {
            let (a, b) = p.seg(i);
            let (c0x, c0y) = cell_of(a.0.min(b.0), a.1.min(b.1));
            let (c1x, c1y) = cell_of(a.0.max(b.0), a.1.max(b.1));
            for cx in c0x..=c1x {
                for cy in c0y..=c1y {
                    grid[cx as usize * cells + cy as usize].push(base + i as u32);
                }
            }
        }
    };
    insert(&mut grid, pa, 0);
    if !same {
        insert(&mut grid, pb, na as u32);
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for cell in &grid {
        for (ii, &a_id) in cell.iter().enumerate() {
            for &b_id in &cell[ii + 1..] {
                let (i, j) = if a_id <= b_id { (a_id, b_id) } else { (b_id, a_id) };
                if same {
                    // skip identical and adjacent segments on one curve
                    let d = (j - i) as usize;
                    if d <= 1 || d >= na - 1 {
                        continue;
                    }
                } else {
                    // keep only curve-a vs curve-b pairs
                    if (i as usize) >= na || (j as usize) < na {
                        continue;
                    }
                }
                if !seen.insert((i, j)) {
                    continue;
                }
                let (i, j) = (i as usize, j as usize);
                let (sa, sb) = if same {
                    (pa.seg(i), pa.seg(j))
                } else {
                    (pa.seg(i), pb.seg(j - na))
                };
                if let Some((tt, uu)) = seg_intersect(sa, sb) {
                    let h_a = T::two_pi() / T::of_usize(na);
                    let h_b = T::two_pi() / T::of_usize(nb);
                    let t_a = pa.ts[i] + h_a * tt;
                    let t_b = if same {
                        pa.ts[j] + h_a * uu
                    } else {
                        pb.ts[j - na] + h_b * uu
                    };
                    out.push((t_a, t_b));
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (a.0, a.1)
            .partial_cmp(&(b.0, b.1))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

/// Damped 2D Newton for f_a(s) = f_b(t); returns refined (s, t).
fn refine_pair<T: Real>(
    fa: &impl Fn(T) -> ((T, T), (T, T)),
    fb: &impl Fn(T) -> ((T, T), (T, T)),
    mut s: T,
    mut t: T,
    tol: T,
) -> Option<(T, T)> {
    let res = |s: T, t: T| {
        let (pa, _) = fa(s);
        let (pb, _) = fb(t);
        (pa.0 - pb.0, pa.1 - pb.1)
    };
    let mut f = res(s, t);
    let norm = |v: (T, T)| (v.0 * v.0 + v.1 * v.1).sqrt();
    for _ in 0..60 {
        if norm(f) <= tol {
            return Some((s, t));
        }
        let (_, va) = fa(s);
        let (_, vb) = fb(t);
        let det = cross2(va, (-vb.0, -vb.1));
        if det.abs() < T::of(1e-300) {
            return None;
        }
        // solve [va, -vb] [ds, dt]^T = -f
        let ds = (-f.0 * -vb.1 - -vb.0 * -f.1) / det;
        let dt = (va.0 * -f.1 - -f.0 * va.1) / det;
        let mut lambda = T::one();
        let mut improved = false;
        for _ in 0..12 {
            let cand = res(s + ds * lambda, t + dt * lambda);
            if norm(cand) < norm(f) {
                s = s + ds * lambda;
                t = t + dt * lambda;
                f = cand;
                improved = true;
                break;
            }
            lambda = lambda * T::of(0.5);
        }
        if !improved {
            return None;
        }
    }
    if norm(f) <= tol {
        Some((s, t))
    } else {
        None
    }
}

fn wrap_period<T: Real>(t: T) -> T {
    let p = T::two_pi();
    let mut t = t % p;
    if t < T::zero() {
        t = t + p;
    }
    t
}

fn circular_gap<T: Real>(a: T, b: T) -> T {
    let p = T::two_pi();
    let d = (wrap_period(a) - wrap_period(b)).abs();
    d.min(p - d)
}

/// Find all transversal double points of the projection of a closed curve.
///
/// Candidates come from polyline segment intersections over `n` segments
/// (spatial-hash accelerated); each is polished by damped Newton on
/// Γ_u(s) − Γ_u(t) to |F| < 1e−11, then deduplicated within 1e−8 in (s,t).
/// Direction-independent data reused when one curve is projected along many
/// directions: 3D polyline samples, coarse unit tangents, diameter.
pub(crate) struct ProjectionCache<T> {
    ts: Vec<T>,
    pts: Vec<Vec3<T>>,
    pub(crate) tangents: Vec<Vec3<T>>,
    pub(crate) diam: T,
}

impl<T: Real> ProjectionCache<T> {
    pub(crate) fn new(curve: &ClosedCurve<T>, n: usize) -> Self {
        let ts = ClosedCurve::<T>::grid(n, true);
        let pts = ts.iter().map(|&t| curve.position(t)).collect();
        let tangents = ClosedCurve::<T>::grid(2048, true)
            .into_iter()
            .map(|t| curve.deriv(t, 1).normalized())
            .collect();
        Self {
            ts,
            pts,
            tangents,
            diam: curve.diameter(),
        }
    }
}

pub fn self_crossings<T: Real>(
    curve: &ClosedCurve<T>,
    u: Vec3<T>,
    n: usize,
) -> Result<Vec<Crossing<T>>> {
    self_crossings_cached(curve, &ProjectionCache::new(curve, n), u)
}

pub(crate) fn self_crossings_cached<T: Real>(
    curve: &ClosedCurve<T>,
    cache: &ProjectionCache<T>,
    u: Vec3<T>,
) -> Result<Vec<Crossing<T>>> {
    let n = cache.ts.len();
    let proj = PlanarProjection::new(curve, u);
    let poly = Polyline {
        ts: cache.ts.clone(),
        pts: cache.pts.iter().map(|&p| proj.dir.plane(p)).collect(),
    };
    let jet = |t: T| (proj.point(t), proj.velocity(t));
    let tol = T::of(1e-11);
    let mut refined: Vec<(T, T)> = Vec::new();
    for (s0, t0) in candidate_pairs(&poly, &poly, true) {
        let Some((s, t)) = refine_pair(&jet, &jet, s0, t0, tol) else {
            continue;
        };
        let (s, t) = (wrap_period(s), wrap_period(t));
        if circular_gap(s, t) < T::two_pi() / T::of_usize(n) {
            continue;
        }
        let (s, t) = if s <= t { (s, t) } else { (t, s) };
        let dup = refined
            .iter()
            .any(|&(a, b)| circular_gap(a, s) < T::of(1e-8) && circular_gap(b, t) < T::of(1e-8));
        if !dup {
            refined.push((s, t));
        }
    }
    refined.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let diam = cache.diam;
    let mut out = Vec::new();
    for (s, t) in refined {
        let hs = proj.height(s);
        let ht = proj.height(t);
        if (hs - ht).abs() < T::of(1e-10) * diam.max(T::one()) {
            return Err(Error::NonGenericDirection(format!(
                "double point with equal heights at t=({}, {})",
                s.to_f64().unwrap_or(f64::NAN),
                t.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let (t_plus, t_minus) = if hs > ht { (s, t) } else { (t, s) };
        let vp = proj.velocity(t_plus);
        let vm = proj.velocity(t_minus);
        let cr = cross2(vp, vm);
        let np = (vp.0 * vp.0 + vp.1 * vp.1).sqrt();
        let nm = (vm.0 * vm.0 + vm.1 * vm.1).sqrt();
        let angle = (cr.abs() / (np * nm)).min(T::one()).asin();
        if angle < T::of(1e-4) {
            return Err(Error::NonGenericDirection(format!(
                "near-tangential crossing (angle {:e})",
                angle.to_f64().unwrap_or(f64::NAN)
            )));
        }
        out.push(Crossing {
            t_plus,
            t_minus,
            point: proj.point(t_plus),
            sign: if cr > T::zero() { 1 } else { -1 },
            angle,
            height_gap: (hs - ht).abs(),
            kind: CrossingKind::SelfCrossing,
        });
    }
    Ok(out)
}

/// Signed crossing number: Σ sign over the diagram's double points.
pub fn crossing_number<T: Real>(crossings: &[Crossing<T>]) -> i64 {
    crossings.iter().map(|c| c.sign as i64).sum()
}

/// Crossings between the diagram of Γ and of its push-off Γ + εv, split
/// into local (parameter-diagonal) and nonlocal ones.
///
/// Verifies the diagram identity Cr_total = 2·Cr(Γ_u) + Cr_local; on
/// classification ambiguity the push-off distance is halved, up to five
/// times.
pub fn ribbon_crossings<T: Real>(
    curve: &ClosedCurve<T>,
    normal: &crate::framing::NormalField<T>,
    epsilon: T,
    u: Vec3<T>,
    n: usize,
) -> Result<(i64, i64, i64)> {
    let self_cr = crossing_number(&self_crossings(curve, u, n)?);
    let mut eps = epsilon;
    for _ in 0..5 {
        match ribbon_attempt(curve, normal, eps, u, n, self_cr) {
            Ok(v) => return Ok(v),
            Err(Error::EpsilonResolutionFailure { .. }) => {
                eps = eps * T::of(0.5);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::EpsilonResolutionFailure {
        epsilon: eps.to_f64().unwrap_or(f64::NAN),
    })
}

fn ribbon_attempt<T: Real>(
    curve: &ClosedCurve<T>,
    normal: &crate::framing::NormalField<T>,
    epsilon: T,
    u: Vec3<T>,
    n: usize,
    self_cr: i64,
) -> Result<(i64, i64, i64)> {
    let dir = Direction::new(u);
    let base = |t: T| dir.plane(curve.position(t));
    let push_pt = |t: T| curve.position(t) + normal.unit(t) * epsilon;
    let push = |t: T| dir.plane(push_pt(t));
    let base_jet = |t: T| {
        let jet = curve.jet(t);
        (dir.plane(jet.p), dir.plane(jet.d1))
    };
    let push_jet = |t: T| {
        let jet = curve.jet(t);
        let (nv, n1, _) = normal.unit_jet(t);
        (
            dir.plane(jet.p + nv * epsilon),
            dir.plane(jet.d1 + n1 * epsilon),
        )
    };
    let pa = Polyline::sample(&base, n);
    let pb = Polyline::sample(&push, n);
    let tol = T::of(1e-11);
    let mut pairs: Vec<(T, T)> = Vec::new();
    for (s0, t0) in candidate_pairs(&pa, &pb, false) {
        let Some((s, t)) = refine_pair(&base_jet, &push_jet, s0, t0, tol) else {
            continue;
        };
        let (s, t) = (wrap_period(s), wrap_period(t));
        let dup = pairs
            .iter()
            .any(|&(a, b)| circular_gap(a, s) < T::of(1e-8) && circular_gap(b, t) < T::of(1e-8));
        if !dup {
            pairs.push((s, t));
        }
    }
    pairs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    // local when the parameters nearly coincide: the strand meets its own
    // push-off within a window set by the slowest *projected* speed
    let speed_min = ClosedCurve::<T>::grid(512, true)
        .into_iter()
        .map(|t| {
            let v = dir.plane(curve.jet(t).d1);
            (v.0 * v.0 + v.1 * v.1).sqrt()
        })
        .fold(T::infinity(), |m, s| m.min(s));
    let local_window = epsilon / speed_min * T::of(40.0);
    let guard = local_window * T::of(4.0);
    let mut total = 0i64;
    let mut local = 0i64;
    for &(s, t) in &pairs {
        let gap = circular_gap(s, t);
        if gap > local_window && gap < guard {
            return Err(Error::EpsilonResolutionFailure {
                epsilon: epsilon.to_f64().unwrap_or(f64::NAN),
            });
        }
        let hs = dir.height(curve.position(s));
        let ht = dir.height(push_pt(t));
        if (hs - ht).abs() < T::of(1e-12) {
            return Err(Error::NonGenericDirection(
                "ribbon crossing with equal heights".into(),
            ));
        }
        let (_, va) = base_jet(s);
        let (_, vb) = push_jet(t);
        // orient the sign by the over-strand tangent first
        let cr = cross2(va, vb);
        let sign = if hs > ht {
            if cr > T::zero() {
                1
            } else {
                -1
            }
        } else if cross2(vb, va) > T::zero() {
            1
        } else {
            -1
        };
        total += sign;
        if gap <= local_window {
            local += sign;
        }
    }
    let nonlocal = total - local;
    if nonlocal != 2 * self_cr {
        return Err(Error::EpsilonResolutionFailure {
            epsilon: epsilon.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((total, local, nonlocal))
}

/// Zeros of ⟨u, n(t)⟩ along the framing, refined by bisection; the count
/// must be even and every zero transversal.
pub fn normal_direction_zeros<T: Real>(
    framed: &FramedCurve<T>,
    u: Vec3<T>,
) -> Result<Vec<T>> {
    let u = u.normalized();
    let f = |t: T| framed.normal.unit(t).dot(u);
    let zeros = roots_periodic(f, 4096);
    let h = T::of(1e-6);
    for &z in &zeros {
        let slope = (f(z + h) - f(z - h)) / (h + h);
        if slope.abs() < T::of(1e-8) {
            return Err(Error::NonGenericDirection(format!(
                "tangential zero of <u,n> at t={}",
                z.to_f64().unwrap_or(f64::NAN)
            )));
        }
    }
    if zeros.len() % 2 != 0 {
        return Err(Error::NonGenericDirection(
            "odd zero count of <u,n>; grid missed a transversal zero".into(),
        ));
    }
    Ok(zeros)
}

/// Winding number of the projected tangent, as an exact integer.
pub fn rotation_index<T: Real>(curve: &ClosedCurve<T>, u: Vec3<T>) -> Result<i64> {
    let proj = PlanarProjection::new(curve, u);
    let mut n = 1024usize;
    loop {
        let vels: Vec<(T, T)> = ClosedCurve::<T>::grid(n, true)
            .into_iter()
            .map(|t| proj.velocity(t))
            .collect();
        // reject cusps and verify the angle steps stay below π/2
        let mut ok = true;
        for k in 0..n {
            let a = vels[k];
            let b = vels[(k + 1) % n];
            let na = (a.0 * a.0 + a.1 * a.1).sqrt();
            let nb = (b.0 * b.0 + b.1 * b.1).sqrt();
            if na < T::of(1e-12) {
                return Err(Error::NonGenericDirection(
                    "projected tangent vanishes (cusp in the diagram)".into(),
                ));
            }
            let dot = (a.0 * b.0 + a.1 * b.1) / (na * nb);
            if dot <= T::zero() {
                ok = false;
                break;
            }
        }
        if ok {
            let turns = winding_turns(&vels);
            let rounded = turns.round();
            if (turns - rounded).abs() > T::of(1e-6) {
                return Err(Error::ResolutionFailure(format!(
                    "tangent winding {} is not an integer",
                    turns.to_f64().unwrap_or(f64::NAN)
                )));
            }
            return Ok(rounded.to_f64().unwrap_or(f64::NAN) as i64);
        }
        n *= 2;
        if n > (1 << 17) {
            return Err(Error::ResolutionFailure(
                "tangent angle steps stayed above π/2 at maximal grid density".into(),
            ));
        }
    }
}

/// Number of inflections of the projected curve: transversal sign changes
/// of det₂(Γ_u', Γ_u'').
pub fn planar_inflections<T: Real>(curve: &ClosedCurve<T>, u: Vec3<T>) -> Result<usize> {
    let dir = Direction::new(u);
    let f = |t: T| {
        let jet = curve.jet(t);
        cross2(dir.plane(jet.d1), dir.plane(jet.d2))
    };
    let zeros = roots_periodic(f, 8192);
    let scale = ClosedCurve::<T>::grid(512, true)
        .into_iter()
        .map(|t| f(t).abs())
        .fold(T::zero(), |m, v| m.max(v));
    let h = T::of(1e-6);
    for &z in &zeros {
        let slope = (f(z + h) - f(z - h)) / (h + h);
        if slope.abs() < scale * T::of(1e-10) {
            return Err(Error::NonGenericDirection(format!(
                "tangential planar inflection at t={}",
                z.to_f64().unwrap_or(f64::NAN)
            )));
        }
    }
    Ok(zeros.len())
}

/// Search a 64×64 grid over 1.5× the bounding box for a point from which
/// the projected curve is locally star-shaped (the tangent line never
/// passes through the point). The verdict is sampled, not exact.
pub fn locally_starshaped<T: Real>(curve: &ClosedCurve<T>, u: Vec3<T>) -> Option<(T, T)> {
    let proj = PlanarProjection::new(curve, u);
    let n = 4096usize;
    let data: Vec<((T, T), (T, T))> = ClosedCurve::<T>::grid(n, true)
        .into_iter()
        .map(|t| (proj.point(t), proj.velocity(t)))
        .collect();
    let mut lo = (T::infinity(), T::infinity());
    let mut hi = (T::neg_infinity(), T::neg_infinity());
    for &((x, y), _) in &data {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let c = ((lo.0 + hi.0) * T::of(0.5), (lo.1 + hi.1) * T::of(0.5));
    let half = (
        (hi.0 - lo.0) * T::of(0.75),
        (hi.1 - lo.1) * T::of(0.75),
    );
    let g = 64usize;
    for ix in 0..g {
        for iy in 0..g {
            let px = c.0 - half.0 + half.0 * T::of(2.0) * (T::of_usize(ix) + T::of(0.5)) / T::of_usize(g);
            let py = c.1 - half.1 + half.1 * T::of(2.0) * (T::of_usize(iy) + T::of(0.5)) / T::of_usize(g);
            let mut pos = 0usize;
            let mut neg = 0usize;
            let mut min_abs = T::infinity();
            for &((x, y), (vx, vy)) in &data {
                let w = (x - px) * vy - (y - py) * vx;
                if w > T::zero() {
                    pos += 1;
                } else {
                    neg += 1;
                }
                min_abs = min_abs.min(w.abs());
                if pos > 0 && neg > 0 {
                    break;
                }
            }
            if pos == 0 || neg == 0 {
                // refine near the sampled minimum before accepting
                let f = |t: T| {
                    let p = proj.point(t);
                    let v = proj.velocity(t);
                    (p.0 - px) * v.1 - (p.1 - py) * v.0
                };
                if roots_periodic(f, 4 * n).is_empty() {
                    return Some((px, py));
                }
            }
        }
    }
    None
}

/// Seeded rejection sampler for directions in general position: no
/// tangent-parallel views, all crossings transversal and well separated in
/// height, no triple points, and (when a framing is supplied) only
/// transversal zeros of ⟨u,n⟩.
pub fn random_admissible_direction<T: Real, R: Rng>(
    curve: &ClosedCurve<T>,
    framed: Option<&FramedCurve<T>>,
    rng: &mut R,
) -> Result<(Vec3<T>, Vec<Crossing<T>>)> {
    let tangents: Vec<Vec3<T>> = ClosedCurve::<T>::grid(2048, true)
        .into_iter()
        .map(|t| curve.jet(t).d1.normalized())
        .collect();
    let diam = curve.diameter();
    let max_tries = 10_000usize;
    for _ in 0..max_tries {
        let u: Vec3<T> = random_unit(rng);
        let min_sin = tangents
            .iter()
            .map(|&tv| tv.cross(u).norm())
            .fold(T::infinity(), |m, v| m.min(v));
        if min_sin <= T::of(1e-3) {
            continue;
        }
        let crossings = match self_crossings(curve, u, 4096) {
            Ok(c) => c,
            Err(Error::NonGenericDirection(_)) => continue,
            Err(e) => return Err(e),
        };
        let mut ok = true;
        for c in &crossings {
            if c.angle <= T::of(1e-3) || c.height_gap <= T::of(1e-6) * diam {
                ok = false;
                break;
            }
        }
        if ok {
            // triple points: crossing locations too close to each other
            'outer: for (i, a) in crossings.iter().enumerate() {
                for b in &crossings[i + 1..] {
                    let d = ((a.point.0 - b.point.0) * (a.point.0 - b.point.0)
                        + (a.point.1 - b.point.1) * (a.point.1 - b.point.1))
                        .sqrt();
                    if d <= T::of(1e-6) * diam {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        if ok {
            if let Some(fc) = framed {
                match normal_direction_zeros(fc, u) {
                    Ok(_) => {}
                    Err(Error::NonGenericDirection(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            return Ok((u, crossings));
        }
    }
    Err(Error::SamplingFailure { tries: max_tries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{builtin, BuiltinParams};
    use crate::framing::asymptotic_normal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e3() -> Vec3<f64> {
        Vec3::new(0.0, 0.0, 1.0)
    }

    fn params(p: i64, q: i64) -> BuiltinParams {
        BuiltinParams {
            p,
            q,
            ..BuiltinParams::default()
        }
    }

    #[test]
    fn basis_is_right_handed() {
        for u in [
            Vec3::new(0.3f64, -0.2, 0.93),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(1.0, 0.0, 1e-9),
        ] {
            let d = Direction::new(u);
            assert!((d.e1.cross(d.e2) - d.u).norm() < 1e-12);
            assert!(d.e1.dot(d.u).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_has_no_crossings() {
        let c: ClosedCurve<f64> = builtin("circle", BuiltinParams::default()).unwrap();
        let cr = self_crossings(&c, Vec3::new(0.1, 0.2, 0.97), 2048).unwrap();
        assert!(cr.is_empty());
    }

    #[test]
    fn trefoil_axis_diagram() {
        let c: ClosedCurve<f64> = builtin("torus-knot", params(2, 3)).unwrap();
        let cr = self_crossings(&c, e3(), 4096).unwrap();
        assert_eq!(cr.len(), 3);
        assert_eq!(crossing_number(&cr), -3);
    }

    #[test]
    fn crossing_signs_invariant_under_direction_flip() {
        let c: ClosedCurve<f64> = builtin("torus-knot", params(2, 5)).unwrap();
        let a = self_crossings(&c, e3(), 4096).unwrap();
        let b = self_crossings(&c, -e3(), 4096).unwrap();
        assert_eq!(a.len(), b.len());
        assert_eq!(crossing_number(&a), crossing_number(&b));
    }

    #[test]
    fn rotation_index_of_circle_and_eight() {
        let c: ClosedCurve<f64> = builtin("circle", BuiltinParams::default()).unwrap();
        assert_eq!(rotation_index(&c, e3()).unwrap().abs(), 1);
        let c: ClosedCurve<f64> = builtin("lifted-eight", BuiltinParams::default()).unwrap();
        assert_eq!(rotation_index(&c, e3()).unwrap(), 0);
    }

    #[test]
    fn rotation_index_flips_with_orientation() {
        let c: ClosedCurve<f64> = builtin("torus-knot", params(2, 5)).unwrap();
        let r1 = rotation_index(&c, e3()).unwrap();
        let r2 = rotation_index(&c.reversed(), e3()).unwrap();
        assert_eq!(r1, -r2);
        assert_ne!(r1, 0);
    }

    #[test]
    fn eight_projection_has_two_inflections() {
        let c: ClosedCurve<f64> = builtin("lifted-eight", BuiltinParams::default()).unwrap();
        assert_eq!(planar_inflections(&c, e3()).unwrap(), 2);
    }

    #[test]
    fn circle_is_starshaped_and_trefoil_axis_view_is_not_from_center() {
        let c: ClosedCurve<f64> = builtin("circle", BuiltinParams::default()).unwrap();
        let w = locally_starshaped(&c, e3());
        assert!(w.is_some());
        let (x, y) = w.unwrap();
        assert!((x * x + y * y).sqrt() < 1.0);
    }

    #[test]
    fn admissible_directions_are_deterministic() {
        let c: ClosedCurve<f64> = builtin("torus-knot", params(2, 5)).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(4);
        let mut r2 = ChaCha8Rng::seed_from_u64(4);
        let (u1, _) = random_admissible_direction(&c, None, &mut r1).unwrap();
        let (u2, _) = random_admissible_direction(&c, None, &mut r2).unwrap();
        assert_eq!(u1.to_array(), u2.to_array());
    }

    #[test]
    fn normal_zero_counts() {
        let c: ClosedCurve<f64> = builtin("coiled-trefoil", BuiltinParams::default()).unwrap();
        let fc = asymptotic_normal(&c, 2048).unwrap();
        let zeros = normal_direction_zeros(&fc, Vec3::new(0.3, -0.2, 0.93)).unwrap();
        assert_eq!(zeros.len(), 36);
    }
}
