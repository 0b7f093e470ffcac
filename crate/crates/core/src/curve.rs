//! Curve model: closed space curves backed by trigonometric polynomials.
//!
//! Every curve in the library is stored as a finite Fourier series per
//! component, so derivatives up to third order are exact, rigid motions and
//! reparametrizations act on coefficients, and evaluation is uniform across
//! built-ins, fitted samples, and constructed curves.

use crate::error::{Error, Result};
use crate::numeric::integrate_periodic;
use crate::scalar::Real;
use crate::vec3::Vec3;
use rand::Rng;

/// Position and first three derivatives at a parameter value.
#[derive(Clone, Copy, Debug)]
pub struct CurveJet<T> {
    pub p: Vec3<T>,
    pub d1: Vec3<T>,
    pub d2: Vec3<T>,
    pub d3: Vec3<T>,
}

/// One scalar trigonometric polynomial a0 + Σ a_k cos kt + b_k sin kt.
#[derive(Clone, Debug)]
pub struct TrigSeries<T> {
    pub a0: T,
    pub a: Vec<T>,
    pub b: Vec<T>,
}

impl<T: Real> TrigSeries<T> {
    pub fn constant(c: T) -> Self {
        Self {
            a0: c,
            a: Vec::new(),
            b: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.a.len()
    }

    /// m-th derivative. One `sin_cos` per call; higher harmonics by the
    /// angle-addition recurrence.
    pub fn eval(&self, t: T, m: usize) -> T {
        let mut acc = if m == 0 { self.a0 } else { T::zero() };
        let (s1, c1) = t.sin_cos();
        let (mut ck, mut sk) = (T::one(), T::zero());
        for k in 1..=self.a.len() {
            let cn = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = cn;
            let kf = T::of_usize(k);
            let pow = kf.powi(m as i32);
            // derivative cycles (cos, -sin, -cos, sin) / (sin, cos, -sin, -cos)
            let (ca, cb) = match m % 4 {
                0 => (ck, sk),
                1 => (-sk, ck),
                2 => (-ck, -sk),
                _ => (sk, -ck),
            };
            acc = acc + pow * (self.a[k - 1] * ca + self.b[k - 1] * cb);
        }
        acc
    }

    /// Drop trailing harmonics whose coefficients are negligible relative to
    /// the series magnitude.
    pub fn truncated(mut self, rel: T) -> Self {
        let scale = self
            .a
            .iter()
            .chain(self.b.iter())
            .fold(self.a0.abs(), |m, &c| m.max(c.abs()));
        let cut = scale * rel;
        while let (Some(&a), Some(&b)) = (self.a.last(), self.b.last()) {
            if a.abs() <= cut && b.abs() <= cut {
                self.a.pop();
                self.b.pop();
            } else {
                break;
            }
        }
        self
    }
}

/// A closed curve t ∈ [0, 2π) ↦ ℝ³.
#[derive(Clone, Debug)]
pub struct ClosedCurve<T> {
    pub name: String,
    pub xyz: [TrigSeries<T>; 3],
}

impl<T: Real> ClosedCurve<T> {
    pub fn jet(&self, t: T) -> CurveJet<T> {
        let ev = |m: usize| {
            Vec3::new(
                self.xyz[0].eval(t, m),
                self.xyz[1].eval(t, m),
                self.xyz[2].eval(t, m),
            )
        };
        CurveJet {
            p: ev(0),
            d1: ev(1),
            d2: ev(2),
            d3: ev(3),
        }
    }

    pub fn position(&self, t: T) -> Vec3<T> {
        self.deriv(t, 0)
    }

    pub fn deriv(&self, t: T, m: usize) -> Vec3<T> {
        Vec3::new(
            self.xyz[0].eval(t, m),
            self.xyz[1].eval(t, m),
            self.xyz[2].eval(t, m),
        )
    }

    pub fn speed(&self, t: T) -> T {
        self.jet(t).d1.norm()
    }

    /// Uniform parameter grid; `offset` shifts samples by half a step so
    /// isolated special parameters (0, π, ...) fall between nodes.
    pub fn grid(n: usize, offset: bool) -> Vec<T> {
        let shift = if offset { T::of(0.5) } else { T::zero() };
        (0..n)
            .map(|k| T::two_pi() * (T::of_usize(k) + shift) / T::of_usize(n))
            .collect()
    }

    pub fn sample_jets(&self, n: usize, offset: bool) -> (Vec<T>, Vec<CurveJet<T>>) {
        let ts = Self::grid(n, offset);
        let jets = ts.iter().map(|&t| self.jet(t)).collect();
        (ts, jets)
    }

    pub fn length(&self) -> T {
        integrate_periodic(|t| self.speed(t), T::of(1e-12)).unwrap_or_else(|_| {
            let n = 1 << 16;
            let mut s = T::zero();
            for k in 0..n {
                s = s + self.speed(T::two_pi() * T::of_usize(k) / T::of_usize(n));
            }
            s * T::two_pi() / T::of_usize(n)
        })
    }

    pub fn diameter(&self) -> T {
        let pts: Vec<Vec3<T>> = Self::grid(512, false)
            .into_iter()
            .map(|t| self.position(t))
            .collect();
        let mut best = T::zero();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                best = best.max((pts[i] - pts[j]).norm());
            }
        }
        best
    }

    pub fn max_degree(&self) -> usize {
        self.xyz.iter().map(|s| s.degree()).max().unwrap_or(0)
    }

    /// Apply x ↦ R x + shift with R given row-wise, then uniform scale.
    pub fn transformed(&self, rot: [[T; 3]; 3], shift: Vec3<T>, scale: T) -> Self {
        let deg = self.max_degree();
        let pad = |s: &TrigSeries<T>, k: usize, which: bool| -> T {
            let v = if which { &s.a } else { &s.b };
            v.get(k).copied().unwrap_or_else(T::zero)
        };
        let rot_apply = |v: Vec3<T>| {
            Vec3::new(
                Vec3::from_array(rot[0]).dot(v),
                Vec3::from_array(rot[1]).dot(v),
                Vec3::from_array(rot[2]).dot(v),
            )
        };
        let a0 = rot_apply(Vec3::new(self.xyz[0].a0, self.xyz[1].a0, self.xyz[2].a0)) * scale
            + shift * scale;
        let mut out: [TrigSeries<T>; 3] = [
            TrigSeries::constant(a0.x),
            TrigSeries::constant(a0.y),
            TrigSeries::constant(a0.z),
        ];
        for k in 0..deg {
            let ak = rot_apply(Vec3::new(
                pad(&self.xyz[0], k, true),
                pad(&self.xyz[1], k, true),
                pad(&self.xyz[2], k, true),
            )) * scale;
            let bk = rot_apply(Vec3::new(
                pad(&self.xyz[0], k, false),
                pad(&self.xyz[1], k, false),
                pad(&self.xyz[2], k, false),
            )) * scale;
            for (c, a, b) in [(0, ak.x, bk.x), (1, ak.y, bk.y), (2, ak.z, bk.z)] {
                out[c].a.push(a);
                out[c].b.push(b);
            }
        }
        Self {
            name: self.name.clone(),
            xyz: out,
        }
    }

    /// Orientation reversal t ↦ -t.
    pub fn reversed(&self) -> Self {
        let flip = |s: &TrigSeries<T>| TrigSeries {
            a0: s.a0,
            a: s.a.clone(),
            b: s.b.iter().map(|&v| -v).collect(),
        };
        Self {
            name: format!("{}-reversed", self.name),
            xyz: [flip(&self.xyz[0]), flip(&self.xyz[1]), flip(&self.xyz[2])],
        }
    }

    /// Translate so the centroid of a dense sample sits at the origin.
    pub fn centered(&self) -> Self {
        let mut out = self.clone();
        for c in 0..3 {
            out.xyz[c].a0 = T::zero();
        }
        out
    }
}

/// Interpolating trigonometric fit of uniformly spaced samples
/// (t_j = 2πj/N). N must be even and ≥ 16. Reproduces the samples to
/// rounding; derivatives are those of the interpolant.
pub fn fourier_fit<T: Real>(samples: &[Vec3<T>]) -> Result<ClosedCurve<T>> {
    let n = samples.len();
    if n < 16 || n % 2 != 0 {
        return Err(Error::InvalidSpec(format!(
            "fourier_fit needs an even sample count of at least 16, got {n}"
        )));
    }
    let half = n / 2;
    let nf = T::of_usize(n);
    // every angle is a multiple of 2π/n
    let table: Vec<(T, T)> = (0..n)
        .map(|i| (T::two_pi() * T::of_usize(i) / nf).sin_cos())
        .collect();
    let mut xyz: [TrigSeries<T>; 3] = [
        TrigSeries::constant(T::zero()),
        TrigSeries::constant(T::zero()),
        TrigSeries::constant(T::zero()),
    ];
    for c in 0..3 {
        let comp = |j: usize| -> T {
            let v = samples[j];
            match c {
                0 => v.x,
                1 => v.y,
                _ => v.z,
            }
        };
        let mut a0 = T::zero();
        for j in 0..n {
            a0 = a0 + comp(j);
        }
        xyz[c].a0 = a0 / nf;
        for k in 1..=half {
            let mut ak = T::zero();
            let mut bk = T::zero();
            for j in 0..n {
                let (s, co) = table[(k * j) % n];
                ak = ak + comp(j) * co;
                bk = bk + comp(j) * s;
            }
            let w = if k == half {
                T::one() / nf
            } else {
                T::of(2.0) / nf
            };
            xyz[c].a.push(ak * w);
            xyz[c].b.push(if k == half { T::zero() } else { bk * w });
        }
        let trimmed = xyz[c].clone().truncated(T::of(1e-14));
        xyz[c] = trimmed;
    }
    Ok(ClosedCurve {
        name: "fitted".into(),
        xyz,
    })
}

/// Fit a position-only closure by sampling it on the uniform grid.
pub fn fit_closure<T: Real>(
    name: &str,
    n: usize,
    f: impl Fn(T) -> Vec3<T>,
) -> Result<ClosedCurve<T>> {
    let samples: Vec<Vec3<T>> = ClosedCurve::<T>::grid(n, false)
        .into_iter()
        .map(f)
        .collect();
    let mut c = fourier_fit(&samples)?;
    c.name = name.into();
    Ok(c)
}

/// Parameters accepted by [`builtin`]; unused fields are ignored per curve.
#[derive(Clone, Copy, Debug)]
pub struct BuiltinParams {
    pub p: i64,
    pub q: i64,
    pub big_r: f64,
    pub small_r: f64,
}

impl Default for BuiltinParams {
    fn default() -> Self {
        Self {
            p: 2,
            q: 3,
            big_r: 2.0,
            small_r: 0.5,
        }
    }
}

/// Construct a named built-in curve. The `example2` curve is produced by the
/// construction pipeline, not here.
pub fn builtin<T: Real>(name: &str, params: BuiltinParams) -> Result<ClosedCurve<T>> {
    match name {
        "circle" => fit_closure("circle", 64, |t: T| {
            Vec3::new(t.cos(), t.sin(), T::zero())
        }),
        "torus-knot" => {
            let (p, q) = (T::of(params.p as f64), T::of(params.q as f64));
            let (big, small) = (T::of(params.big_r), T::of(params.small_r));
            fit_closure(
                &format!("torus-knot-{}-{}", params.p, params.q),
                512,
                move |t: T| {
                    let rho = big + small * (q * t).cos();
                    Vec3::new(
                        rho * (p * t).cos(),
                        rho * (p * t).sin(),
                        small * (q * t).sin(),
                    )
                },
            )
        }
        "coiled-trefoil" => fit_closure("coiled-trefoil", 256, |t: T| {
            let rho = T::of(2.0)
                + T::of(0.5) * (T::of(3.0) * t).cos()
                + T::of(0.12) * (T::of(18.0) * t).cos();
            Vec3::new(
                rho * (T::of(2.0) * t).cos(),
                rho * (T::of(2.0) * t).sin(),
                T::of(0.5) * (T::of(3.0) * t).sin() + T::of(0.12) * (T::of(18.0) * t).sin(),
            )
        }),
        "lifted-eight" => fit_closure("lifted-eight", 64, |t: T| {
            let z = -t.sin() - (T::of(2.0) * t).sin() - t.cos()
                + (T::of(3.0) * t).cos() / T::of(9.0);
            Vec3::new((T::of(2.0) * t).sin(), t.sin(), T::of(0.25) * z)
        }),
        "kovaleva" => {
            let w = T::of((63.0f64 / 8.0).sqrt());
            fit_closure("kovaleva", 2048, move |t: T| {
                let r = T::of(3.0) + t.sin();
                let c = t.cos();
                let z = (T::of(2.0) * t).sin() + T::of(46.0) * c - T::of(27.0) * c * c * c
                    + T::of(27.0 / 5.0) * c * c * c * c * c;
                Vec3::new(r * (w * c).cos(), r * (w * c).sin(), z)
            })
        }
        other => Err(Error::InvalidSpec(format!("unknown builtin curve `{other}`"))),
    }
}

/// Random band-limited closed curve: a dominant unit circle plus Gaussian
/// harmonics with 1/k² amplitude decay up to `degree`.
pub fn random_band_limited<T: Real, R: Rng>(rng: &mut R, degree: usize) -> ClosedCurve<T> {
    let mut xyz: [TrigSeries<T>; 3] = [
        TrigSeries::constant(T::zero()),
        TrigSeries::constant(T::zero()),
        TrigSeries::constant(T::zero()),
    ];
    for c in 0..3 {
        for k in 1..=degree {
            let amp = 0.35 / (k * k) as f64;
            let base_a = if c == 0 && k == 1 { 1.0 } else { 0.0 };
            let base_b = if c == 1 && k == 1 { 1.0 } else { 0.0 };
            let g1: f64 = rng.gen_range(-1.0..1.0);
            let g2: f64 = rng.gen_range(-1.0..1.0);
            let zdamp = if c == 2 { 0.6 } else { 1.0 };
            xyz[c].a.push(T::of(base_a + amp * zdamp * g1));
            xyz[c].b.push(T::of(base_b + amp * zdamp * g2));
        }
    }
    ClosedCurve {
        name: "random-band-limited".into(),
        xyz,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fit_reproduces_samples() {
        let f = |t: f64| {
            Vec3::new(
                t.cos() + 0.3 * (3.0 * t).cos(),
                t.sin() - 0.2 * (2.0 * t).sin(),
                0.5 * (5.0 * t).sin(),
            )
        };
        let samples: Vec<Vec3<f64>> = ClosedCurve::<f64>::grid(64, false)
            .into_iter()
            .map(f)
            .collect();
        let c = fourier_fit(&samples).unwrap();
        for (j, t) in ClosedCurve::<f64>::grid(64, false).into_iter().enumerate() {
            let err = (c.position(t) - samples[j]).norm();
            assert!(err < 1e-10 * (1.0 + samples[j].norm()), "err {err}");
        }
        // off-grid too: the sampled function is itself band-limited
        let err = (c.position(0.7321) - f(0.7321)).norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_counts() {
        let pts = vec![Vec3::new(0.0, 0.0, 0.0); 15];
        assert!(fourier_fit(&pts).is_err());
        let pts = vec![Vec3::new(0.0, 0.0, 0.0); 17];
        assert!(fourier_fit(&pts).is_err());
    }

    #[test]
    fn derivatives_match_analytic_torus_knot() {
        let c: ClosedCurve<f64> = builtin("torus-knot", BuiltinParams::default()).unwrap();
        let t = 1.234;
        let h = 1e-6;
        let fd = (c.position(t + h) - c.position(t - h)) / (2.0 * h);
        let jet = c.jet(t);
        assert!((fd - jet.d1).norm() < 1e-7);
        let fd2 = (c.jet(t + h).d1 - c.jet(t - h).d1) / (2.0 * h);
        assert!((fd2 - jet.d2).norm() < 1e-7);
        let fd3 = (c.jet(t + h).d2 - c.jet(t - h).d2) / (2.0 * h);
        assert!((fd3 - jet.d3).norm() < 1e-6);
    }

    #[test]
    fn circle_length_and_diameter() {
        let c: ClosedCurve<f64> = builtin("circle", BuiltinParams::default()).unwrap();
        assert!((c.length() - std::f64::consts::TAU).abs() < 1e-10);
        assert!((c.diameter() - 2.0).abs() < 1e-3);
    }

    #[test]
    fn kovaleva_fit_is_converged() {
        let c: ClosedCurve<f64> = builtin("kovaleva", BuiltinParams::default()).unwrap();
        let w = (63.0f64 / 8.0).sqrt();
        for &t in &[0.1f64, 2.2, 4.4, 6.1] {
            let r: f64 = 3.0 + t.sin();
            let cs: f64 = t.cos();
            let z = (2.0 * t).sin() + 46.0 * cs - 27.0 * cs.powi(3) + 27.0 / 5.0 * cs.powi(5);
            let exact = Vec3::new(r * (w * cs).cos(), r * (w * cs).sin(), z);
            assert!((c.position(t) - exact).norm() < 1e-9);
        }
    }

    #[test]
    fn transform_and_reverse_preserve_geometry() {
        let c: ClosedCurve<f64> = builtin("coiled-trefoil", BuiltinParams::default()).unwrap();
        let th = 0.813f64;
        let rot = [
            [th.cos(), -th.sin(), 0.0],
            [th.sin(), th.cos(), 0.0],
            [0.0, 0.0, 1.0],
        ];
        let moved = c.transformed(rot, Vec3::new(0.5, -1.0, 2.0), 1.0);
        assert!((moved.length() - c.length()).abs() < 1e-8);
        let rev = c.reversed();
        assert!((rev.position(1.0) - c.position(-1.0)).norm() < 1e-12);
        let scaled = c.transformed(
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            Vec3::zero(),
            2.0,
        );
        assert!((scaled.length() - 2.0 * c.length()).abs() < 1e-8);
    }

    #[test]
    fn random_curves_are_seeded_deterministic() {
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        let c1: ClosedCurve<f64> = random_band_limited(&mut r1, 6);
        let c2: ClosedCurve<f64> = random_band_limited(&mut r2, 6);
        assert_eq!(c1.position(0.37).to_array(), c2.position(0.37).to_array());
    }
}
