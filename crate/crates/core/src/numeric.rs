//! Scalar numerics shared across the library: periodic quadrature, root
//! bracketing/refinement, small dense linear solves, sphere sampling.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vec3::Vec3;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Trapezoid rule on one period of a smooth periodic function, doubling the
/// grid until two consecutive levels agree to `tol` (relative to the running
/// magnitude). Converges spectrally for smooth integrands.
pub fn integrate_periodic<T: Real>(f: impl Fn(T) -> T, tol: T) -> Result<T> {
    let mut n = 64usize;
    let mut sum = T::zero();
    for k in 0..n {
        sum = sum + f(T::two_pi() * T::of_usize(k) / T::of_usize(n));
    }
    let mut value = sum * T::two_pi() / T::of_usize(n);
    loop {
        // refine: add the midpoints of the current grid
        for k in 0..n {
            sum = sum + f(T::two_pi() * (T::of_usize(k) + T::of(0.5)) / T::of_usize(n));
        }
        n *= 2;
        let next = sum * T::two_pi() / T::of_usize(n);
        let scale = T::one().max(next.abs());
        if (next - value).abs() <= tol * scale {
            return Ok(next);
        }
        value = next;
        if n > (1 << 22) {
            return Err(Error::QuadratureFailure(format!(
                "periodic integral did not settle below {tol} by n={n}"
            )));
        }
    }
}

/// All roots of a smooth periodic function on [0, 2π), located by a
/// sign-change scan on an offset grid and polished by a bisection/secant
/// hybrid to an interval of width 1e-10.
pub fn roots_periodic<T: Real>(f: impl Fn(T) -> T, n_scan: usize) -> Vec<T> {
    let period = T::two_pi();
    let h = period / T::of_usize(n_scan);
    let mut ts: Vec<T> = Vec::with_capacity(n_scan + 1);
    let mut vs: Vec<T> = Vec::with_capacity(n_scan + 1);
    for k in 0..=n_scan {
        let t = h * (T::of_usize(k) + T::of(0.5));
        ts.push(t);
        vs.push(f(t));
    }
    let mut roots = Vec::new();
    for k in 0..n_scan {
        let (a, b) = (ts[k], ts[k + 1]);
        let (fa, fb) = (vs[k], vs[k + 1]);
        if fa == T::zero() {
            roots.push(a);
            continue;
        }
        if (fa > T::zero()) != (fb > T::zero()) {
            roots.push(refine_root(&f, a, b, fa, fb));
        }
    }
    roots
        .into_iter()
        .map(|r| {
            let mut r = r;
            while r >= period {
                r = r - period;
            }
            while r < T::zero() {
                r = r + period;
            }
            r
        })
        .collect()
}

fn refine_root<T: Real>(f: &impl Fn(T) -> T, mut a: T, mut b: T, mut fa: T, mut fb: T) -> T {
    let tol = T::of(1e-10);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        // secant proposal, fall back to bisection when it leaves the bracket
        let mut m = if fb != fa {
            b - fb * (b - a) / (fb - fa)
        } else {
            (a + b) * T::of(0.5)
        };
        let lo = a.min(b);
        let hi = a.max(b);
        let guard = (hi - lo) * T::of(1e-3);
        if !(m > lo + guard && m < hi - guard) {
            m = (a + b) * T::of(0.5);
        }
        let fm = f(m);
        if fm == T::zero() {
            return m;
        }
        if (fm > T::zero()) == (fa > T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    (a + b) * T::of(0.5)
}

/// Solve the square system `a x = b` in place by Gaussian elimination with
/// partial pivoting. Intended for tiny systems (frames, Newton steps).
pub fn solve_dense<T: Real>(a: &mut Vec<Vec<T>>, b: &mut Vec<T>) -> Result<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[piv][col].abs() < T::of(1e-300) {
            return Err(Error::QuadratureFailure("singular linear system".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let upd = a[col][k] * f;
                a[row][k] = a[row][k] - upd;
            }
            let upd = b[col] * f;
            b[row] = b[row] - upd;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s = s - a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Ok(x)
}

/// Particular solution and nullspace basis of an underdetermined system
/// `rows · x = rhs` (more unknowns than independent equations), via
/// Gauss-Jordan with column pivoting. Free variables are set to zero in the
/// particular solution.
pub fn affine_solution_set<T: Real>(
    rows: &[Vec<T>],
    rhs: &[T],
) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let m = rows.len();
    let n = rows[0].len();
    let mut a: Vec<Vec<T>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &v)| {
            let mut row = r.clone();
            row.push(v);
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for col in 0..n {
        let piv = (r..m)
            .filter(|&i| a[i][col].abs() > T::of(1e-12))
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(piv) = piv else { continue };
        a.swap(r, piv);
        let d = a[r][col];
        for k in 0..=n {
            a[r][k] = a[r][k] / d;
        }
        for i in 0..m {
            if i != r && a[i][col].abs() > T::zero() {
                let f = a[i][col];
                for k in 0..=n {
                    let upd = a[r][k] * f;
                    a[i][k] = a[i][k] - upd;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == m {
            break;
        }
    }
    // consistency of dropped rows
    for i in r..m {
        if a[i][n].abs() > T::of(1e-9) {
            return Err(Error::QuadratureFailure(
                "inconsistent closure system".into(),
            ));
        }
    }
    let mut particular = vec![T::zero(); n];
    for (ri, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = a[ri][n];
    }
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![T::zero(); n];
        v[fc] = T::one();
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[ri][fc];
        }
        basis.push(v);
    }
    Ok((particular, basis))
}

/// Uniform random unit vector (Gaussian triple, normalized).
pub fn random_unit<T: Real, R: Rng>(rng: &mut R) -> Vec3<T> {
    loop {
        let g = |rng: &mut R| -> f64 { StandardNormal.sample(rng) };
        let v = Vec3::new(T::of(g(rng)), T::of(g(rng)), T::of(g(rng)));
        let n = v.norm();
        if n > T::of(1e-6) {
            return v / n;
        }
    }
}

/// Total winding of a closed sequence of plane vectors, in turns. The input
/// is one period; the closing step back to the first vector is included.
pub fn winding_turns<T: Real>(xy: &[(T, T)]) -> T {
    let mut total = T::zero();
    let m = xy.len();
    for k in 0..m {
        let (x0, y0) = xy[k];
        let (x1, y1) = xy[(k + 1) % m];
        total = total + (x0 * y1 - y0 * x1).atan2(x0 * x1 + y0 * y1);
    }
    total / T::two_pi()
}

/// Sample mean and standard error.
pub fn mean_stderr<T: Real>(xs: &[T]) -> (T, T) {
    let n = T::of_usize(xs.len());
    let mean = xs.iter().fold(T::zero(), |a, &b| a + b) / n;
    let var = xs
        .iter()
        .fold(T::zero(), |a, &b| a + (b - mean) * (b - mean))
        / (n - T::one());
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn periodic_integral_is_spectral() {
        let v = integrate_periodic(|t: f64| (t.sin()).exp(), 1e-12).unwrap();
        // 2*pi*I_0(1)
        assert!((v - 7.95492652101284).abs() < 1e-10);
    }

    #[test]
    fn roots_of_shifted_cosine() {
        let roots = roots_periodic(|t: f64| t.cos() - 0.3, 256);
        assert_eq!(roots.len(), 2);
        let r = 0.3f64.acos();
        assert!((roots[0] - r).abs() < 1e-9);
        assert!((roots[1] - (std::f64::consts::TAU - r)).abs() < 1e-9);
    }

    #[test]
    fn dense_solve_roundtrip() {
        let mut a = vec![
            vec![2.0f64, 1.0, -1.0],
            vec![-3.0, -1.0, 2.0],
            vec![-2.0, 1.0, 2.0],
        ];
        let mut b = vec![8.0f64, -11.0, -3.0];
        let x = solve_dense(&mut a, &mut b).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
        assert!((x[2] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn affine_set_of_rank_deficient_system() {
        // x + y + z = 1 with two copies of the same row
        let rows = vec![vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0]];
        let (p, basis) = affine_solution_set(&rows, &[1.0, 2.0]).unwrap();
        assert_eq!(basis.len(), 2);
        let s: f64 = p.iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        for v in &basis {
            let s: f64 = v.iter().sum();
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn winding_of_circle_is_one() {
        let pts: Vec<(f64, f64)> = (0..256)
            .map(|k| {
                let t = k as f64 / 256.0 * std::f64::consts::TAU;
                (t.cos(), t.sin())
            })
            .collect();
        assert!((winding_turns(&pts) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_unit_is_unit_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u: Vec3<f64> = random_unit(&mut rng);
        assert!((u.norm() - 1.0).abs() < 1e-12);
        let mut rng2 = ChaCha8Rng::seed_from_u64(1);
        let u2: Vec3<f64> = random_unit(&mut rng2);
        assert_eq!(u.to_array(), u2.to_array());
    }
}
