use crate::scalar::Real;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Plain 3-vector over the generic scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn normalized(self) -> Self {
        self / self.norm()
    }

    /// Triple product det(a, b, c).
    pub fn triple(a: Self, b: Self, c: Self) -> T {
        a.cross(b).dot(c)
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Any unit vector orthogonal to `self` (which must be nonzero).
    pub fn any_orthogonal(self) -> Self {
        let pick = if self.z.abs() < T::of(0.9) * self.norm() {
            Self::new(T::zero(), T::zero(), T::one())
        } else {
            Self::new(T::one(), T::zero(), T::zero())
        };
        self.cross(pick).normalized()
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Div<T> for Vec3<T> {
    type Output = Self;
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type V = Vec3<f64>;

    #[test]
    fn cross_is_right_handed() {
        let e1 = V::new(1.0, 0.0, 0.0);
        let e2 = V::new(0.0, 1.0, 0.0);
        assert_eq!(e1.cross(e2), V::new(0.0, 0.0, 1.0));
        assert_eq!(V::triple(e1, e2, V::new(0.0, 0.0, 1.0)), 1.0);
    }

    #[test]
    fn orthogonal_really_is() {
        for v in [
            V::new(0.3, -2.0, 0.01),
            V::new(0.0, 0.0, 5.0),
            V::new(1e-8, 0.0, 1.0),
        ] {
            let o = v.any_orthogonal();
            assert!(v.dot(o).abs() < 1e-12 * v.norm());
            assert!((o.norm() - 1.0).abs() < 1e-12);
        }
    }
}
