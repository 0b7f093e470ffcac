use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};

/// Scalar type the whole library is generic over.
///
/// Anything float-like works (`f32`, `f64`, ...); the blanket impl picks up
/// every type satisfying the num-traits bounds.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Shorthand for pulling literals into the generic scalar.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable in scalar type")
    }

    fn two_pi() -> Self {
        Self::PI() + Self::PI()
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_roundtrip() {
        assert_eq!(f64::of(1.5), 1.5);
        assert_eq!(f32::of(0.25), 0.25f32);
        assert_eq!(f64::of_usize(7), 7.0);
    }

    #[test]
    fn two_pi_matches() {
        assert!((f64::two_pi() - std::f64::consts::TAU).abs() < 1e-15);
    }
}
