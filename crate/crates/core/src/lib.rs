//! Geometry of closed space curves carrying a unit normal framing.
//!
//! The crate computes the classical knot-diagram invariants (crossing
//! numbers, writhe, linking, self-linking) together with the Darboux-frame
//! quantities of a framed curve (geodesic curvature and torsion, twist,
//! rotation of normal fields), and cross-checks the integral identities
//! tying the two pictures together.
//!
//! Everything is generic over the scalar type through [`scalar::Real`];
//! the aliases at the crate root pin the common `f64` and `f32`
//! instantiations.

pub mod construction;
pub mod curve;
pub mod error;
pub mod framing;
pub mod invariants;
pub mod numeric;
pub mod projection;
pub mod scalar;
pub mod vec3;

pub use error::{Error, Result};
pub use scalar::Real;
pub use vec3::Vec3;

/// Closed curve with `f64` coefficients.
pub type Curve64 = curve::ClosedCurve<f64>;
/// Closed curve with `f32` coefficients.
pub type Curve32 = curve::ClosedCurve<f32>;
/// Unit normal field with `f64` coefficients.
pub type Normal64 = framing::NormalField<f64>;
/// Framed curve with `f64` coefficients.
pub type Framed64 = framing::FramedCurve<f64>;
/// Framed curve with `f32` coefficients.
pub type Framed32 = framing::FramedCurve<f32>;
/// Projection direction with `f64` coordinates.
pub type Direction64 = projection::Direction<f64>;
/// 3-vector over `f64`.
pub type Vector64 = Vec3<f64>;
/// 3-vector over `f32`.
pub type Vector32 = Vec3<f32>;
