use thiserror::Error;

/// Library-wide error type. Payloads are reported as `f64` regardless of the
/// working scalar so messages stay printable.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no darboux framing: {0}")]
    NoDarbouxFraming(String),

    #[error("not asymptotic: binormal-derived normal field has sign-changing geodesic torsion (min {min_abs:e} at t={at})")]
    NotAsymptotic { min_abs: f64, at: f64 },

    #[error("inconsistent framing: darboux residual {residual:e} exceeds {limit:e}")]
    InconsistentFraming { residual: f64, limit: f64 },

    #[error("degenerate inflection near t={at}: curvature vanishes without a transversal sign change")]
    DegenerateInflection { at: f64 },

    #[error("spherical singularity: geodesic torsion vanishes at t={at}, spherical image is not immersed")]
    SphericalSingularity { at: f64 },

    #[error("no self-linking: {0}")]
    NoSelfLinking(String),

    #[error("theorem violation: lhs={lhs} rhs={rhs} for direction ({ux}, {uy}, {uz})")]
    TheoremViolation {
        lhs: i64,
        rhs: f64,
        ux: f64,
        uy: f64,
        uz: f64,
    },

    #[error("closure infeasible: tangent moments do not surround the origin (margin {margin:e})")]
    ClosureInfeasible { margin: f64 },

    #[error("imaginary component: sigma={sigma} makes the normal field leave the unit sphere near t={at}")]
    ImaginaryComponent { sigma: f64, at: f64 },

    #[error("closure failure: curve endpoint gap {gap:e} exceeds {limit:e}")]
    ClosureFailure { gap: f64, limit: f64 },

    #[error("inapplicable direction: {0}")]
    InapplicableDirection(String),

    #[error("non-generic direction: {0}")]
    NonGenericDirection(String),

    #[error("resolution failure: {0}")]
    ResolutionFailure(String),

    #[error("epsilon resolution failure: ribbon crossings stayed ambiguous down to epsilon={epsilon:e}")]
    EpsilonResolutionFailure { epsilon: f64 },

    #[error("sampling failure: no admissible direction found after {tries} attempts")]
    SamplingFailure { tries: usize },

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("ill-conditioned linking: strands approach to {min_distance:e}, below {limit:e}")]
    IllConditionedLinking { min_distance: f64, limit: f64 },

    #[error("linking routes disagree: diagram count gives {via_crossings}, gauss integral gives {via_gauss}")]
    Inconsistency { via_crossings: i64, via_gauss: i64 },

    #[error("normal loop is not immersed: |n'| vanishes near t={at}")]
    NotImmersed { at: f64 },

    #[error("invalid curve spec: {0}")]
    InvalidSpec(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
