//! Numerical Cheeger-Gromoll tangent-bundle geometry and formula auditing.
//!
//! The crate builds the Cheeger-Gromoll metric on the tangent bundle of a
//! Riemannian manifold in the adapted frame, derives its Levi-Civita
//! connection with a brute-force anholonomic Koszul oracle, and audits a
//! catalog of closed-form expressions (connection coefficients, lift
//! covariant derivatives, Lie derivatives, curvature components) against
//! that oracle, reporting a residual verdict per claim.

pub mod bundle;
pub mod claims;
pub mod connection;
pub mod curvature;
pub mod geodesic;
pub mod geometry;
pub mod killing;
pub mod lifts;
pub mod linalg;
pub mod sampler;
pub mod scalar;

/// Concrete scalar used by the audit layer. The numeric kernel is generic
/// over [`scalar::Scalar`]; audits run at f64.
pub type Real = f64;
