//! Finite-dimensional tensor engine for left-invariant almost Hermitian
//! structures on Lie algebras. Homogeneity turns every comparison identity
//! between the Chern, third, and Riemannian scalar curvatures into finite
//! linear algebra over the structure constants, computed here in a J-adapted
//! orthonormal frame.

mod builtin;
mod connection;
mod curvature;
mod model;
mod report;
mod torsion;

pub use builtin::{builtin_model, builtin_model_names};
pub use connection::{chern_connection, levi_civita, Connection, ConnectionKind};
pub use curvature::{
    chern_scalar_complex, chern_scalar_real, curvature, d_invariant_2form, lefschetz_trace,
    ricci_forms, riemannian_scalar, third_scalar_complex, third_scalar_real, CurvatureTensor,
};
pub use model::{AdaptedFrame, FrameError, LieAlgebraModel};
pub use report::{
    compute_report, conformal_scale_constant, verify_identities, IdentityResiduals, Norms,
    ScalarReport,
};
pub use torsion::{tm_type_projections, torsion_package, TorsionData};
