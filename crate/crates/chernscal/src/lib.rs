//! Numerical and exact-symbolic workbench for conformally constant Chern
//! scalar curvature metrics.
//!
//! Three subsystems share an exact-rational symbolic core:
//!
//! - [`calabi`] / [`ruled`]: closed-form solve and certification of the
//!   boundary-value ODE behind the generalized Calabi construction on ruled
//!   manifolds, the induced fiber profile, and the fundamental constant.
//! - [`frame`]: a finite-dimensional tensor engine for left-invariant almost
//!   Hermitian structures on Lie algebras (Chern and Levi-Civita data,
//!   torsion, Nijenhuis tensor, Ricci forms, all scalar curvatures, and the
//!   pointwise comparison identities between them).
//! - [`toric`]: weighted polytope integrals, the Donaldson-Futaki invariant,
//!   the toric conformal curvature identity, and the interval closed form.
//!
//! Symbolic construction is exact over arbitrary-precision rationals
//! ([`logpoly::LogLaurent`]); floating point enters only at evaluation and
//! linear-solve time.

pub mod calabi;
pub mod emit;
pub mod frame;
pub mod linalg;
pub mod logpoly;
pub mod quad;
pub mod rational;
pub mod ruled;
pub mod toric;

pub use logpoly::LogLaurent;
pub use rational::Rat;
