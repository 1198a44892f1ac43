//! Polytope-side calculus: weighted integrals on Delzant polytopes,
//! the Donaldson-Futaki invariant, the toric conformal curvature identity,
//! and the interval closed form.

mod futaki;
mod integrate;
mod metric;
mod mpoly;
mod polytope;

pub use futaki::{
    futaki, ibp_residual, obstruction_probe, solve_interval, toric_scalar, weighted_divergence2,
    FutakiReport, IntervalSolution,
};
pub use integrate::{
    integrate_boundary, integrate_boundary_with_order, integrate_interior,
    integrate_interior_with_order, Integral, WeightMode, GAUSS_ORDER,
};
pub use metric::{check_boundary_conditions, PolyMetric, ToricMetric};
pub use mpoly::MPoly;
pub use polytope::{
    builtin_polytope, builtin_polytope_names, AffineWeight, Facet, Polytope, ToricError,
};
