//! Weighted interior and facet integrals on Delzant polytopes.
//!
//! Interior weights are integer powers of the affine potential: e^{nf} = u⁻¹
//! and e^{(n+2)f} = u^{-(n+2)/n}, i.e. u⁻³ for n = 1 and u⁻² for n = 2.
//! The n = 1 integrals reduce to exact Laurent antiderivatives in t = u(z);
//! the n = 2 integrals use fan triangulation with tensorized Gauss rules and
//! a doubled-order error estimate. Facet measure: dμ = dσ/‖u_j‖ for the
//! primitive inward normal u_j (point masses when n = 1).

use num_traits::Zero;

use crate::logpoly::LogLaurent;
use crate::quad::gauss_legendre;
use crate::rational::{rat_from_f64, rat_int, rat_powi, to_f64, Rat};
use crate::toric::mpoly::MPoly;
use crate::toric::polytope::{AffineWeight, Polytope, ToricError};

/// Which exponential of the conformal potential weights the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// e^{nf} = u⁻¹.
    Nf,
    /// e^{(n+2)f} = u^{-(n+2)/n}; an integer power for n ≤ 2.
    NPlus2F,
}

impl WeightMode {
    pub fn exponent(self, n: usize) -> i64 {
        match self {
            WeightMode::Nf => 1,
            WeightMode::NPlus2F => match n {
                1 => 3,
                2 => 2,
                _ => unreachable!("validated n ≤ 2"),
            },
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
}

/// Default tensor Gauss order for 2-D quadrature (doubled for the estimate).
pub const GAUSS_ORDER: usize = 12;

/// ∫_Δ ξ(z)·u(z)^{-k} dv with k the mode exponent.
pub fn integrate_interior(
    poly: &Polytope,
    weight: &AffineWeight,
    xi: &MPoly,
    mode: WeightMode,
) -> Result<Integral, ToricError> {
    integrate_interior_with_order(poly, weight, xi, mode, GAUSS_ORDER)
}

pub fn integrate_interior_with_order(
    poly: &Polytope,
    weight: &AffineWeight,
    xi: &MPoly,
    mode: WeightMode,
    order: usize,
) -> Result<Integral, ToricError> {
    weight.check_positive(poly)?;
    if xi.n != poly.n {
        return Err(ToricError::Parse("test function dimension mismatch".into()));
    }
    let k = mode.exponent(poly.n);
    match poly.n {
        1 => {
            let lo = poly
                .vertices
                .iter()
                .map(|v| v[0].clone())
                .min()
                .expect("nonempty");
            let hi = poly
                .vertices
                .iter()
                .map(|v| v[0].clone())
                .max()
                .expect("nonempty");
            let value = exact_interval_integral(xi, weight, k, &lo, &hi);
            Ok(Integral {
                value,
                error_estimate: 0.0,
            })
        }
        2 => {
            let f = |z: &[f64]| xi.eval_f64(z) * weight.eval(z).powi(-(k as i32));
            let coarse = polygon_quadrature(poly, &f, order);
            let fine = polygon_quadrature(poly, &f, 2 * order);
            Ok(Integral {
                value: fine,
                error_estimate: (fine - coarse).abs(),
            })
        }
        _ => Err(ToricError::UnsupportedDimension(poly.n)),
    }
}

/// Exact ∫ ξ(z)·u(z)^{-k} dz over [lo, hi] via the substitution t = u(z):
/// the integrand becomes a Laurent polynomial in t (plus ln t for t⁻¹ terms).
pub(crate) fn exact_interval_integral(
    xi: &MPoly,
    weight: &AffineWeight,
    k: i64,
    lo: &Rat,
    hi: &Rat,
) -> f64 {
    let a = rat_from_f64(weight.a[0]);
    let b = rat_from_f64(weight.a_const);
    let coeffs = xi.univariate_coeffs();
    if a.is_zero() {
        // constant weight: plain polynomial integral scaled by b^{-k}
        let mut total = Rat::zero();
        for (d, c) in coeffs.iter().enumerate() {
            let e = d as i64 + 1;
            total += c * (rat_powi(hi, e) - rat_powi(lo, e)) / rat_int(e);
        }
        return to_f64(&(total * rat_powi(&b, -k)));
    }
    // ξ(z) with z = (t − b)/a expands to a polynomial in t
    let mut poly_t = LogLaurent::zero();
    let shift = LogLaurent::from_terms([(1, rat_int(1)), (0, -b.clone())], []);
    let mut zpow = LogLaurent::constant(rat_int(1));
    let inv_a = rat_int(1) / a.clone();
    for (d, c) in coeffs.iter().enumerate() {
        if d > 0 {
            zpow = zpow.mul_laurent(&shift).expect("log-free").scale(&inv_a);
        }
        poly_t = poly_t.add(&zpow.scale(c));
    }
    let integrand = poly_t
        .mul_laurent(&LogLaurent::monomial(-k, rat_int(1)))
        .expect("log-free");
    let primitive = integrand.antiderivative().expect("laurent integrand");
    let t0 = &a * lo + &b;
    let t1 = &a * hi + &b;
    // dz = dt/a
    (primitive.eval(to_f64(&t1)).expect("u > 0") - primitive.eval(to_f64(&t0)).expect("u > 0"))
        * to_f64(&inv_a)
}

/// Fan triangulation of the (convex) polygon and tensor Gauss quadrature via
/// the Duffy map of the unit square onto each triangle.
fn polygon_quadrature(poly: &Polytope, f: &dyn Fn(&[f64]) -> f64, order: usize) -> f64 {
    let pts = poly.vertices_ccw();
    let (nodes, weights) = gauss_legendre(order);
    // map [-1,1] → [0,1]
    let nodes01: Vec<f64> = nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
    let w01: Vec<f64> = weights.iter().map(|w| 0.5 * w).collect();
    let mut total = 0.0;
    for t in 1..pts.len() - 1 {
        let (p0, p1, p2) = (&pts[0], &pts[t], &pts[t + 1]);
        let jac = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        let area_factor = jac.abs();
        for (xi, wi) in nodes01.iter().zip(&w01) {
            for (eta, we) in nodes01.iter().zip(&w01) {
                // Duffy: (ξ, η) → barycentric (1−ξ, ξ(1−η), ξη), Jacobian ξ
                let l1 = xi * (1.0 - eta);
                let l2 = xi * eta;
                let l0 = 1.0 - l1 - l2;
                let z = [
                    l0 * p0[0] + l1 * p1[0] + l2 * p2[0],
                    l0 * p0[1] + l1 * p1[1] + l2 * p2[1],
                ];
                total += wi * we * xi * area_factor * f(&z);
            }
        }
    }
    total
}

/// ∫_{∂Δ} ξ·u⁻¹ dμ with dμ = dσ/‖u_j‖ per facet; point masses in n = 1.
pub fn integrate_boundary(
    poly: &Polytope,
    weight: &AffineWeight,
    xi: &MPoly,
) -> Result<Integral, ToricError> {
    integrate_boundary_with_order(poly, weight, xi, GAUSS_ORDER)
}

pub fn integrate_boundary_with_order(
    poly: &Polytope,
    weight: &AffineWeight,
    xi: &MPoly,
    order: usize,
) -> Result<Integral, ToricError> {
    weight.check_positive(poly)?;
    if xi.n != poly.n {
        return Err(ToricError::Parse("test function dimension mismatch".into()));
    }
    match poly.n {
        1 => {
            let mut value = 0.0;
            for v in &poly.vertices {
                let z = [to_f64(&v[0])];
                value += xi.eval_f64(&z) / weight.eval(&z);
            }
            Ok(Integral {
                value,
                error_estimate: 0.0,
            })
        }
        2 => {
            let f = |z: &[f64]| xi.eval_f64(z) / weight.eval(z);
            let coarse = boundary_quadrature(poly, &f, order);
            let fine = boundary_quadrature(poly, &f, 2 * order);
            Ok(Integral {
                value: fine,
                error_estimate: (fine - coarse).abs(),
            })
        }
        _ => Err(ToricError::UnsupportedDimension(poly.n)),
    }
}

fn boundary_quadrature(poly: &Polytope, f: &dyn Fn(&[f64]) -> f64, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let mut total = 0.0;
    for (j, facet) in poly.facets.iter().enumerate() {
        let verts = poly.facet_vertices(j);
        debug_assert_eq!(verts.len(), 2);
        let a: Vec<f64> = verts[0].iter().map(to_f64).collect();
        let b: Vec<f64> = verts[1].iter().map(to_f64).collect();
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        let scale = len / facet.norm();
        for (x, w) in nodes.iter().zip(&weights) {
            let t = 0.5 * (x + 1.0);
            let z = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            total += 0.5 * w * scale * f(&z);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::polytope::builtin_polytope;

    fn interval() -> Polytope {
        Polytope::from_json(builtin_polytope("interval").unwrap()).unwrap()
    }

    fn square() -> Polytope {
        Polytope::from_json(builtin_polytope("square").unwrap()).unwrap()
    }

    #[test]
    fn flat_interior_integrals() {
        let poly = interval();
        let w = AffineWeight::flat(1);
        // ∫₀¹ z dz = 1/2
        let xi = MPoly::var(1, 0);
        let v = integrate_interior(&poly, &w, &xi, WeightMode::Nf).unwrap();
        assert!((v.value - 0.5).abs() < 1e-15);
        // ∫₀¹ dz/(1+z) = ln 2 with u = z + 1
        let w = AffineWeight {
            a: vec![1.0],
            a_const: 1.0,
        };
        let one = MPoly::constant(1, rat_int(1));
        let v = integrate_interior(&poly, &w, &one, WeightMode::Nf).unwrap();
        assert!((v.value - 2.0_f64.ln()).abs() < 1e-14);
        // unit square, ∫ z₁z₂ = 1/4
        let sq = square();
        let w = AffineWeight::flat(2);
        let xi = MPoly::var(2, 0).mul(&MPoly::var(2, 1));
        let v = integrate_interior(&sq, &w, &xi, WeightMode::Nf).unwrap();
        assert!((v.value - 0.25).abs() < 1e-12, "{}", v.value);
    }

    #[test]
    fn weighted_exact_interval_integrals() {
        // ∫₀¹ (z+1)⁻³ dz = 3/8 and ∫₀¹ z(z+1)⁻³ dz = 1/8
        let poly = interval();
        let w = AffineWeight {
            a: vec![1.0],
            a_const: 1.0,
        };
        let one = MPoly::constant(1, rat_int(1));
        let v = integrate_interior(&poly, &w, &one, WeightMode::NPlus2F).unwrap();
        assert!((v.value - 0.375).abs() < 1e-14);
        let xi = MPoly::var(1, 0);
        let v = integrate_interior(&poly, &w, &xi, WeightMode::NPlus2F).unwrap();
        assert!((v.value - 0.125).abs() < 1e-14);
    }

    #[test]
    fn boundary_integrals() {
        let poly = interval();
        let w = AffineWeight::flat(1);
        // ξ = z point masses: ξ(0) + ξ(1) = 1
        let xi = MPoly::var(1, 0);
        let v = integrate_boundary(&poly, &w, &xi).unwrap();
        assert!((v.value - 1.0).abs() < 1e-15);
        // u = z+1: 1/u(0) + 1/u(1) = 3/2
        let w = AffineWeight {
            a: vec![1.0],
            a_const: 1.0,
        };
        let one = MPoly::constant(1, rat_int(1));
        let v = integrate_boundary(&poly, &w, &one).unwrap();
        assert!((v.value - 1.5).abs() < 1e-15);
        // unit square perimeter (unit normals): 4
        let sq = square();
        let w = AffineWeight::flat(2);
        let one = MPoly::constant(2, rat_int(1));
        let v = integrate_boundary(&sq, &w, &one).unwrap();
        assert!((v.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_order_is_stable() {
        let sq = square();
        let w = AffineWeight {
            a: vec![0.25, -0.125],
            a_const: 1.0,
        };
        let xi = MPoly::var(2, 0);
        for mode in [WeightMode::Nf, WeightMode::NPlus2F] {
            let v1 = integrate_interior_with_order(&sq, &w, &xi, mode, GAUSS_ORDER).unwrap();
            let v2 = integrate_interior_with_order(&sq, &w, &xi, mode, 2 * GAUSS_ORDER).unwrap();
            assert!(
                (v1.value - v2.value).abs() <= 1e-9 * v1.value.abs().max(1.0),
                "mode {mode:?}: {} vs {}",
                v1.value,
                v2.value
            );
        }
    }

    #[test]
    fn simplex_measures() {
        // boundary mass 3 (two unit legs + hypotenuse of length √2 over ‖u‖=√2),
        // interior area 1/2
        let poly = Polytope::from_json(builtin_polytope("simplex").unwrap()).unwrap();
        let w = AffineWeight::flat(2);
        let one = MPoly::constant(2, rat_int(1));
        let bd = integrate_boundary(&poly, &w, &one).unwrap();
        assert!((bd.value - 3.0).abs() < 1e-12);
        let int = integrate_interior(&poly, &w, &one, WeightMode::NPlus2F).unwrap();
        assert!((int.value - 0.5).abs() < 1e-12);
    }
}
