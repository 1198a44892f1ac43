//! Donaldson-Futaki invariant, the integration-by-parts identity behind it,
//! the toric conformal curvature identity, and the interval closed form.
//!
//! F_{Δ,f}(ξ) = 2∫_{∂Δ} e^{nf} ξ dμ − 2·(∫_{∂Δ} e^{nf} dμ / ∫_Δ e^{(n+2)f} dv)·∫_Δ ξ e^{(n+2)f} dv,
//! C = 2∫_{∂Δ} e^{nf} dμ / ∫_Δ e^{(n+2)f} dv, with e^{-nf} = u affine.

use serde::Serialize;

use crate::linalg::{LuFullPivot, Mat};
use crate::rational::rat_int;
use crate::toric::integrate::{
    exact_interval_integral, integrate_boundary, integrate_interior, WeightMode,
};
use crate::toric::metric::{PolyMetric, ToricMetric};
use crate::toric::mpoly::MPoly;
use crate::toric::polytope::{AffineWeight, Polytope, ToricError};

#[derive(Debug, Clone, Serialize)]
pub struct FutakiReport {
    pub boundary_mass: f64,
    pub interior_mass: f64,
    /// F per affine basis function, keyed "1", "z1", …, "zn".
    pub futaki_values: Vec<(String, f64)>,
    pub c_value: f64,
    pub quadrature_error_estimate: f64,
}

/// Donaldson-Futaki invariant on the affine basis {1, z_1, …, z_n} and the
/// fundamental constant C = 2·boundary/interior.
pub fn futaki(poly: &Polytope, weight: &AffineWeight) -> Result<FutakiReport, ToricError> {
    let n = poly.n;
    let one = MPoly::constant(n, rat_int(1));
    let bd = integrate_boundary(poly, weight, &one)?;
    let int = integrate_interior(poly, weight, &one, WeightMode::NPlus2F)?;
    let ratio = bd.value / int.value;
    let mut err = bd.error_estimate + int.error_estimate;
    let mut futaki_values = Vec::with_capacity(n + 1);
    let mut basis: Vec<(String, MPoly)> = vec![("1".into(), one)];
    for i in 0..n {
        basis.push((format!("z{}", i + 1), MPoly::var(n, i)));
    }
    for (name, xi) in &basis {
        let b = integrate_boundary(poly, weight, xi)?;
        let v = integrate_interior(poly, weight, xi, WeightMode::NPlus2F)?;
        err += b.error_estimate + v.error_estimate;
        futaki_values.push((name.clone(), 2.0 * b.value - 2.0 * ratio * v.value));
    }
    // definition-level identities: F(1) = 0 and C > 0
    debug_assert!(futaki_values[0].1.abs() <= 1e-12 * bd.value.abs().max(1.0));
    debug_assert!(ratio > 0.0);
    Ok(FutakiReport {
        boundary_mass: bd.value,
        interior_mass: int.value,
        futaki_values,
        c_value: 2.0 * ratio,
        quadrature_error_estimate: err,
    })
}

/// Σ_{ij} (e^{nf} H_ij)_{,ij} at a point, expanded with the analytic partials
/// of H and ∂u = a (e^{nf} = u⁻¹):
/// u⁻¹ΣH_ij,ij − 2u⁻²Σ a_i H_ij,j + 2u⁻³Σ a_i a_j H_ij.
pub fn weighted_divergence2(metric: &dyn ToricMetric, weight: &AffineWeight, z: &[f64]) -> f64 {
    let n = metric.dim();
    let u = weight.eval(z);
    let mut h2 = 0.0;
    let mut ah1 = 0.0;
    let mut aah = 0.0;
    for i in 0..n {
        for j in 0..n {
            h2 += metric.h_d2(i, j, i, j, z);
            ah1 += weight.a[i] * metric.h_d1(i, j, j, z);
            aah += weight.a[i] * weight.a[j] * metric.h(i, j, z);
        }
    }
    h2 / u - 2.0 * ah1 / (u * u) + 2.0 * aah / (u * u * u)
}

/// |LHS − RHS| of the integration-by-parts identity
/// −∫_Δ Σ(e^{nf}H_ij)_{,ij} ξ dv = 2∫_{∂Δ} e^{nf} ξ dμ.
///
/// For n = 1 the left side is evaluated exactly: (u⁻¹H)″ expands into
/// u⁻¹H″ − 2a·u⁻²H′ + 2a²·u⁻³H with polynomial H, ξ, so each term is a
/// closed-form Laurent antiderivative in t = u(z). For n = 2 the left side
/// uses the doubled-order polygon quadrature.
pub fn ibp_residual(
    poly: &Polytope,
    weight: &AffineWeight,
    metric: &PolyMetric,
    xi: &MPoly,
) -> Result<f64, ToricError> {
    weight.check_positive(poly)?;
    let rhs = 2.0 * integrate_boundary(poly, weight, xi)?.value;
    let lhs = match poly.n {
        1 => {
            let lo = poly.vertices.iter().map(|v| v[0].clone()).min().unwrap();
            let hi = poly.vertices.iter().map(|v| v[0].clone()).max().unwrap();
            let a = weight.a[0];
            let h = metric.entry(0, 0);
            let t1 = exact_interval_integral(&h.partial(0).partial(0).mul(xi), weight, 1, &lo, &hi);
            let t2 = exact_interval_integral(&h.partial(0).mul(xi), weight, 2, &lo, &hi);
            let t3 = exact_interval_integral(&h.mul(xi), weight, 3, &lo, &hi);
            -(t1 - 2.0 * a * t2 + 2.0 * a * a * t3)
        }
        2 => {
            let f = |z: &[f64]| -weighted_divergence2(metric, weight, z) * xi.eval_f64(z);
            polygon_integral(poly, &f)
        }
        _ => return Err(ToricError::UnsupportedDimension(poly.n)),
    };
    Ok((lhs - rhs).abs())
}

fn polygon_integral(poly: &Polytope, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    // tensor Gauss on the triangulated polygon at doubled default order
    let pts = poly.vertices_ccw();
    let order = 2 * crate::toric::integrate::GAUSS_ORDER;
    let (nodes, weights) = crate::quad::gauss_legendre(order);
    let nodes01: Vec<f64> = nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
    let w01: Vec<f64> = weights.iter().map(|w| 0.5 * w).collect();
    let mut total = 0.0;
    for t in 1..pts.len() - 1 {
        let (p0, p1, p2) = (&pts[0], &pts[t], &pts[t + 1]);
        let jac = ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1])).abs();
        for (xi, wi) in nodes01.iter().zip(&w01) {
            for (eta, we) in nodes01.iter().zip(&w01) {
                let l1 = xi * (1.0 - eta);
                let l2 = xi * eta;
                let l0 = 1.0 - l1 - l2;
                let z = [
                    l0 * p0[0] + l1 * p1[0] + l2 * p2[0],
                    l0 * p0[1] + l1 * p1[1] + l2 * p2[1],
                ];
                total += wi * we * xi * jac * f(&z);
            }
        }
    }
    total
}

/// Pointwise toric curvature data: s^H = −ΣH_ij,ij, the conformal scalar of
/// g_{f,J}, and the residual of the identity
/// e^{(n+2)f}·s^H_{g_{f,J}} = −Σ(e^{nf}H_ij)_{,ij}.
pub fn toric_scalar(
    poly: &Polytope,
    metric: &dyn ToricMetric,
    weight: &AffineWeight,
    z: &[f64],
) -> Result<(f64, f64, f64), ToricError> {
    let n = metric.dim();
    if poly.n != n || weight.a.len() != n || z.len() != n {
        return Err(ToricError::Parse(
            "polytope, metric, weight, and point dimensions must agree".into(),
        ));
    }
    if !poly.is_interior(z) {
        return Err(ToricError::BoundaryPoint);
    }
    let u = weight.eval(z);
    let mut h2 = 0.0;
    let mut ah1 = 0.0;
    let mut aah = 0.0;
    for i in 0..n {
        for j in 0..n {
            h2 += metric.h_d2(i, j, i, j, z);
            ah1 += weight.a[i] * metric.h_d1(i, j, j, z);
            aah += weight.a[i] * weight.a[j] * metric.h(i, j, z);
        }
    }
    let sh = -h2;
    // u^{2/n}, u^{2/n−1}, u^{2/n−2} are integer powers for n ∈ {1, 2}
    let (u_a, u_b, u_c) = match n {
        1 => (u * u, u, 1.0),
        2 => (u, 1.0, 1.0 / u),
        _ => return Err(ToricError::UnsupportedDimension(n)),
    };
    let sh_conformal = -u_a * h2 + 2.0 * u_b * ah1 - 2.0 * u_c * aah;
    let lhs = u.powi(-(WeightMode::NPlus2F.exponent(n) as i32)) * sh_conformal;
    let eq_residual = (lhs + weighted_divergence2(metric, weight, z)).abs();
    Ok((sh, sh_conformal, eq_residual))
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalSolution {
    pub kappa: f64,
    /// Residual of the fourth boundary condition under the least-squares fit.
    pub compat: f64,
    /// H as a quadratic polynomial h0 + h1·z + h2·z².
    pub h_coeffs: [f64; 3],
    pub residuals: [f64; 4],
}

/// Closed-form solve of (u⁻¹H)″ = −κ·u⁻³ on the unit interval under
/// H(0) = H(1) = 0, H′(0) = 2, H′(1) = −2 (overdetermined 4×3 least squares).
///
/// Double integration gives H = −κ/(2a²) + C₁·z·u + C₂·u for a ≠ 0 and
/// H = −κz²/(2b²) + C₁z + C₂ for the constant weight u = b.
pub fn solve_interval(weight: &AffineWeight) -> Result<IntervalSolution, ToricError> {
    if weight.a.len() != 1 {
        return Err(ToricError::Parse("interval solve needs n = 1".into()));
    }
    let a = weight.a[0];
    let b = weight.a_const;
    if b <= 0.0 || a + b <= 0.0 {
        return Err(ToricError::WeightNotPositive(
            vec![if b <= 0.0 { 0.0 } else { 1.0 }],
            b.min(a + b),
        ));
    }
    // basis (columns): κ, C₁, C₂ against rows H(0), H(1), H′(0), H′(1)
    type HFromCoeffs = Box<dyn Fn(&[f64]) -> [f64; 3]>;
    let (rows, h_of): (Vec<Vec<f64>>, HFromCoeffs) = if a != 0.0 {
        let rows = vec![
            vec![-0.5 / (a * a), 0.0, b],
            vec![-0.5 / (a * a), a + b, a + b],
            vec![0.0, b, a],
            vec![0.0, 2.0 * a + b, a],
        ];
        let h = move |x: &[f64]| -> [f64; 3] {
            // H = −κ/(2a²) + C₁ z(az+b) + C₂(az+b)
            let (k, c1, c2) = (x[0], x[1], x[2]);
            [-k / (2.0 * a * a) + c2 * b, c1 * b + c2 * a, c1 * a]
        };
        (rows, Box::new(h))
    } else {
        let rows = vec![
            vec![0.0, 0.0, 1.0],
            vec![-0.5 / (b * b), 1.0, 1.0],
            vec![0.0, 1.0, 0.0],
            vec![-1.0 / (b * b), 1.0, 0.0],
        ];
        let h = move |x: &[f64]| -> [f64; 3] {
            let (k, c1, c2) = (x[0], x[1], x[2]);
            [c2, c1, -k / (2.0 * b * b)]
        };
        (rows, Box::new(h))
    };
    let rhs = [0.0, 0.0, 2.0, -2.0];
    // normal equations AᵀA x = Aᵀb (3×3)
    let mut ata = Mat::zeros(3, 3);
    let mut atb = vec![0.0; 3];
    for (row, r) in rows.iter().zip(&rhs) {
        for i in 0..3 {
            atb[i] += row[i] * r;
            for j in 0..3 {
                ata[(i, j)] += row[i] * row[j];
            }
        }
    }
    let lu = LuFullPivot::new(&ata);
    if lu.is_singular() {
        return Err(ToricError::Parse("degenerate interval system".into()));
    }
    let x = lu.solve(&atb);
    let mut residuals = [0.0; 4];
    for (i, (row, r)) in rows.iter().zip(&rhs).enumerate() {
        residuals[i] = row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() - r;
    }
    Ok(IntervalSolution {
        kappa: x[0],
        compat: residuals[3].abs(),
        h_coeffs: h_of(&x),
        residuals,
    })
}

/// Report whether the interval closed form and the Futaki invariant co-vanish
/// for the given weight (the solvability ⇒ F = 0 direction, plus the
/// empirical record of the converse).
pub fn obstruction_probe(
    poly: &Polytope,
    weight: &AffineWeight,
) -> Result<(IntervalSolution, FutakiReport), ToricError> {
    let sol = solve_interval(weight)?;
    let report = futaki(poly, weight)?;
    Ok((sol, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::metric::PolyMetric;
    use crate::toric::polytope::builtin_polytope;

    fn interval() -> Polytope {
        Polytope::from_json(builtin_polytope("interval").unwrap()).unwrap()
    }

    fn square() -> Polytope {
        Polytope::from_json(builtin_polytope("square").unwrap()).unwrap()
    }

    #[test]
    fn flat_interval_futaki() {
        let poly = interval();
        let w = AffineWeight::flat(1);
        let report = futaki(&poly, &w).unwrap();
        assert!((report.c_value - 4.0).abs() < 1e-14);
        for (name, v) in &report.futaki_values {
            assert!(v.abs() < 1e-14, "{name}: {v}");
        }
    }

    #[test]
    fn square_futaki_vanishes_by_symmetry() {
        let poly = square();
        let w = AffineWeight::flat(2);
        let report = futaki(&poly, &w).unwrap();
        for (name, v) in &report.futaki_values {
            assert!(v.abs() < 1e-10, "{name}: {v}");
        }
        assert!(report.c_value > 0.0);
    }

    #[test]
    fn ibp_flat_interval() {
        // LHS = −∫(2z−2z²)″ = 4 = RHS = 2·2
        let poly = interval();
        let w = AffineWeight::flat(1);
        let h = PolyMetric::round_interval();
        let one = MPoly::constant(1, rat_int(1));
        let r = ibp_residual(&poly, &w, &h, &one).unwrap();
        assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn ibp_square_and_weighted_interval() {
        let sq = square();
        let w = AffineWeight::flat(2);
        let h = PolyMetric::round_square();
        let xi = MPoly::var(2, 0);
        let r = ibp_residual(&sq, &w, &h, &xi).unwrap();
        assert!(r < 1e-6, "square residual {r}");
        let poly = interval();
        let w = AffineWeight {
            a: vec![1.0],
            a_const: 1.0,
        };
        let h = PolyMetric::round_interval();
        let xi = MPoly::var(1, 0);
        let r = ibp_residual(&poly, &w, &h, &xi).unwrap();
        assert!(r < 1e-8, "weighted interval residual {r}");
    }

    #[test]
    fn toric_scalar_identity() {
        let poly = interval();
        let h = PolyMetric::round_interval();
        // flat: s^H = 4 everywhere
        let w = AffineWeight::flat(1);
        let (sh, shc, res) = toric_scalar(&poly, &h, &w, &[0.3]).unwrap();
        assert!((sh - 4.0).abs() < 1e-12);
        assert!((shc - 4.0).abs() < 1e-12);
        assert!(res < 1e-12);
        // u = z + 1 at z = 1/2
        let w = AffineWeight {
            a: vec![1.0],
            a_const: 1.0,
        };
        let (_, _, res) = toric_scalar(&poly, &h, &w, &[0.5]).unwrap();
        assert!(res < 1e-10, "residual {res}");
        // boundary points rejected
        assert!(toric_scalar(&poly, &h, &w, &[1.0]).is_err());
    }

    #[test]
    fn interval_solve_flat() {
        let sol = solve_interval(&AffineWeight::flat(1)).unwrap();
        assert!((sol.kappa - 4.0).abs() < 1e-12);
        assert!(sol.compat < 1e-12);
        // H = 2z(1−z) = 0 + 2z − 2z²
        assert!((sol.h_coeffs[0]).abs() < 1e-12);
        assert!((sol.h_coeffs[1] - 2.0).abs() < 1e-12);
        assert!((sol.h_coeffs[2] + 2.0).abs() < 1e-12);
        // any other constant weight reduces to the flat case with κ = 4b²
        let sol = solve_interval(&AffineWeight {
            a: vec![0.0],
            a_const: 2.0,
        })
        .unwrap();
        assert!((sol.kappa - 16.0).abs() < 1e-12);
        assert!(sol.compat < 1e-12);
        assert!((sol.h_coeffs[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn interval_solve_weighted_matches_futaki_constant() {
        // u = z+1: κ = 8 and H = 2z(1−z) again; C_value must equal κ
        let w = AffineWeight {
            a: vec![1.0],
            a_const: 1.0,
        };
        let (sol, report) = obstruction_probe(&interval(), &w).unwrap();
        assert!((sol.kappa - 8.0).abs() < 1e-12, "kappa {}", sol.kappa);
        assert!(sol.compat < 1e-12);
        assert!((report.c_value - sol.kappa).abs() < 1e-10);
        let fz = report
            .futaki_values
            .iter()
            .find(|(n, _)| n == "z1")
            .unwrap()
            .1;
        assert!(fz.abs() < 1e-12, "F(z) = {fz}");
    }
}
