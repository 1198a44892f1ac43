//! Toric metrics in moment coordinates: a symmetric matrix H_ij(z) with
//! analytic first and second partials (finite differences would contaminate
//! the exact-identity residual tests).

use crate::rational::rat_int;
use crate::toric::mpoly::MPoly;
use crate::toric::polytope::{Polytope, ToricError};

pub trait ToricMetric {
    fn dim(&self) -> usize;
    fn h(&self, i: usize, j: usize, z: &[f64]) -> f64;
    /// H_ij,k = ∂H_ij/∂z_k.
    fn h_d1(&self, i: usize, j: usize, k: usize, z: &[f64]) -> f64;
    /// H_ij,kl.
    fn h_d2(&self, i: usize, j: usize, k: usize, l: usize, z: &[f64]) -> f64;
}

/// Polynomial toric metric with exact rational coefficients and precomputed
/// symbolic partials.
#[derive(Debug, Clone)]
pub struct PolyMetric {
    n: usize,
    entries: Vec<MPoly>,
    d1: Vec<MPoly>,
    d2: Vec<MPoly>,
}

impl PolyMetric {
    pub fn new(n: usize, rows: Vec<Vec<MPoly>>) -> Self {
        assert_eq!(rows.len(), n);
        for row in &rows {
            assert_eq!(row.len(), n);
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                assert!(
                    *entry == rows[j][i],
                    "toric metric must be symmetric in (i, j)"
                );
            }
        }
        let entries: Vec<MPoly> = rows.into_iter().flatten().collect();
        let mut d1 = Vec::with_capacity(n * n * n);
        for e in &entries {
            for k in 0..n {
                d1.push(e.partial(k));
            }
        }
        let mut d2 = Vec::with_capacity(n * n * n * n);
        for ij in 0..n * n {
            for k in 0..n {
                let dk = &d1[ij * n + k];
                for l in 0..n {
                    d2.push(dk.partial(l));
                }
            }
        }
        PolyMetric { n, entries, d1, d2 }
    }

    /// Profile H = 2z(1−z) of the round metric on the interval.
    pub fn round_interval() -> Self {
        let z = MPoly::var(1, 0);
        let h = z.scale(&rat_int(2)).add(&z.mul(&z).scale(&rat_int(-2)));
        PolyMetric::new(1, vec![vec![h]])
    }

    /// diag(2z₁(1−z₁), 2z₂(1−z₂)) on the unit square (a product of rounds).
    pub fn round_square() -> Self {
        let mk = |i: usize| {
            let z = MPoly::var(2, i);
            z.scale(&rat_int(2)).add(&z.mul(&z).scale(&rat_int(-2)))
        };
        PolyMetric::new(
            2,
            vec![vec![mk(0), MPoly::zero(2)], vec![MPoly::zero(2), mk(1)]],
        )
    }

    /// Fubini-Study profile H_ij = 2(z_i δ_ij − z_i z_j) on the simplex.
    pub fn fubini_study_simplex() -> Self {
        let z1 = MPoly::var(2, 0);
        let z2 = MPoly::var(2, 1);
        let two = rat_int(2);
        let h11 = z1.scale(&two).add(&z1.mul(&z1).scale(&-two.clone()));
        let h22 = z2.scale(&two).add(&z2.mul(&z2).scale(&-two.clone()));
        let h12 = z1.mul(&z2).scale(&-two.clone());
        PolyMetric::new(2, vec![vec![h11, h12.clone()], vec![h12, h22]])
    }

    pub fn entry(&self, i: usize, j: usize) -> &MPoly {
        &self.entries[i * self.n + j]
    }
}

impl ToricMetric for PolyMetric {
    fn dim(&self) -> usize {
        self.n
    }

    fn h(&self, i: usize, j: usize, z: &[f64]) -> f64 {
        self.entries[i * self.n + j].eval_f64(z)
    }

    fn h_d1(&self, i: usize, j: usize, k: usize, z: &[f64]) -> f64 {
        self.d1[(i * self.n + j) * self.n + k].eval_f64(z)
    }

    fn h_d2(&self, i: usize, j: usize, k: usize, l: usize, z: &[f64]) -> f64 {
        self.d2[((i * self.n + j) * self.n + k) * self.n + l].eval_f64(z)
    }
}

/// Spot-check the compactification boundary conditions on each facet: at
/// facet points, H·u_j = 0 and ∇(u_jᵀ H u_j) = 2 u_j. Also requires positive
/// definiteness at the centroid. Returns the max residual.
pub fn check_boundary_conditions(
    metric: &dyn ToricMetric,
    poly: &Polytope,
) -> Result<f64, ToricError> {
    let n = poly.n;
    if metric.dim() != n {
        return Err(ToricError::Parse("metric dimension mismatch".into()));
    }
    let mut max_res = 0.0_f64;
    for (j, facet) in poly.facets.iter().enumerate() {
        let verts = poly.facet_vertices(j);
        let vf: Vec<Vec<f64>> = verts
            .iter()
            .map(|v| v.iter().map(crate::rational::to_f64).collect())
            .collect();
        // facet sample points: midpoint and quarter points of the vertex hull
        let samples: Vec<Vec<f64>> = match n {
            1 => vec![vf[0].clone()],
            2 => [0.25, 0.5, 0.75]
                .iter()
                .map(|t| {
                    (0..n)
                        .map(|d| vf[0][d] * (1.0 - t) + vf[1][d] * t)
                        .collect()
                })
                .collect(),
            _ => unreachable!(),
        };
        let u: Vec<f64> = facet.normal.iter().map(|x| *x as f64).collect();
        for z in &samples {
            for i in 0..n {
                let hu: f64 = (0..n).map(|k| metric.h(i, k, z) * u[k]).sum();
                max_res = max_res.max(hu.abs());
            }
            for k in 0..n {
                let mut d = 0.0;
                for i in 0..n {
                    for l in 0..n {
                        d += u[i] * u[l] * metric.h_d1(i, l, k, z);
                    }
                }
                max_res = max_res.max((d - 2.0 * u[k]).abs());
            }
        }
    }
    // positive definiteness at an interior probe
    let c = poly.centroid();
    let pd = match n {
        1 => metric.h(0, 0, &c) > 0.0,
        2 => {
            let a = metric.h(0, 0, &c);
            let d = metric.h(1, 1, &c);
            let b = metric.h(0, 1, &c);
            a > 0.0 && a * d - b * b > 0.0
        }
        _ => unreachable!(),
    };
    if !pd {
        return Err(ToricError::NotDelzant(
            "metric not positive definite at the centroid".into(),
        ));
    }
    Ok(max_res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::polytope::{builtin_polytope, Polytope};

    #[test]
    fn corpus_metrics_satisfy_boundary_conditions() {
        let cases: Vec<(&str, PolyMetric)> = vec![
            ("interval", PolyMetric::round_interval()),
            ("square", PolyMetric::round_square()),
            ("simplex", PolyMetric::fubini_study_simplex()),
        ];
        for (name, metric) in cases {
            let poly = Polytope::from_json(builtin_polytope(name).unwrap()).unwrap();
            let res = check_boundary_conditions(&metric, &poly).unwrap();
            assert!(res < 1e-12, "{name}: boundary residual {res}");
        }
    }

    #[test]
    fn fubini_study_curvature_is_constant_twelve() {
        // s^H = −Σ H_ij,ij = 12 everywhere on the simplex
        let h = PolyMetric::fubini_study_simplex();
        for z in [[0.2, 0.3], [0.1, 0.05], [0.4, 0.55]] {
            let mut s = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    s -= h.h_d2(i, j, i, j, &z);
                }
            }
            assert!((s - 12.0).abs() < 1e-12);
        }
    }
}
