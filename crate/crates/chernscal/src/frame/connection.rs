//! Levi-Civita and Chern connections of a left-invariant structure.
//!
//! For invariant fields the Koszul formula collapses to structure-constant
//! algebra. The Chern connection is computed over T^{1,0} from its defining
//! identity h(W, ∇_X Z) = h(W, [X^{0,1}, Z]) + h([W, X^{0,1}], Z) (derivative
//! term dropped by invariance) and converted back to real coefficients.

use num_complex::Complex64;

use crate::frame::model::AdaptedFrame;
use crate::linalg::Mat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionKind {
    Chern,
    LeviCivita,
}

/// Connection coefficients Γ_ijk = ⟨∇_{e_i} e_j, e_k⟩ in the adapted frame.
#[derive(Debug, Clone)]
pub struct Connection {
    pub kind: ConnectionKind,
    pub dim: usize,
    pub gamma: Vec<f64>,
}

impl Connection {
    #[inline]
    pub fn g(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[(i * self.dim + j) * self.dim + k]
    }

    /// ∇_{e_i} as a matrix: column j holds the coefficients of ∇_{e_i} e_j.
    pub fn nabla(&self, i: usize) -> Mat {
        let m = self.dim;
        let mut out = Mat::zeros(m, m);
        for j in 0..m {
            for k in 0..m {
                out[(k, j)] = self.g(i, j, k);
            }
        }
        out
    }

    /// Metric compatibility residual: Γ_ijk + Γ_ikj.
    pub fn metricity_residual(&self) -> f64 {
        let m = self.dim;
        let mut r = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    r = r.max((self.g(i, j, k) + self.g(i, k, j)).abs());
                }
            }
        }
        r
    }

    /// Torsion-free residual (for Levi-Civita): Γ_ijk − Γ_jik − c_ijk.
    pub fn torsion_free_residual(&self, frame: &AdaptedFrame) -> f64 {
        let m = self.dim;
        let mut r = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    r = r.max((self.g(i, j, k) - self.g(j, i, k) - frame.c(i, j, k)).abs());
                }
            }
        }
        r
    }

    /// ∇J residual: commutator of each ∇_{e_i} with the standard J.
    pub fn parallel_j_residual(&self) -> f64 {
        let m = self.dim;
        let mut jm = Mat::zeros(m, m);
        for a in 0..m / 2 {
            jm[(2 * a + 1, 2 * a)] = 1.0;
            jm[(2 * a, 2 * a + 1)] = -1.0;
        }
        (0..m)
            .map(|i| {
                let n = self.nabla(i);
                n.matmul(&jm).sub(&jm.matmul(&n)).max_abs()
            })
            .fold(0.0_f64, f64::max)
    }
}

/// Koszul in an orthonormal invariant frame: Γ_ijk = ½(c_ijk − c_jki + c_kij).
pub fn levi_civita(frame: &AdaptedFrame) -> Connection {
    let m = frame.dim;
    let mut gamma = vec![0.0; m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                gamma[(i * m + j) * m + k] =
                    0.5 * (frame.c(i, j, k) - frame.c(j, k, i) + frame.c(k, i, j));
            }
        }
    }
    Connection {
        kind: ConnectionKind::LeviCivita,
        dim: m,
        gamma,
    }
}

/// Bracket of complexified invariant vectors (coefficients over the real frame).
#[allow(clippy::needless_range_loop)]
pub fn bracket_c(frame: &AdaptedFrame, u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let m = frame.dim;
    let mut out = vec![Complex64::ZERO; m];
    for i in 0..m {
        if u[i] == Complex64::ZERO {
            continue;
        }
        for j in 0..m {
            if v[j] == Complex64::ZERO {
                continue;
            }
            let uv = u[i] * v[j];
            for k in 0..m {
                let c = frame.c(i, j, k);
                if c != 0.0 {
                    out[k] += uv * c;
                }
            }
        }
    }
    out
}

/// z_α = ½(e_{2α} − i·e_{2α+1}) as a coefficient vector (0-indexed α).
pub fn z_vector(m: usize, alpha: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::ZERO; m];
    v[2 * alpha] = Complex64::new(0.5, 0.0);
    v[2 * alpha + 1] = Complex64::new(0.0, -0.5);
    v
}

/// Coefficient of z_α in the T^{1,0} part of a complexified vector.
#[inline]
pub fn coeff_z(v: &[Complex64], alpha: usize) -> Complex64 {
    v[2 * alpha] + Complex64::i() * v[2 * alpha + 1]
}

/// Complex Chern coefficients A[i][β][α] with ∇_{e_i} z_β = Σ_α A z_α.
pub fn chern_complex_coefficients(frame: &AdaptedFrame) -> Vec<Complex64> {
    let m = frame.dim;
    let n = m / 2;
    let mut a = vec![Complex64::ZERO; m * n * n];
    for i in 0..m {
        // X^{0,1} = ½(e_i + i·J e_i)
        let mut x01 = vec![Complex64::ZERO; m];
        x01[i] += Complex64::new(0.5, 0.0);
        let (ji, sign) = frame.j_index(i);
        x01[ji] += Complex64::new(0.0, 0.5 * sign);
        for beta in 0..n {
            let zb = z_vector(m, beta);
            let lie1 = bracket_c(frame, &x01, &zb);
            for alpha in 0..n {
                let za = z_vector(m, alpha);
                let lie2 = bracket_c(frame, &za, &x01);
                a[(i * n + beta) * n + alpha] = coeff_z(&lie1, alpha) + coeff_z(&lie2, beta).conj();
            }
        }
    }
    a
}

/// The Chern connection in real coefficients.
pub fn chern_connection(frame: &AdaptedFrame) -> Connection {
    let m = frame.dim;
    let n = m / 2;
    let a = chern_complex_coefficients(frame);
    let mut gamma = vec![0.0; m * m * m];
    {
        let mut set = |i: usize, j: usize, k: usize, v: f64| {
            gamma[(i * m + j) * m + k] = v;
        };
        for i in 0..m {
            for beta in 0..n {
                for alpha in 0..n {
                    let av = a[(i * n + beta) * n + alpha];
                    set(i, 2 * beta, 2 * alpha, av.re);
                    set(i, 2 * beta, 2 * alpha + 1, av.im);
                    set(i, 2 * beta + 1, 2 * alpha, -av.im);
                    set(i, 2 * beta + 1, 2 * alpha + 1, av.re);
                }
            }
        }
    }
    Connection {
        kind: ConnectionKind::Chern,
        dim: m,
        gamma,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::builtin::builtin_model;
    use crate::frame::model::LieAlgebraModel;

    fn frame_of(name: &str) -> AdaptedFrame {
        LieAlgebraModel::from_json(builtin_model(name).unwrap())
            .unwrap()
            .adapted()
            .unwrap()
    }

    #[test]
    fn abelian_connections_vanish() {
        let frame = frame_of("torus4");
        let lc = levi_civita(&frame);
        let ch = chern_connection(&frame);
        assert!(lc.gamma.iter().all(|g| g.abs() < 1e-14));
        assert!(ch.gamma.iter().all(|g| g.abs() < 1e-14));
    }

    #[test]
    fn heisenberg_koszul_by_hand() {
        // [e1,e2] = e3 with g = Id: ⟨D_{e1}e2, e3⟩ = 1/2
        let j = crate::linalg::Mat::from_rows(&[
            vec![0.0, -1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, -1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ]);
        let model = LieAlgebraModel::new(
            "heis",
            4,
            &[(1, 2, 3, 1.0)],
            crate::linalg::Mat::identity(4),
            j,
        )
        .unwrap();
        // identity metric and standard J ordering: adapted frame is the input frame
        let frame = model.adapted().unwrap();
        let lc = levi_civita(&frame);
        assert!((lc.g(0, 1, 2) - 0.5).abs() < 1e-12);
        assert!(lc.torsion_free_residual(&frame) < 1e-12);
        assert!(lc.metricity_residual() < 1e-12);
    }

    #[test]
    fn bi_invariant_is_half_bracket() {
        // su(2) factor of the hopf model: D_X Y = ½[X,Y] for bi-invariant metrics
        let frame = frame_of("hopf");
        let lc = levi_civita(&frame);
        let m = frame.dim;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    assert!(
                        (lc.g(i, j, k) - 0.5 * frame.c(i, j, k)).abs() < 1e-12,
                        "({i},{j},{k})"
                    );
                }
            }
        }
    }

    #[test]
    fn chern_is_hermitian_on_all_models() {
        for name in crate::frame::builtin::builtin_model_names() {
            let frame = frame_of(name);
            let ch = chern_connection(&frame);
            assert!(ch.metricity_residual() < 1e-10, "{name} metricity");
            assert!(ch.parallel_j_residual() < 1e-10, "{name} nabla J");
            let lc = levi_civita(&frame);
            assert!(lc.metricity_residual() < 1e-12, "{name} LC metricity");
            assert!(
                lc.torsion_free_residual(&frame) < 1e-12,
                "{name} LC torsion-free"
            );
        }
    }

    #[test]
    fn kaehler_chern_equals_levi_civita() {
        // torus4 is flat Kähler; also check a nonflat Kähler product of
        // hyperbolic planes: [e1,e2] = e2, [e3,e4] = e4.
        let j = crate::linalg::Mat::from_rows(&[
            vec![0.0, -1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, -1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ]);
        let model = LieAlgebraModel::new(
            "h2xh2",
            4,
            &[(1, 2, 2, 1.0), (3, 4, 4, 1.0)],
            crate::linalg::Mat::identity(4),
            j,
        )
        .unwrap();
        let frame = model.adapted().unwrap();
        let lc = levi_civita(&frame);
        let ch = chern_connection(&frame);
        let max_diff = lc
            .gamma
            .iter()
            .zip(&ch.gamma)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        assert!(max_diff < 1e-12, "Kähler case: Chern = Levi-Civita");
    }
}
