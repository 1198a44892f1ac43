//! Curvature tensors R_XY = [∇_X, ∇_Y] − ∇_{[X,Y]}, the three Ricci forms of
//! the Chern curvature, and the scalar curvatures.
//!
//! The first Ricci form uses ρ(X,Y) = ½tr(J∘R_XY); the second contracts the
//! form slots, r(X,Y) = −½Σ_i g(R_{e_i,Je_i}X, Y); the third comes from the
//! complex components R_{AB γ}{}^δ over T^{1,0}. The Chern scalar is cross-
//! checked between the real-frame trace route and the complex-component route.

use num_complex::Complex64;

use crate::frame::connection::{coeff_z, z_vector, Connection};
use crate::frame::model::AdaptedFrame;
use crate::linalg::Mat;

/// Curvature operators indexed by frame pairs: column l of `op(i, j)` holds
/// R_{e_i e_j} e_l.
#[derive(Debug, Clone)]
pub struct CurvatureTensor {
    pub dim: usize,
    ops: Vec<Mat>,
}

impl CurvatureTensor {
    pub fn op(&self, i: usize, j: usize) -> &Mat {
        &self.ops[i * self.dim + j]
    }
}

#[allow(clippy::needless_range_loop)]
pub fn curvature(frame: &AdaptedFrame, conn: &Connection) -> CurvatureTensor {
    let m = frame.dim;
    let nablas: Vec<Mat> = (0..m).map(|i| conn.nabla(i)).collect();
    let mut ops = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let mut r = nablas[i]
                .matmul(&nablas[j])
                .sub(&nablas[j].matmul(&nablas[i]));
            for k in 0..m {
                let c = frame.c(i, j, k);
                if c != 0.0 {
                    r = r.sub(&nablas[k].scale(c));
                }
            }
            ops.push(r);
        }
    }
    CurvatureTensor { dim: m, ops }
}

/// Lefschetz trace of a 2-form given as an antisymmetric matrix:
/// Λ(ψ) = ½Σ_i ψ(e_i, Je_i) = Σ_a ψ(e_{2a}, e_{2a+1}).
pub fn lefschetz_trace(frame: &AdaptedFrame, form: &Mat) -> f64 {
    (0..frame.n()).map(|a| form[(2 * a, 2 * a + 1)]).sum()
}

/// The three Ricci forms of the Chern curvature as antisymmetric matrices.
pub fn ricci_forms(frame: &AdaptedFrame, r: &CurvatureTensor) -> (Mat, Mat, Mat) {
    let m = frame.dim;
    // first Ricci: ρ(X,Y) = ½ tr(J ∘ R_XY)
    let mut rho = Mat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let op = r.op(i, j);
            let mut tr = 0.0;
            for l in 0..m {
                // tr(J∘R) = Σ_l (J(Re_l))_l with (Jw)_l = −sl·w_{jl}
                let (jl, sl) = frame.j_index(l);
                tr += -sl * op[(jl, l)];
            }
            rho[(i, j)] = 0.5 * tr;
        }
    }
    // second Ricci: r(X,Y) = −½ Σ_i g(R_{e_i, Je_i} X, Y) = −Σ_a g(R_{2a,2a+1}X, Y)
    let mut second = Mat::zeros(m, m);
    for a in 0..m / 2 {
        let op = r.op(2 * a, 2 * a + 1);
        for x in 0..m {
            for y in 0..m {
                second[(x, y)] -= op[(y, x)];
            }
        }
    }
    let sigma = third_ricci(frame, r);
    (rho, second, sigma)
}

/// Complex curvature endomorphism for complexified form slots, as an operator
/// on complexified coefficient vectors.
#[allow(clippy::needless_range_loop)]
fn complex_op(r: &CurvatureTensor, u: &[Complex64], v: &[Complex64]) -> Vec<Mat> {
    // returns [real part, imaginary part] of Σ u_i v_j R_{ij}
    let m = r.dim;
    let mut re = Mat::zeros(m, m);
    let mut im = Mat::zeros(m, m);
    for i in 0..m {
        if u[i] == Complex64::ZERO {
            continue;
        }
        for j in 0..m {
            if v[j] == Complex64::ZERO {
                continue;
            }
            let w = u[i] * v[j];
            if w == Complex64::ZERO {
                continue;
            }
            let op = r.op(i, j);
            if w.re != 0.0 {
                re = re.add(&op.scale(w.re));
            }
            if w.im != 0.0 {
                im = im.add(&op.scale(w.im));
            }
        }
    }
    vec![re, im]
}

fn apply_complex(op: &[Mat], v: &[Complex64]) -> Vec<Complex64> {
    let m = op[0].rows;
    let mut out = vec![Complex64::ZERO; m];
    for k in 0..m {
        let mut acc = Complex64::ZERO;
        for l in 0..m {
            let coeff = Complex64::new(op[0][(k, l)], op[1][(k, l)]);
            acc += coeff * v[l];
        }
        out[k] = acc;
    }
    out
}

/// Complex component (R_{u v})_γ{}^δ = coefficient of z_δ in R_{u v} z_γ.
fn component(
    r: &CurvatureTensor,
    u: &[Complex64],
    v: &[Complex64],
    gamma: usize,
    delta: usize,
) -> Complex64 {
    let m = r.dim;
    let op = complex_op(r, u, v);
    let image = apply_complex(&op, &z_vector(m, gamma));
    coeff_z(&image, delta)
}

/// Chern scalar via the complex components: s^C = 2 Σ_{α,γ} (R_{z_α z̄_α})_γ{}^γ.
pub fn chern_scalar_complex(frame: &AdaptedFrame, r: &CurvatureTensor) -> f64 {
    let m = frame.dim;
    let n = frame.n();
    let mut acc = Complex64::ZERO;
    for alpha in 0..n {
        let z = z_vector(m, alpha);
        let zbar: Vec<Complex64> = z.iter().map(|c| c.conj()).collect();
        let op = complex_op(r, &z, &zbar);
        for gamma in 0..n {
            let image = apply_complex(&op, &z_vector(m, gamma));
            acc += coeff_z(&image, gamma);
        }
    }
    2.0 * acc.re
}

/// Third scalar via the complex components: s = 2 Σ_{α,β} (R_{z_α z̄_β})_β{}^α.
pub fn third_scalar_complex(frame: &AdaptedFrame, r: &CurvatureTensor) -> f64 {
    let m = frame.dim;
    let n = frame.n();
    let mut acc = Complex64::ZERO;
    for alpha in 0..n {
        let z = z_vector(m, alpha);
        for beta in 0..n {
            let zbar: Vec<Complex64> = z_vector(m, beta).iter().map(|c| c.conj()).collect();
            acc += component(r, &z, &zbar, beta, alpha);
        }
    }
    2.0 * acc.re
}

/// Third Ricci form σ, reconstructed as a real 2-form from its complex
/// coefficients: σ = (i/2)·S2_{λμ} z^λ∧z^μ + i·S1_{λμ̄} z^λ∧z̄^μ̄ + conj.
fn third_ricci(frame: &AdaptedFrame, r: &CurvatureTensor) -> Mat {
    let m = frame.dim;
    let n = frame.n();
    // S1[λ][μ] = Σ_α conj((R_{z_μ z̄_α})_α{}^λ), the (1,1) coefficient
    // S2[λ][μ] = Σ_α conj((R_{z̄_μ z̄_α})_α{}^λ), the (2,0) coefficient
    let mut s1 = vec![Complex64::ZERO; n * n];
    let mut s2 = vec![Complex64::ZERO; n * n];
    for mu in 0..n {
        let zmu = z_vector(m, mu);
        let zmu_bar: Vec<Complex64> = zmu.iter().map(|c| c.conj()).collect();
        for alpha in 0..n {
            let za_bar: Vec<Complex64> = z_vector(m, alpha).iter().map(|c| c.conj()).collect();
            let op1 = complex_op(r, &zmu, &za_bar);
            let op2 = complex_op(r, &zmu_bar, &za_bar);
            let im1 = apply_complex(&op1, &z_vector(m, alpha));
            let im2 = apply_complex(&op2, &z_vector(m, alpha));
            for lambda in 0..n {
                s1[lambda * n + mu] += coeff_z(&im1, lambda).conj();
                s2[lambda * n + mu] += coeff_z(&im2, lambda).conj();
            }
        }
    }
    // z^λ pairs with real vectors: z^λ(e_{2β}) = δ, z^λ(e_{2β+1}) = i·δ;
    // z̄^μ̄(e_{2β}) = δ, z̄^μ̄(e_{2β+1}) = −i·δ.
    let pair_z = |lambda: usize, v: usize| -> Complex64 {
        if v / 2 != lambda {
            Complex64::ZERO
        } else if v.is_multiple_of(2) {
            Complex64::ONE
        } else {
            Complex64::i()
        }
    };
    let pair_zbar = |mu: usize, v: usize| -> Complex64 {
        if v / 2 != mu {
            Complex64::ZERO
        } else if v.is_multiple_of(2) {
            Complex64::ONE
        } else {
            -Complex64::i()
        }
    };
    let mut sigma = Mat::zeros(m, m);
    for x in 0..m {
        for y in 0..m {
            let mut v11 = Complex64::ZERO;
            let mut v20 = Complex64::ZERO;
            for lambda in 0..n {
                for mu in 0..n {
                    // (z^λ ∧ z̄^μ̄)(e_x, e_y)
                    let w11 =
                        pair_z(lambda, x) * pair_zbar(mu, y) - pair_z(lambda, y) * pair_zbar(mu, x);
                    v11 += s1[lambda * n + mu] * w11;
                    let w20 = pair_z(lambda, x) * pair_z(mu, y) - pair_z(lambda, y) * pair_z(mu, x);
                    v20 += s2[lambda * n + mu] * w20;
                }
            }
            // real form: (1,1) part is real, (2,0)+(0,2) contributes 2·Re
            sigma[(x, y)] = (Complex64::i() * v11).re + 2.0 * (Complex64::i() * 0.5 * v20).re;
        }
    }
    sigma
}

/// Chern scalar via the real frame: s^C = Λ(ρ) = ¼ Σ_i tr(J R_{e_i, Je_i}).
pub fn chern_scalar_real(frame: &AdaptedFrame, rho: &Mat) -> f64 {
    lefschetz_trace(frame, rho)
}

/// Third scalar via the real frame: s = ½ Σ_{ij} g(R_{e_i e_j} e_j, e_i).
pub fn third_scalar_real(r: &CurvatureTensor) -> f64 {
    let m = r.dim;
    let mut s = 0.0;
    for i in 0..m {
        for j in 0..m {
            s += r.op(i, j)[(i, j)];
        }
    }
    0.5 * s
}

/// Riemannian scalar: s^g = Σ_{ij} g(R_{e_i e_j} e_j, e_i) over Levi-Civita.
pub fn riemannian_scalar(r: &CurvatureTensor) -> f64 {
    2.0 * third_scalar_real(r)
}

/// Invariant-form exterior derivative of a 2-form given as a matrix.
pub fn d_invariant_2form(frame: &AdaptedFrame, form: &Mat) -> f64 {
    let m = frame.dim;
    let mut max = 0.0_f64;
    let paired = |i: usize, j: usize, k: usize| -> f64 {
        (0..m).map(|l| frame.c(i, j, l) * form[(l, k)]).sum()
    };
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let d = -paired(i, j, k) + paired(i, k, j) - paired(j, k, i);
                max = max.max(d.abs());
            }
        }
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::builtin::{builtin_model, builtin_model_names};
    use crate::frame::connection::{chern_connection, levi_civita};
    use crate::frame::model::LieAlgebraModel;

    #[test]
    fn scalar_routes_agree_on_all_models() {
        for name in builtin_model_names() {
            let frame = LieAlgebraModel::from_json(builtin_model(name).unwrap())
                .unwrap()
                .adapted()
                .unwrap();
            let chern = chern_connection(&frame);
            let r = curvature(&frame, &chern);
            let (rho, second, sigma) = ricci_forms(&frame, &r);
            let sc_rho = lefschetz_trace(&frame, &rho);
            let sc_r = lefschetz_trace(&frame, &second);
            let sc_complex = chern_scalar_complex(&frame, &r);
            assert!((sc_rho - sc_r).abs() < 1e-10, "{name}: Λ(ρ) = Λ(r)");
            assert!(
                (sc_rho - sc_complex).abs() < 1e-10,
                "{name}: real vs complex route, {sc_rho} vs {sc_complex}"
            );
            let s_real = third_scalar_real(&r);
            let s_complex = third_scalar_complex(&frame, &r);
            assert!(
                (s_real - s_complex).abs() < 1e-10,
                "{name}: third scalar routes, {s_real} vs {s_complex}"
            );
            let s_sigma = lefschetz_trace(&frame, &sigma);
            assert!(
                (s_real - s_sigma).abs() < 1e-10,
                "{name}: Λ(σ) = s, {s_real} vs {s_sigma}"
            );
            // σ and ρ antisymmetric; ρ closed as an invariant form
            assert!(sigma.add(&sigma.transpose()).max_abs() < 1e-10);
            assert!(rho.add(&rho.transpose()).max_abs() < 1e-10);
            assert!(d_invariant_2form(&frame, &rho) < 1e-10, "{name}: dρ = 0");
        }
    }

    #[test]
    fn hyperbolic_product_riemannian_scalar() {
        // H²×H² with curvature −1 factors: s^g = −4
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
        let r = curvature(&frame, &lc);
        assert!((riemannian_scalar(&r) + 4.0).abs() < 1e-12);
    }
}
