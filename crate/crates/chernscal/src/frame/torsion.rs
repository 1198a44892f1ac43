//! Torsion package of the Chern connection: the torsion tensor T, the
//! Nijenhuis tensor N, the torsion 1-form θ, the antisymmetrization t, the
//! invariant exterior derivatives dF and d^cF, and the TM-type projections.
//!
//! Conventions (validated against each other in the identity suite):
//! N(X,Y) = ¼([JX,JY] − J[JX,Y] − J[X,JY] − [X,Y]),
//! d^cF(X,Y,Z) = −dF(JX,JY,JZ), θ_X = tr(Z ↦ T_XZ) = Λ(dF),
//! t = ⅓·(cyclic mean of T) = ⅓ d^cF.

use crate::frame::connection::Connection;
use crate::frame::model::AdaptedFrame;

/// All torsion-level tensors of a model, stored as dense component arrays in
/// the adapted frame: rank-3 objects are indexed [(i·m + j)·m + k].
#[derive(Debug, Clone)]
pub struct TorsionData {
    pub dim: usize,
    /// T_ijk = g(T(e_i, e_j), e_k).
    pub t: Vec<f64>,
    /// N_ijk = g(N(e_i, e_j), e_k).
    pub nijenhuis: Vec<f64>,
    /// θ_i = Σ_j T_ijj.
    pub theta: Vec<f64>,
    /// t_ijk = ⅓(T_jki + T_ijk + T_kij), a 3-form.
    pub t_form: Vec<f64>,
    /// dF_ijk.
    pub df: Vec<f64>,
    /// d^cF_ijk = −dF(J·, J·, J·).
    pub dcf: Vec<f64>,
    /// TM-type projections of T (value index last).
    pub t20: Vec<f64>,
    pub t11: Vec<f64>,
    pub t02: Vec<f64>,
    /// (d^cF)^{2,0}: TM-type (2,0) part of the musical image of d^cF.
    pub dcf20: Vec<f64>,
}

#[inline]
fn idx(m: usize, i: usize, j: usize, k: usize) -> usize {
    (i * m + j) * m + k
}

/// Torsion tensor from connection coefficients and structure constants:
/// T(e_i,e_j) = ∇_i e_j − ∇_j e_i − [e_i, e_j].
fn torsion_tensor(frame: &AdaptedFrame, conn: &Connection) -> Vec<f64> {
    let m = frame.dim;
    let mut t = vec![0.0; m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                t[idx(m, i, j, k)] = conn.g(i, j, k) - conn.g(j, i, k) - frame.c(i, j, k);
            }
        }
    }
    t
}

fn nijenhuis_tensor(frame: &AdaptedFrame) -> Vec<f64> {
    let m = frame.dim;
    let mut n = vec![0.0; m * m * m];
    for i in 0..m {
        let (ji, si) = frame.j_index(i);
        for j in 0..m {
            let (jj, sj) = frame.j_index(j);
            for k in 0..m {
                // (Jw)_k = −sk·w_{kj}, since J e_{kj} = −sk·e_k
                let (kj, sk) = frame.j_index(k);
                let term1 = si * sj * frame.c(ji, jj, k);
                let term2 = -sk * si * frame.c(ji, j, kj);
                let term3 = -sk * sj * frame.c(i, jj, kj);
                let term4 = frame.c(i, j, k);
                n[idx(m, i, j, k)] = 0.25 * (term1 - term2 - term3 - term4);
            }
        }
    }
    n
}

/// Invariant-form exterior derivative of F = g(J·,·):
/// dF(X,Y,Z) = −F([X,Y],Z) + F([X,Z],Y) − F([Y,Z],X).
fn fundamental_form_df(frame: &AdaptedFrame) -> Vec<f64> {
    let m = frame.dim;
    // F_ij = g(J e_i, e_j)
    let mut f = vec![0.0; m * m];
    for i in 0..m {
        let (ji, s) = frame.j_index(i);
        f[i * m + ji] = s;
    }
    let f_of = |bracket_i: usize, bracket_j: usize, frame: &AdaptedFrame, other: usize| -> f64 {
        let mut acc = 0.0;
        for l in 0..m {
            let c = frame.c(bracket_i, bracket_j, l);
            if c != 0.0 {
                acc += c * f[l * m + other];
            }
        }
        acc
    };
    let mut df = vec![0.0; m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                df[idx(m, i, j, k)] =
                    -f_of(i, j, frame, k) + f_of(i, k, frame, j) - f_of(j, k, frame, i);
            }
        }
    }
    df
}

fn twisted_df(frame: &AdaptedFrame, df: &[f64]) -> Vec<f64> {
    let m = frame.dim;
    let mut dcf = vec![0.0; m * m * m];
    for i in 0..m {
        let (ji, si) = frame.j_index(i);
        for j in 0..m {
            let (jj, sj) = frame.j_index(j);
            for k in 0..m {
                let (jk, sk) = frame.j_index(k);
                dcf[idx(m, i, j, k)] = -si * sj * sk * df[idx(m, ji, jj, jk)];
            }
        }
    }
    dcf
}

/// TM-type projections of a TM-valued 2-form ψ (components ψ_ij^k with the
/// value index last). Uses the operator A = −J∘(ψ(J·,·)+ψ(·,J·)), which has
/// eigenvalue r−s on type (r,s): P₂₀ = A(A+2)/8, P₁₁ = (4−A²)/4, P₀₂ = A(A−2)/8.
pub fn tm_type_projections(frame: &AdaptedFrame, psi: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = frame.dim;
    let a1 = type_operator(frame, psi);
    let a2 = type_operator(frame, &a1);
    let mut p20 = vec![0.0; m * m * m];
    let mut p11 = vec![0.0; m * m * m];
    let mut p02 = vec![0.0; m * m * m];
    for t in 0..m * m * m {
        p20[t] = (a2[t] + 2.0 * a1[t]) / 8.0;
        p11[t] = (4.0 * psi[t] - a2[t]) / 4.0;
        p02[t] = (a2[t] - 2.0 * a1[t]) / 8.0;
    }
    (p20, p11, p02)
}

fn type_operator(frame: &AdaptedFrame, psi: &[f64]) -> Vec<f64> {
    let m = frame.dim;
    let mut out = vec![0.0; m * m * m];
    for i in 0..m {
        let (ji, si) = frame.j_index(i);
        for j in 0..m {
            let (jj, sj) = frame.j_index(j);
            for k in 0..m {
                // w = ψ(JX,Y) + ψ(X,JY); out = −J w
                let (kj, sk) = frame.j_index(k);
                let w_kj = si * psi[idx(m, ji, j, kj)] + sj * psi[idx(m, i, jj, kj)];
                // (−Jw)_k = sk·w_{kj} (from J e_{kj} = −sk e_k)
                out[idx(m, i, j, k)] = sk * w_kj;
            }
        }
    }
    out
}

/// Musical image of a 3-form: i(φ)(e_j, e_k) = Σ_i φ_ijk e_i (orthonormal).
fn musical_image(m: usize, phi: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                out[idx(m, j, k, i)] = phi[idx(m, i, j, k)];
            }
        }
    }
    out
}

pub fn torsion_package(frame: &AdaptedFrame, chern: &Connection) -> TorsionData {
    let m = frame.dim;
    let t = torsion_tensor(frame, chern);
    let nijenhuis = nijenhuis_tensor(frame);
    let mut theta = vec![0.0; m];
    for i in 0..m {
        theta[i] = (0..m).map(|j| t[idx(m, i, j, j)]).sum();
    }
    let mut t_form = vec![0.0; m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                t_form[idx(m, i, j, k)] =
                    (t[idx(m, j, k, i)] + t[idx(m, i, j, k)] + t[idx(m, k, i, j)]) / 3.0;
            }
        }
    }
    let df = fundamental_form_df(frame);
    let dcf = twisted_df(frame, &df);
    let (t20, t11, t02) = tm_type_projections(frame, &t);
    let (dcf20, _, _) = tm_type_projections(frame, &musical_image(m, &dcf));
    TorsionData {
        dim: m,
        t,
        nijenhuis,
        theta,
        t_form,
        df,
        dcf,
        t20,
        t11,
        t02,
        dcf20,
    }
}

impl TorsionData {
    /// ‖·‖² in Ω²(M;TM): (1/2!)Σ over all indices.
    pub fn norm2_tm2(v: &[f64]) -> f64 {
        0.5 * v.iter().map(|x| x * x).sum::<f64>()
    }

    /// ‖·‖² in Ω³(M): (1/3!)Σ over all indices.
    pub fn norm2_form3(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>() / 6.0
    }

    pub fn theta_norm2(&self) -> f64 {
        self.theta.iter().map(|x| x * x).sum()
    }

    /// Σ T_ijk T_jki, the contraction in 9|t|² − |T|² = T_ijk T^jki.
    pub fn torsion_cross_contraction(&self) -> f64 {
        let m = self.dim;
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    s += self.t[idx(m, i, j, k)] * self.t[idx(m, j, k, i)];
                }
            }
        }
        s
    }

    /// θ recomputed as the Lefschetz trace of dF: θ_X = ½Σ_i dF(e_i, Je_i, X).
    pub fn theta_from_df(&self, frame: &AdaptedFrame) -> Vec<f64> {
        let m = self.dim;
        (0..m)
            .map(|x| {
                0.5 * (0..m)
                    .map(|i| {
                        let (ji, s) = frame.j_index(i);
                        s * self.df[idx(m, i, ji, x)]
                    })
                    .sum::<f64>()
            })
            .collect()
    }

    /// Max residual of T^{1,1} = 0 (Chern torsion is J-anti-invariant).
    pub fn t11_residual(&self) -> f64 {
        self.t11.iter().fold(0.0_f64, |r, x| r.max(x.abs()))
    }

    /// Max residual of T^{0,2} = N.
    pub fn t02_vs_nijenhuis(&self) -> f64 {
        self.t02
            .iter()
            .zip(&self.nijenhuis)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max)
    }

    /// Max residual of t = ⅓ d^cF.
    pub fn t_form_vs_dcf(&self) -> f64 {
        self.t_form
            .iter()
            .zip(&self.dcf)
            .map(|(a, b)| (a - b / 3.0).abs())
            .fold(0.0_f64, f64::max)
    }

    /// Max residual of the connection-difference identity
    /// Γ^C_ijk = Γ^LC_ijk + (3/2)t_ijk − T_jki.
    pub fn chern_levi_civita_residual(&self, chern: &Connection, lc: &Connection) -> f64 {
        let m = self.dim;
        let mut r = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let lhs = chern.g(i, j, k);
                    let rhs = lc.g(i, j, k) + 1.5 * self.t_form[idx(m, i, j, k)]
                        - self.t[idx(m, j, k, i)];
                    r = r.max((lhs - rhs).abs());
                }
            }
        }
        r
    }
}
