//! Lie algebra models: structure constants, metric, and almost complex
//! structure, with validation and reduction to a J-adapted orthonormal frame.
//!
//! File format (JSON):
//! ```json
//! {
//!   "name": "kodaira-thurston",
//!   "dim": 4,
//!   "structure_constants": [[1, 2, 3, -1.0]],
//!   "metric": "identity",
//!   "J": [[0,0,-1,0],[0,0,0,-1],[1,0,0,0],[0,1,0,0]]
//! }
//! ```
//! Each `[i, j, k, v]` entry (1-based, i < j) contributes v·e_k to [e_i, e_j];
//! antisymmetry is filled in automatically. `J` maps coordinate vectors, so
//! column j is the image of e_j.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Mat;

/// Model invariant tolerance (Jacobi, J² = −1, orthogonality of J).
pub const MODEL_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("cannot parse model: {0}")]
    Parse(String),
    #[error("model invariant violated: {what} (residual {residual:.3e})")]
    InvalidModel { what: String, residual: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum MetricSpec {
    Named(String),
    Dense(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ModelFile {
    name: String,
    dim: usize,
    structure_constants: Vec<(usize, usize, usize, f64)>,
    metric: MetricSpec,
    #[serde(rename = "J")]
    j: Vec<Vec<f64>>,
}

/// A left-invariant almost Hermitian structure: [e_i, e_j] = Σ_k c_ijk e_k,
/// a positive metric g, and an orthogonal J with J² = −1.
#[derive(Debug, Clone)]
pub struct LieAlgebraModel {
    pub name: String,
    pub dim: usize,
    /// c[(i*m + j)*m + k]; antisymmetric in (i, j).
    pub bracket: Vec<f64>,
    pub metric: Mat,
    pub j: Mat,
}

impl LieAlgebraModel {
    pub fn new(
        name: &str,
        dim: usize,
        entries: &[(usize, usize, usize, f64)],
        metric: Mat,
        j: Mat,
    ) -> Result<Self, FrameError> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(FrameError::Parse(format!(
                "dimension must be even and positive, got {dim}"
            )));
        }
        let mut bracket = vec![0.0; dim * dim * dim];
        for &(i, j, k, v) in entries {
            if i == 0 || j == 0 || k == 0 || i > dim || j > dim || k > dim {
                return Err(FrameError::Parse(format!(
                    "structure constant indices out of range: [{i},{j},{k}]"
                )));
            }
            if i >= j {
                return Err(FrameError::Parse(format!(
                    "structure constants must be given with i < j, got [{i},{j},{k}]"
                )));
            }
            let (a, b, c) = (i - 1, j - 1, k - 1);
            if bracket[(a * dim + b) * dim + c] != 0.0 {
                return Err(FrameError::Parse(format!(
                    "duplicate structure constant [{i},{j},{k}]"
                )));
            }
            bracket[(a * dim + b) * dim + c] = v;
            bracket[(b * dim + a) * dim + c] = -v;
        }
        let model = LieAlgebraModel {
            name: name.to_string(),
            dim,
            bracket,
            metric,
            j,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn from_json(text: &str) -> Result<Self, FrameError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| FrameError::Parse(e.to_string()))?;
        let dim = file.dim;
        let metric = match &file.metric {
            MetricSpec::Named(s) if s == "identity" => Mat::identity(dim),
            MetricSpec::Named(s) => {
                return Err(FrameError::Parse(format!("unknown metric spec {s:?}")))
            }
            MetricSpec::Dense(rows) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(FrameError::Parse("metric has wrong shape".into()));
                }
                Mat::from_rows(rows)
            }
        };
        if file.j.len() != dim || file.j.iter().any(|r| r.len() != dim) {
            return Err(FrameError::Parse("J has wrong shape".into()));
        }
        let j = Mat::from_rows(&file.j);
        Self::new(&file.name, dim, &file.structure_constants, metric, j)
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.bracket[(i * self.dim + j) * self.dim + k]
    }

    /// Jacobi identity, J² = −1, g-orthogonality of J, and positivity of g.
    pub fn validate(&self) -> Result<(), FrameError> {
        let m = self.dim;
        // metric symmetric positive definite
        let sym = self.metric.sub(&self.metric.transpose()).max_abs();
        if sym > MODEL_TOL {
            return Err(FrameError::InvalidModel {
                what: "metric symmetry".into(),
                residual: sym,
            });
        }
        if self.metric.cholesky().is_none() {
            return Err(FrameError::InvalidModel {
                what: "metric positive definiteness".into(),
                residual: f64::NAN,
            });
        }
        // Jacobi: [[ei,ej],ek] + [[ej,ek],ei] + [[ek,ei],ej] = 0
        let mut jac = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let mut s = 0.0;
                        for q in 0..m {
                            s += self.c(i, j, q) * self.c(q, k, l)
                                + self.c(j, k, q) * self.c(q, i, l)
                                + self.c(k, i, q) * self.c(q, j, l);
                        }
                        jac = jac.max(s.abs());
                    }
                }
            }
        }
        if jac > MODEL_TOL {
            return Err(FrameError::InvalidModel {
                what: "Jacobi identity".into(),
                residual: jac,
            });
        }
        // J² = −1
        let jj = self.j.matmul(&self.j).add(&Mat::identity(m)).max_abs();
        if jj > MODEL_TOL {
            return Err(FrameError::InvalidModel {
                what: "J squared".into(),
                residual: jj,
            });
        }
        // Jᵀ g J = g
        let orth = self
            .j
            .transpose()
            .matmul(&self.metric)
            .matmul(&self.j)
            .sub(&self.metric)
            .max_abs();
        if orth > MODEL_TOL {
            return Err(FrameError::InvalidModel {
                what: "J orthogonality".into(),
                residual: orth,
            });
        }
        Ok(())
    }

    /// Conformally scaled structure e^{2κ}·g with the same brackets and J.
    pub fn scaled(&self, kappa: f64) -> LieAlgebraModel {
        LieAlgebraModel {
            name: format!("{}-scaled", self.name),
            dim: self.dim,
            bracket: self.bracket.clone(),
            metric: self.metric.scale((2.0 * kappa).exp()),
            j: self.j.clone(),
        }
    }

    /// Reduce to a J-adapted orthonormal frame.
    pub fn adapted(&self) -> Result<AdaptedFrame, FrameError> {
        let m = self.dim;
        let l = self.metric.cholesky().expect("validated SPD");
        // columns of S = orthonormal frame vectors in the original basis
        let s = l.lower_triangular_inverse().transpose();
        let s_inv = l.transpose();
        let j_orth = s_inv.matmul(&self.j).matmul(&s);

        // structure constants in the orthonormal frame
        let mut c_orth = vec![0.0; m * m * m];
        for a in 0..m {
            for b in 0..m {
                for cc in 0..m {
                    let mut acc = 0.0;
                    for i in 0..m {
                        let sia = s[(i, a)];
                        if sia == 0.0 {
                            continue;
                        }
                        for jj in 0..m {
                            let sjb = s[(jj, b)];
                            if sjb == 0.0 {
                                continue;
                            }
                            for k in 0..m {
                                acc += sia * sjb * self.c(i, jj, k) * s_inv[(cc, k)];
                            }
                        }
                    }
                    c_orth[(a * m + b) * m + cc] = acc;
                }
            }
        }

        // Gram-Schmidt an adapted basis: (v, Jv) pairs
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
        for cand in 0..m {
            if basis.len() == m {
                break;
            }
            let mut v: Vec<f64> = (0..m).map(|i| if i == cand { 1.0 } else { 0.0 }).collect();
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= dot * bi;
                }
            }
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue;
            }
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            let jv = j_orth.mul_vec(&v);
            basis.push(v);
            basis.push(jv);
        }
        if basis.len() != m {
            return Err(FrameError::InvalidModel {
                what: "adapted frame construction".into(),
                residual: f64::NAN,
            });
        }
        let mut w = Mat::zeros(m, m);
        for (col, v) in basis.iter().enumerate() {
            for i in 0..m {
                w[(i, col)] = v[i];
            }
        }
        // J in the adapted frame must be the standard block form
        let j_adapted = w.transpose().matmul(&j_orth).matmul(&w);
        let j_std = standard_j(m);
        let j_res = j_adapted.sub(&j_std).max_abs();
        if j_res > 1e-10 {
            return Err(FrameError::InvalidModel {
                what: "J adapted-frame normal form".into(),
                residual: j_res,
            });
        }

        let mut c_ad = vec![0.0; m * m * m];
        for a in 0..m {
            for b in 0..m {
                for e in 0..m {
                    let mut acc = 0.0;
                    for i in 0..m {
                        let wia = w[(i, a)];
                        if wia == 0.0 {
                            continue;
                        }
                        for jj in 0..m {
                            let wjb = w[(jj, b)];
                            if wjb == 0.0 {
                                continue;
                            }
                            for k in 0..m {
                                acc += wia * wjb * c_orth[(i * m + jj) * m + k] * w[(k, e)];
                            }
                        }
                    }
                    c_ad[(a * m + b) * m + e] = acc;
                }
            }
        }
        Ok(AdaptedFrame { dim: m, c: c_ad })
    }
}

fn standard_j(m: usize) -> Mat {
    let mut j = Mat::zeros(m, m);
    for a in 0..m / 2 {
        j[(2 * a + 1, 2 * a)] = 1.0;
        j[(2 * a, 2 * a + 1)] = -1.0;
    }
    j
}

/// Structure constants in a J-adapted orthonormal frame: g = Id and
/// J e_{2α} = e_{2α+1} (0-indexed), so c_ijk = g([e_i, e_j], e_k).
#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    pub dim: usize,
    pub c: Vec<f64>,
}

impl AdaptedFrame {
    pub fn n(&self) -> usize {
        self.dim / 2
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Index and sign of J e_i in the standard adapted frame.
    #[inline]
    pub fn j_index(&self, i: usize) -> (usize, f64) {
        if i.is_multiple_of(2) {
            (i + 1, 1.0)
        } else {
            (i - 1, -1.0)
        }
    }

    /// J applied to a real coefficient vector.
    pub fn j_apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for a in 0..self.dim / 2 {
            out[2 * a + 1] = v[2 * a];
            out[2 * a] = -v[2 * a + 1];
        }
        out
    }
}
