//! Small dense matrices: just enough for 4×4 boundary systems and frame
//! models of dimension ≤ 6. Row-major f64 storage.

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.scale(-1.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0_f64, f64::max)
    }

    /// Cholesky factor L with A = L·Lᵀ; None if not positive definite.
    pub fn cholesky(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut l = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if s <= 0.0 {
                        return None;
                    }
                    l[(i, i)] = s.sqrt();
                } else {
                    l[(i, j)] = s / l[(j, j)];
                }
            }
        }
        Some(l)
    }

    /// Inverse of a lower-triangular matrix by forward substitution.
    pub fn lower_triangular_inverse(&self) -> Mat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut inv = Mat::zeros(n, n);
        for col in 0..n {
            let mut x = vec![0.0; n];
            for i in 0..n {
                let mut s = if i == col { 1.0 } else { 0.0 };
                for k in 0..i {
                    s -= self[(i, k)] * x[k];
                }
                x[i] = s / self[(i, i)];
            }
            for i in 0..n {
                inv[(i, col)] = x[i];
            }
        }
        inv
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU decomposition with full pivoting: P·A·Q = L·U.
pub struct LuFullPivot {
    lu: Mat,
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
    pub det: f64,
    n: usize,
}

impl LuFullPivot {
    pub fn new(a: &Mat) -> Self {
        assert_eq!(a.rows, a.cols);
        let n = a.rows;
        let mut lu = a.clone();
        let mut row_perm: Vec<usize> = (0..n).collect();
        let mut col_perm: Vec<usize> = (0..n).collect();
        let mut det = 1.0;
        for k in 0..n {
            let mut pivot = 0.0_f64;
            let (mut pi, mut pj) = (k, k);
            for i in k..n {
                for j in k..n {
                    if lu[(i, j)].abs() > pivot {
                        pivot = lu[(i, j)].abs();
                        pi = i;
                        pj = j;
                    }
                }
            }
            if pi != k {
                for j in 0..n {
                    lu.data.swap(pi * n + j, k * n + j);
                }
                row_perm.swap(pi, k);
                det = -det;
            }
            if pj != k {
                for i in 0..n {
                    lu.data.swap(i * n + pj, i * n + k);
                }
                col_perm.swap(pj, k);
                det = -det;
            }
            let piv = lu[(k, k)];
            det *= piv;
            if piv == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let s = f * lu[(k, j)];
                    lu[(i, j)] -= s;
                }
            }
        }
        LuFullPivot {
            lu,
            row_perm,
            col_perm,
            det,
            n,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.det == 0.0 || !self.det.is_finite()
    }

    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = b[self.row_perm[i]];
            for k in 0..i {
                s -= self.lu[(i, k)] * y[k];
            }
            y[i] = s;
        }
        let mut z = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.lu[(i, k)] * z[k];
            }
            z[i] = s / self.lu[(i, i)];
        }
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[self.col_perm[i]] = z[i];
        }
        x
    }

    pub fn inverse(&self) -> Mat {
        let n = self.n;
        let mut inv = Mat::zeros(n, n);
        for col in 0..n {
            let mut e = vec![0.0; n];
            e[col] = 1.0;
            let x = self.solve(&e);
            for i in 0..n {
                inv[(i, col)] = x[i];
            }
        }
        inv
    }
}

/// ∞-norm condition number ‖A‖·‖A⁻¹‖.
pub fn condition_number_inf(a: &Mat, lu: &LuFullPivot) -> f64 {
    if lu.is_singular() {
        return f64::INFINITY;
    }
    a.norm_inf() * lu.inverse().norm_inf()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_and_det() {
        let a = Mat::from_rows(&[
            vec![2.0, 1.0, 1.0],
            vec![4.0, -6.0, 0.0],
            vec![-2.0, 7.0, 2.0],
        ]);
        let lu = LuFullPivot::new(&a);
        assert!((lu.det - (-16.0)).abs() < 1e-12);
        let x = lu.solve(&[5.0, -2.0, 9.0]);
        let b = a.mul_vec(&x);
        assert!((b[0] - 5.0).abs() < 1e-12);
        assert!((b[1] + 2.0).abs() < 1e-12);
        assert!((b[2] - 9.0).abs() < 1e-12);
        let inv = lu.inverse();
        let prod = a.matmul(&inv);
        assert!(prod.sub(&Mat::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn cholesky_round_trip() {
        let a = Mat::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let l = a.cholesky().unwrap();
        let back = l.matmul(&l.transpose());
        assert!(back.sub(&a).max_abs() < 1e-14);
        let linv = l.lower_triangular_inverse();
        assert!(l.matmul(&linv).sub(&Mat::identity(2)).max_abs() < 1e-14);
        let not_pd = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(not_pd.cholesky().is_none());
    }
}
