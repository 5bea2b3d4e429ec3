//! Small dense linear algebra for vector-source computations.
//!
//! All matrices here are tiny (dimension at most 4), so the routines are
//! written explicitly: LU with partial pivoting for determinants,
//! Gauss-Jordan for inverses, and a cyclic Jacobi sweep for symmetric
//! eigenvalues. Row-major storage throughout.

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 4;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub n: usize,
    pub m: usize,
    pub a: Vec<f64>,
}

impl Mat {
    pub fn new(n: usize, m: usize, a: Vec<f64>) -> Result<Self> {
        if a.len() != n * m {
            return Err(Error::Dimension(format!(
                "{n}x{m} matrix needs {} entries, got {}",
                n * m,
                a.len()
            )));
        }
        Ok(Mat { n, m, a })
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Mat { n, m, a: vec![0.0; n * m] }
    }

    pub fn eye(n: usize) -> Self {
        let mut id = Mat::zeros(n, n);
        for i in 0..n {
            id.a[i * n + i] = 1.0;
        }
        id
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.m + j] = v;
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.m, self.n);
        for i in 0..self.n {
            for j in 0..self.m {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::Dimension("add: shape mismatch".into()));
        }
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect();
        Ok(Mat { n: self.n, m: self.m, a })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::Dimension("sub: shape mismatch".into()));
        }
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x - y).collect();
        Ok(Mat { n: self.n, m: self.m, a })
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.m != other.n {
            return Err(Error::Dimension("mul: shape mismatch".into()));
        }
        let mut out = Mat::zeros(self.n, other.m);
        for i in 0..self.n {
            for k in 0..self.m {
                let s = self.get(i, k);
                if s == 0.0 {
                    continue;
                }
                for j in 0..other.m {
                    out.a[i * other.m + j] += s * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Mat {
        Mat { n: self.n, m: self.m, a: self.a.iter().map(|x| c * x).collect() }
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Result<f64> {
        if self.n != self.m {
            return Err(Error::Dimension("det of non-square matrix".into()));
        }
        let n = self.n;
        let mut lu = self.a.clone();
        let mut sign = 1.0;
        for k in 0..n {
            let mut piv = k;
            for i in k + 1..n {
                if lu[i * n + k].abs() > lu[piv * n + k].abs() {
                    piv = i;
                }
            }
            if lu[piv * n + k] == 0.0 {
                return Ok(0.0);
            }
            if piv != k {
                for j in 0..n {
                    lu.swap(k * n + j, piv * n + j);
                }
                sign = -sign;
            }
            let d = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / d;
                lu[i * n + k] = f;
                for j in k + 1..n {
                    lu[i * n + j] -= f * lu[k * n + j];
                }
            }
        }
        let mut det = sign;
        for k in 0..n {
            det *= lu[k * n + k];
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<Mat> {
        if self.n != self.m {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.n;
        let mut a = self.a.clone();
        let mut inv = Mat::eye(n).a;
        for k in 0..n {
            let mut piv = k;
            for i in k + 1..n {
                if a[i * n + k].abs() > a[piv * n + k].abs() {
                    piv = i;
                }
            }
            if a[piv * n + k].abs() < 1e-300 {
                return Err(Error::Singular);
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                    inv.swap(k * n + j, piv * n + j);
                }
            }
            let d = a[k * n + k];
            for j in 0..n {
                a[k * n + j] /= d;
                inv[k * n + j] /= d;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[i * n + k];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] -= f * a[k * n + j];
                    inv[i * n + j] -= f * inv[k * n + j];
                }
            }
        }
        Ok(Mat { n, m: n, a: inv })
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
    /// together with the accumulated orthogonal eigenvector matrix
    /// (columns are eigenvectors). Eigenvalues sorted ascending.
    pub fn sym_eigen(&self) -> Result<(Vec<f64>, Mat)> {
        if self.n != self.m {
            return Err(Error::Dimension("eigen of non-square matrix".into()));
        }
        let n = self.n;
        let mut a = self.clone();
        let mut v = Mat::eye(n);
        for _sweep in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    off += a.get(i, j).abs();
                }
            }
            if off < 1e-14 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a.get(p, q);
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, c * vkp - s * vkq);
                        v.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
        let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a.get(i, i), i)).collect();
        pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let evals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let mut vecs = Mat::zeros(n, n);
        for (new_col, &(_, old_col)) in pairs.iter().enumerate() {
            for k in 0..n {
                vecs.set(k, new_col, v.get(k, old_col));
            }
        }
        Ok((evals, vecs))
    }

    /// Moore-Penrose pseudoinverse of a symmetric matrix via its
    /// eigendecomposition, dropping eigenvalues below `tol` in magnitude.
    pub fn sym_pinv(&self, tol: f64) -> Result<Mat> {
        let (evals, vecs) = self.sym_eigen()?;
        let n = self.n;
        let mut d = Mat::zeros(n, n);
        for (i, &lam) in evals.iter().enumerate() {
            d.set(i, i, if lam.abs() > tol { 1.0 / lam } else { 0.0 });
        }
        vecs.mul(&d)?.mul(&vecs.transpose())
    }
}

/// Symmetric positive semidefinite matrix with validated structure.
#[derive(Debug, Clone)]
pub struct SpdMatrix {
    mat: Mat,
}

impl SpdMatrix {
    /// Validates symmetry (entrywise tolerance 1e-10) and positive
    /// semidefiniteness (smallest eigenvalue >= -1e-10).
    pub fn new(mat: Mat) -> Result<Self> {
        if mat.n != mat.m {
            return Err(Error::Dimension("covariance must be square".into()));
        }
        if mat.n == 0 || mat.n > MAX_DIM {
            return Err(Error::Dimension(format!(
                "dimension {} outside supported range 1..={MAX_DIM}",
                mat.n
            )));
        }
        for i in 0..mat.n {
            for j in i + 1..mat.n {
                if (mat.get(i, j) - mat.get(j, i)).abs() > 1e-10 {
                    return Err(Error::Dimension(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        let (evals, _) = mat.sym_eigen()?;
        if evals[0] < -1e-10 {
            return Err(Error::NotPsd(evals[0]));
        }
        Ok(SpdMatrix { mat })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        SpdMatrix::new(Mat::new(n, n, flat)?)
    }

    pub fn dim(&self) -> usize {
        self.mat.n
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn det(&self) -> f64 {
        self.mat.det().unwrap()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.mat.sym_eigen().map(|(e, _)| e[0] >= 1e-10).unwrap_or(false)
    }

    /// Principal submatrix on the index range `[lo, hi)`.
    pub fn block(&self, lo: usize, hi: usize) -> Result<SpdMatrix> {
        if hi > self.mat.n || lo >= hi {
            return Err(Error::Dimension(format!("block [{lo},{hi}) out of range")));
        }
        let k = hi - lo;
        let mut b = Mat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                b.set(i, j, self.mat.get(lo + i, lo + j));
            }
        }
        SpdMatrix::new(b)
    }

    /// Off-diagonal block: rows `[rlo, rhi)`, columns `[clo, chi)`.
    pub fn cross_block(&self, rlo: usize, rhi: usize, clo: usize, chi: usize) -> Result<Mat> {
        if rhi > self.mat.n || chi > self.mat.n || rlo >= rhi || clo >= chi {
            return Err(Error::Dimension("cross_block out of range".into()));
        }
        let mut b = Mat::zeros(rhi - rlo, chi - clo);
        for i in 0..rhi - rlo {
            for j in 0..chi - clo {
                b.set(i, j, self.mat.get(rlo + i, clo + j));
            }
        }
        Ok(b)
    }
}
