//! Dense real linear algebra on small square matrices.
//!
//! Everything here is sized for desk-scale problems (n up to a few hundred):
//! row-major storage, a cyclic Jacobi eigensolver, a scaling-and-squaring
//! Taylor exponential and a plain Cholesky factorization. The newtypes
//! [`SymmetricMatrix`] and [`SkewMatrix`] carry their structure as an exact
//! invariant, so downstream code never has to re-symmetrize.

use std::ops::{Add, Deref, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Off-diagonal stopping threshold, relative to the Frobenius norm.
pub const JACOBI_REL_THRESHOLD: f64 = 1e-14;
/// `expm` scales its argument until the Frobenius norm drops below this.
pub const EXPM_SCALED_NORM: f64 = 0.5;
/// Degree of the Taylor polynomial used by `expm` on the scaled argument.
pub const EXPM_TAYLOR_DEGREE: usize = 13;

/// A dense square matrix with finite entries, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds an `n × n` matrix from a row-major list of `n²` entries.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    pub(crate) fn from_vec_unchecked(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// The reflection `J = diag(1, -1, …, -1)`.
    pub fn reflection(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = if i == 0 { 1.0 } else { -1.0 };
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.n + j]).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j];
            }
        }
        Self::from_vec_unchecked(n, out)
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_vec_unchecked(self.n, self.data.iter().map(|v| v * s).collect())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "vector length must match matrix dimension");
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mul_vec(x))
    }

    /// `xᵀ A y`.
    pub fn bilinear_form(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.mul_vec(y))
    }

    /// Left multiplication by `J`: negates every row except the first.
    pub fn reflect_rows(&self) -> Self {
        let mut out = self.clone();
        for v in &mut out.data[self.n..] {
            *v = -*v;
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.n, other.n, "matrix dimensions must agree");
        Self::from_vec_unchecked(
            self.n,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix dimensions must agree");
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Self::from_vec_unchecked(n, out)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

/// A matrix that is exactly symmetric, entry for entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(Matrix);

impl SymmetricMatrix {
    /// Accepts `m` if its asymmetry is at most `tol·(1 + ‖m‖_F)` and
    /// returns its exact symmetric part.
    pub fn try_from_matrix(m: Matrix, tol: f64) -> Result<Self> {
        let asymmetry = (&m - &m.transpose()).frobenius_norm();
        if asymmetry > tol * (1.0 + m.frobenius_norm()) {
            return Err(Error::NotSymmetric { asymmetry });
        }
        Ok(Self::symmetric_part(&m))
    }

    /// `(A + Aᵀ)/2`.
    pub fn symmetric_part(a: &Matrix) -> Self {
        let n = a.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = 0.5 * (a.data[i * n + j] + a.data[j * n + i]);
            }
        }
        Self(Matrix::from_vec_unchecked(n, out))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::try_from_matrix(Matrix::from_rows(rows)?, 0.0)
    }

    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self(Matrix::from_diagonal(diag))
    }

    pub fn reflection(n: usize) -> Self {
        Self(Matrix::reflection(n))
    }

    /// The rank-one matrix `v vᵀ`.
    pub fn outer(v: &[f64]) -> Self {
        let n = v.len();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = v[i] * v[j];
            }
        }
        Self(Matrix::from_vec_unchecked(n, out))
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// `X + s·J`, touching only the diagonal.
    pub fn add_reflection(&self, s: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.n {
            m[(i, i)] += if i == 0 { s } else { -s };
        }
        Self(m)
    }

    /// `Wᵀ X W`.
    pub fn congruence(&self, w: &Matrix) -> Self {
        Self::symmetric_part(&(&(&w.transpose() * &self.0) * w))
    }
}

impl Deref for SymmetricMatrix {
    type Target = Matrix;
    fn deref(&self) -> &Matrix {
        &self.0
    }
}

impl Add for &SymmetricMatrix {
    type Output = SymmetricMatrix;
    fn add(self, rhs: &SymmetricMatrix) -> SymmetricMatrix {
        SymmetricMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &SymmetricMatrix {
    type Output = SymmetricMatrix;
    fn sub(self, rhs: &SymmetricMatrix) -> SymmetricMatrix {
        SymmetricMatrix(&self.0 - &rhs.0)
    }
}

/// A matrix that is exactly skew-symmetric with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix(Matrix);

impl SkewMatrix {
    pub fn try_from_matrix(m: Matrix, tol: f64) -> Result<Self> {
        let residual = (&m + &m.transpose()).frobenius_norm();
        if residual > tol * (1.0 + m.frobenius_norm()) {
            return Err(Error::NotSkew { residual });
        }
        Ok(Self::skew_part(&m))
    }

    /// `(A − Aᵀ)/2`.
    pub fn skew_part(a: &Matrix) -> Self {
        let n = a.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = 0.5 * (a.data[i * n + j] - a.data[j * n + i]);
            }
        }
        Self(Matrix::from_vec_unchecked(n, out))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n))
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }
}

impl Deref for SkewMatrix {
    type Target = Matrix;
    fn deref(&self) -> &Matrix {
        &self.0
    }
}

/// Splits `A` into its symmetric and skew-symmetric parts.
pub fn sym_skew_split(a: &Matrix) -> (SymmetricMatrix, SkewMatrix) {
    (SymmetricMatrix::symmetric_part(a), SkewMatrix::skew_part(a))
}

/// `⟨X, Y⟩ = tr(XᵀY)`.
pub fn frobenius_inner(x: &Matrix, y: &Matrix) -> Result<f64> {
    if x.n != y.n {
        return Err(Error::DimensionMismatch {
            expected: x.n,
            got: y.n,
        });
    }
    Ok(dot(&x.data, &y.data))
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: Matrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// `V diag(values) Vᵀ`.
    pub fn reconstruct(&self) -> SymmetricMatrix {
        let n = self.values.len();
        let mut out = Matrix::zeros(n);
        for (k, &lam) in self.values.iter().enumerate() {
            let v = self.vector(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += lam * v[i] * v[j];
                }
            }
        }
        SymmetricMatrix::symmetric_part(&out)
    }
}

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn eigh(x: &SymmetricMatrix) -> Result<EigenDecomposition> {
    let (values, vectors) = jacobi(x, true)?;
    Ok(EigenDecomposition {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues only, ascending. Skips the eigenvector accumulation.
pub fn eigvalsh(x: &SymmetricMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(x, false)?.0)
}

pub fn lambda_min(x: &SymmetricMatrix) -> Result<f64> {
    Ok(eigvalsh(x)?.first().copied().unwrap_or(0.0))
}

pub fn lambda_max(x: &SymmetricMatrix) -> Result<f64> {
    Ok(eigvalsh(x)?.last().copied().unwrap_or(0.0))
}

/// `λ_min(X) ≥ −tol·(1 + ‖X‖_F)`.
pub fn is_psd(x: &SymmetricMatrix, tol: f64) -> Result<bool> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be >= 0, got {tol}")));
    }
    Ok(lambda_min(x)? >= -tol * (1.0 + x.frobenius_norm()))
}

fn jacobi(x: &SymmetricMatrix, with_vectors: bool) -> Result<(Vec<f64>, Option<Matrix>)> {
    let n = x.dim();
    let mut a = x.as_slice().to_vec();
    let mut v = with_vectors.then(|| Matrix::identity(n).data);
    let threshold = JACOBI_REL_THRESHOLD * x.frobenius_norm();

    let mut converged = false;
    for _ in 0..=JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if (2.0 * off).sqrt() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            what: "Jacobi eigensolver",
            iterations: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = v.map(|v| {
        let mut sorted = vec![0.0; n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for k in 0..n {
                sorted[k * n + new_col] = v[k * n + old_col];
            }
        }
        Matrix::from_vec_unchecked(n, sorted)
    });
    Ok((values, vectors))
}

/// Matrix exponential by scaling and squaring around a degree-13 Taylor core.
pub fn expm(a: &Matrix) -> Matrix {
    let n = a.dim();
    let norm = a.frobenius_norm();
    let mut squarings = 0u32;
    if norm > EXPM_SCALED_NORM {
        squarings = (norm / EXPM_SCALED_NORM).log2().ceil() as u32;
    }
    let x = a.scale(0.5_f64.powi(squarings as i32));
    let identity = Matrix::identity(n);

    // Horner: I + X(I + X/2(I + X/3(…)))
    let mut e = identity.clone();
    for k in (1..=EXPM_TAYLOR_DEGREE).rev() {
        e = &identity + &(&x * &e).scale(1.0 / k as f64);
    }
    for _ in 0..squarings {
        e = &e * &e;
    }
    e
}

/// Lower-triangular Cholesky factor of a positive definite matrix, or
/// `None` when a pivot is not strictly positive.
pub fn cholesky(x: &SymmetricMatrix) -> Option<Matrix> {
    let n = x.dim();
    let mut l = Matrix::zeros(n);
    for j in 0..n {
        let mut d = x[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = x[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Solves `L y = b` for lower-triangular `L`.
pub fn forward_substitute(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.dim();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[(i, k)] * y[k]).sum();
        y[i] = (b[i] - s) / l[(i, i)];
    }
    y
}

/// Solves `Lᵀ x = y` for lower-triangular `L`.
pub fn backward_substitute(l: &Matrix, y: &[f64]) -> Vec<f64> {
    let n = l.dim();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|k| l[(k, i)] * x[k]).sum();
        x[i] = (y[i] - s) / l[(i, i)];
    }
    x
}

/// `L⁻¹ X L⁻ᵀ` for lower-triangular `L` and symmetric `X`.
pub fn whiten(l: &Matrix, x: &SymmetricMatrix) -> SymmetricMatrix {
    let n = l.dim();
    // Y = L⁻¹ X, column by column.
    let mut y = Matrix::zeros(n);
    for j in 0..n {
        let col = forward_substitute(l, &x.column(j));
        for i in 0..n {
            y[(i, j)] = col[i];
        }
    }
    // Z = L⁻¹ Yᵀ = L⁻¹ X L⁻ᵀ (X symmetric).
    let yt = y.transpose();
    let mut z = Matrix::zeros(n);
    for j in 0..n {
        let col = forward_substitute(l, &yt.column(j));
        for i in 0..n {
            z[(i, j)] = col[i];
        }
    }
    SymmetricMatrix::symmetric_part(&z)
}
