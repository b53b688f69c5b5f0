//! Dense complex matrices.
//!
//! Storage is row-major. Vectorization is column-stacking: entry `(i, j)` of
//! an `r x c` matrix sits at position `j * r + i` of `vec(A)`, which gives
//! `vec(U X V) = (V^T kron U) vec(X)`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{dim, Error, Result};
use crate::scalar::{re, Cx, Real};
use crate::shape::TensorShape;

#[derive(Clone, PartialEq)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> Matrix<T> {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(dim("Matrix::new", format!("empty {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(dim(
                "Matrix::new",
                format!("{rows}x{cols} needs {} entries, got {}", rows * cols, data.len()),
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[T]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| re(x)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix {
            rows,
            cols,
            data: vec![Cx::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = re(T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Square diagonal matrix with real diagonal.
    pub fn from_real_diag(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = re(d);
        }
        m
    }

    pub fn from_diag(diag: &[Cx<T>]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Matrix unit `E_ij` of size `rows x cols` (0-indexed).
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(i, j)] = re(T::one());
        m
    }

    /// Column vector from entries.
    pub fn column_vector(v: &[Cx<T>]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn data(&self) -> &[Cx<T>] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Cx<T>> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<Cx<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Cx<T>]) {
        assert_eq!(v.len(), self.rows);
        for (i, &z) in v.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Self {
        let start = range.start;
        Self::from_fn(self.rows, range.len(), |i, j| self[(i, start + j)])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.scale(re(s))
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(dim(
                "matmul",
                format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols),
            ));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Self, op: &'static str, f: impl Fn(Cx<T>, Cx<T>) -> Cx<T>) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(dim(
                op,
                format!("{}x{} vs {}x{}", self.rows, self.cols, rhs.rows, rhs.cols),
            ));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    /// `alpha * self + beta * rhs`.
    pub fn combine(&self, alpha: Cx<T>, rhs: &Self, beta: Cx<T>) -> Result<Self> {
        self.zip_with(rhs, "combine", |a, b| alpha * a + beta * b)
    }

    /// Entrywise 2-norm, computed directly.
    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn trace(&self) -> Cx<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `||A - A*||_F`.
    pub fn hermitian_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let n = self.rows;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `||A* A - I||_F`, the unitarity defect.
    pub fn unitarity_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let gram = self.adjoint() * self;
        (&gram - &Self::identity(self.rows)).frobenius_norm()
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_residual() <= tol
    }

    /// Kronecker product `[a_ij B]`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (p, q) = self.shape();
        let (r, s) = rhs.shape();
        Self::from_fn(p * r, q * s, |row, col| {
            self[(row / r, col / s)] * rhs[(row % r, col % s)]
        })
    }

    /// Left-to-right Kronecker product of a non-empty list.
    pub fn kron_all(factors: &[Self]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| dim("kron_all", "empty factor list"))?;
        Ok(rest.iter().fold(first.clone(), |acc, f| acc.kron(f)))
    }

    /// Column-stacked vectorization as an `(rows*cols) x 1` matrix.
    pub fn vec(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)]);
            }
        }
        Matrix {
            rows: self.data.len(),
            cols: 1,
            data,
        }
    }

    /// Inverse of [`Matrix::vec`]. Accepts a column or row vector.
    pub fn unvec(v: &Self, rows: usize, cols: usize) -> Result<Self> {
        if v.data.len() != rows * cols || (v.rows != 1 && v.cols != 1) {
            return Err(dim(
                "unvec",
                format!("vector of {} entries into {rows}x{cols}", v.data.len()),
            ));
        }
        Ok(Self::from_fn(rows, cols, |i, j| v.data[j * rows + i]))
    }

    /// Block rearrangement (realignment).
    ///
    /// `self` is viewed as a `p x q` grid of `r x s` blocks. Block `(i, j)`
    /// becomes row `j * p + i` of the output, holding `vec(block)^T`, so that
    /// `rearrange(kron(A, B)) = vec(A) vec(B)^T`.
    pub fn rearrange(&self, outer: (usize, usize), inner: (usize, usize)) -> Result<Self> {
        let (p, q) = outer;
        let (r, s) = inner;
        if self.rows != p * r || self.cols != q * s {
            return Err(dim(
                "rearrange",
                format!(
                    "{}x{} is not a {p}x{q} grid of {r}x{s} blocks",
                    self.rows, self.cols
                ),
            ));
        }
        let mut out = Self::zeros(p * q, r * s);
        for bj in 0..q {
            for bi in 0..p {
                let row = bj * p + bi;
                for l in 0..s {
                    for k in 0..r {
                        out[(row, l * r + k)] = self[(bi * r + k, bj * s + l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Partial trace over the first factor of `M_m kron M_n`: `A kron B -> tr(A) B`.
    pub fn partial_trace_first(&self, shape: (usize, usize)) -> Result<Self> {
        let (m, n) = shape;
        if self.rows != m * n || self.cols != m * n {
            return Err(dim(
                "partial_trace_first",
                format!("{}x{} is not ({m}*{n}) square", self.rows, self.cols),
            ));
        }
        let mut out = Self::zeros(n, n);
        for a in 0..m {
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += self[(a * n + i, a * n + j)];
                }
            }
        }
        Ok(out)
    }

    /// Transpose of tensor factor `factor` (0-indexed) of a square matrix on
    /// `shape`.
    pub fn partial_transpose(&self, shape: &TensorShape, factor: usize) -> Result<Self> {
        self.partial_transpose_many(shape, &[factor])
    }

    /// Transpose of every listed tensor factor.
    pub fn partial_transpose_many(&self, shape: &TensorShape, factors: &[usize]) -> Result<Self> {
        let n = shape.total();
        if self.rows != n || self.cols != n {
            return Err(dim(
                "partial_transpose",
                format!("{}x{} on shape {shape}", self.rows, self.cols),
            ));
        }
        if let Some(&f) = factors.iter().find(|&&f| f >= shape.len()) {
            return Err(dim("partial_transpose", format!("factor {f} on shape {shape}")));
        }
        Ok(Self::from_fn(n, n, |r, c| {
            let (r2, c2) = shape.swap_factors(r, c, factors);
            self[(r2, c2)]
        }))
    }

    /// `out[:, j] = self[:, perm[j]]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.cols);
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, perm[j])])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Converts to another precision.
    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Cx::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = Cx<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; use the `try_*` methods for
// fallible arithmetic.

impl<T: Real> Mul<&Matrix<T>> for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<T: Real> Mul<&Matrix<T>> for Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        &self * rhs
    }
}

impl<T: Real> Mul<Matrix<T>> for Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: Matrix<T>) -> Matrix<T> {
        &self * &rhs
    }
}

impl<T: Real> Add<&Matrix<T>> for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<T: Real> Sub<&Matrix<T>> for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.scale_re(-T::one())
    }
}

impl<T: Real> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re.as_f64(), z.im.as_f64())?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
