//! Small dense matrices over either backend.

use num_complex::Complex64;

use crate::scalar::FieldElem;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    /// Row-major construction. Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: FieldElem> Matrix<T> {
    pub fn zeros(env: &T::Env, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(env); rows * cols],
        }
    }

    pub fn identity(env: &T::Env, n: usize) -> Self {
        let mut m = Self::zeros(env, n, n);
        for i in 0..n {
            m[(i, i)] = T::one(env);
        }
        m
    }

    pub fn from_diag(env: &T::Env, diag: Vec<T>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(env, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, T::add)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, T::sub)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| if a.is_zero() { a.clone() } else { a.mul(c) })
    }

    pub fn neg(&self) -> Self {
        self.map(T::neg)
    }

    /// `self - c * I`.
    pub fn sub_scalar(&self, c: &T) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] = out[(i, i)].sub(c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let zero = self.data[0].zero_like();
        let mut data = vec![zero; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k * rhs.cols + j];
                    if !b.is_zero() {
                        let slot = &mut data[i * rhs.cols + j];
                        *slot = slot.add(&a.mul(b));
                    }
                }
            }
        }
        Matrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }

    /// Product of a sequence of matrices, left to right.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a Self>) -> Self {
        let mut it = factors.into_iter();
        let first = it.next().expect("empty product").clone();
        it.fold(first, |acc, m| acc.mul(m))
    }

    pub fn pow(&self, env: &T::Env, k: u32) -> Self {
        (0..k).fold(Self::identity(env, self.rows), |acc, _| acc.mul(self))
    }

    /// Kronecker product with the first factor acting on the outer index.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let zero = self.data[0].zero_like();
        let mut data = vec![zero; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = &rhs[(k, l)];
                        if !b.is_zero() {
                            data[(i * rhs.rows + k) * cols + j * rhs.cols + l] = a.mul(b);
                        }
                    }
                }
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn trace(&self) -> T {
        let mut acc = self.data[0].zero_like();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add(&self[(i, i)]);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    /// Largest entry magnitude after embedding into the complex numbers.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .filter(|a| !a.is_zero())
            .map(|a| a.to_c64().norm())
            .fold(0.0, f64::max)
    }

    pub fn to_complex(&self) -> Matrix<Complex64> {
        self.map(T::to_c64)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(v[0].zero_like(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }
}

impl<T: FieldElem> Matrix<T> {
    /// Gauss-Jordan inverse, pivoting on the largest embedded magnitude.
    /// `None` if the matrix is singular (exactly, or numerically for the
    /// approximate backend).
    pub fn inverse(&self, env: &T::Env) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(env, n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let (piv, mag) = (col..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .map(|r| (r, a[(r, col)].to_c64().norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))?;
            if !T::EXACT && mag <= 1e-13 * scale {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p_inv = a[(col, col)].inv()?;
            for j in 0..n {
                a[(col, j)] = a[(col, j)].mul(&p_inv);
                inv[(col, j)] = inv[(col, j)].mul(&p_inv);
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    if !a[(col, j)].is_zero() {
                        a[(r, j)] = a[(r, j)].sub(&f.mul(&a[(col, j)]));
                    }
                    if !inv[(col, j)].is_zero() {
                        inv[(r, j)] = inv[(r, j)].sub(&f.mul(&inv[(col, j)]));
                    }
                }
            }
        }
        Some(inv)
    }
}

impl Matrix<Complex64> {
    pub fn adjoint(&self) -> Self {
        self.transpose().map(|z| z.conj())
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}
