use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::LinalgError;

/// Rectangular complex matrix, used for eigenspace bases and off-diagonal blocks.
pub type CMat = DMatrix<Complex64>;

/// Dense square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    data: CMat,
}

impl Matrix {
    pub fn from_cmat(data: CMat) -> Result<Self, LinalgError> {
        if data.nrows() != data.ncols() {
            return Err(LinalgError::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        if data.nrows() == 0 {
            return Err(LinalgError::Empty);
        }
        for j in 0..data.ncols() {
            for i in 0..data.nrows() {
                let z = data[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { data })
    }

    /// Builds from row-major complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(LinalgError::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        Self::from_cmat(CMat::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            data: CMat::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: CMat::identity(n, n),
        }
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        Self {
            data: CMat::from_fn(n, n, |i, j| if i == j { values[i] } else { Complex64::new(0.0, 0.0) }),
        }
    }

    pub fn real_diagonal(values: &[f64]) -> Self {
        let values: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diagonal(&values)
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    pub fn as_cmat(&self) -> &CMat {
        &self.data
    }

    pub fn into_cmat(self) -> CMat {
        self.data
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            data: self.data.map(|z| z * factor),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn shift_identity(&self, c: Complex64) -> Self {
        let mut data = self.data.clone();
        for i in 0..self.dim() {
            data[(i, i)] += c;
        }
        Self { data }
    }

    pub fn transpose(&self) -> Self {
        Self {
            data: self.data.transpose(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    /// Frobenius norm; used for residuals because it bounds the 2-norm from above.
    pub fn norm_fro(&self) -> f64 {
        self.data.norm()
    }

    /// Operator norm induced by the vector 2-norm (largest singular value).
    pub fn op_norm(&self) -> Result<f64, LinalgError> {
        let sv = super::singular_values(&self.data)?;
        Ok(sv.first().copied().unwrap_or(0.0))
    }

    /// 2-norm condition number; infinite for numerically singular input.
    pub fn condition(&self) -> Result<f64, LinalgError> {
        let sv = super::singular_values(&self.data)?;
        let max = sv.first().copied().unwrap_or(0.0);
        let min = sv.last().copied().unwrap_or(0.0);
        Ok(if min == 0.0 { f64::INFINITY } else { max / min })
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        let inv = self
            .data
            .clone()
            .lu()
            .try_inverse()
            .ok_or(LinalgError::Singular)?;
        Self::from_cmat(inv).map_err(|_| LinalgError::Singular)
    }

    pub fn is_upper_triangular(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| ((j + 1)..n).all(|i| self.data[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn is_lower_triangular(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..j).all(|i| self.data[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Similarity transform `w⁻¹ · self · w` given both `w` and its inverse.
    pub fn conjugate_by(&self, w: &CMat, w_inv: &CMat) -> CMat {
        w_inv * &self.data * w
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Matrix> for &Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                assert_eq!(self.dim(), rhs.dim(), "matrix dimension mismatch");
                Matrix { data: &self.data $op &rhs.data }
            }
        }
        impl $trait<Matrix> for Matrix {
            type Output = Matrix;
            fn $method(self, rhs: Matrix) -> Matrix {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { data: -&self.data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(matches!(
            Matrix::from_cmat(CMat::zeros(2, 3)),
            Err(LinalgError::NotSquare { rows: 2, cols: 3 })
        ));
        assert_eq!(Matrix::from_cmat(CMat::zeros(0, 0)), Err(LinalgError::Empty));
        assert!(matches!(
            Matrix::from_real_rows(&[&[1.0, f64::NAN], &[0.0, 1.0]]),
            Err(LinalgError::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn triangular_predicates() {
        let u = Matrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 3.0]]).unwrap();
        assert!(u.is_upper_triangular());
        assert!(!u.is_lower_triangular());
        assert!(u.transpose().is_lower_triangular());
        assert!(Matrix::identity(3).is_upper_triangular());
    }

    #[test]
    fn op_norm_and_condition() {
        let d = Matrix::real_diagonal(&[3.0, -0.5]);
        assert!((d.op_norm().unwrap() - 3.0).abs() < 1e-14);
        assert!((d.condition().unwrap() - 6.0).abs() < 1e-12);
        assert_eq!(Matrix::zeros(2).condition().unwrap(), f64::INFINITY);
    }
}
