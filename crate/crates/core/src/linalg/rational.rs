use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{LinalgError, Matrix};

/// Dense square matrix over ℚ with exact arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    /// Row-major entries; `entries.len()` must equal `n * n`.
    pub fn new(n: usize, entries: Vec<BigRational>) -> Result<Self, LinalgError> {
        if n == 0 {
            return Err(LinalgError::Empty);
        }
        if entries.len() != n * n {
            return Err(LinalgError::NotSquare {
                rows: n,
                cols: entries.len() / n,
            });
        }
        Ok(Self { n, entries })
    }

    pub fn from_integer_rows(rows: &[&[i64]]) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(LinalgError::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))));
        }
        Self::new(n, entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn diagonal(values: &[BigRational]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigRational) {
        self.entries[row * self.n + col] = value;
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|x| x * factor).collect(),
        }
    }

    /// Frobenius norm evaluated in floating point; zero iff the matrix is exactly zero.
    pub fn norm_fro(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let sum: f64 = self
            .entries
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::INFINITY).powi(2))
            .sum();
        // Underflow must not hide a nonzero residual.
        sum.sqrt().max(f64::MIN_POSITIVE)
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                    inv.swap(pivot * n + k, col * n + k);
                }
            }
            let p = a[col * n + col].clone();
            for k in 0..n {
                a[col * n + k] = &a[col * n + k] / &p;
                inv[col * n + k] = &inv[col * n + k] / &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for k in 0..n {
                    let da = &f * &a[col * n + k];
                    let di = &f * &inv[col * n + k];
                    a[r * n + k] -= da;
                    inv[r * n + k] -= di;
                }
            }
        }
        Some(Self { n, entries: inv })
    }

    pub fn to_matrix(&self) -> Matrix {
        let rows: Vec<Vec<Complex64>> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| Complex64::new(self.get(i, j).to_f64().unwrap_or(f64::NAN), 0.0))
                    .collect()
            })
            .collect();
        Matrix::from_rows(&rows).expect("rational entries convert to finite floats")
    }

    /// Largest absolute numerator or denominator; a size measure for generated data.
    pub fn height(&self) -> BigInt {
        self.entries
            .iter()
            .flat_map(|x| [x.numer().abs(), x.denom().abs()])
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

macro_rules! entrywise {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&RationalMatrix> for &RationalMatrix {
            type Output = RationalMatrix;
            fn $method(self, rhs: &RationalMatrix) -> RationalMatrix {
                assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
                RationalMatrix {
                    n: self.n,
                    entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a $op b).collect(),
                }
            }
        }
    };
}

entrywise!(Add, add, +);
entrywise!(Sub, sub, -);

impl Mul<&RationalMatrix> for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        let n = self.n;
        let mut out = RationalMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;
    fn neg(self) -> RationalMatrix {
        RationalMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }
}
