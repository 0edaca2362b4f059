use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::{LinalgError, Matrix, RationalMatrix, ToleranceConfig};

/// The matrix-ring operations shared by floating and exact matrices.
///
/// Floating matrices decide identities against `eq_tol`; rational matrices
/// decide them exactly.
pub trait RingMatrix: Clone + Debug + PartialEq {
    fn dim(&self) -> usize;
    fn identity(n: usize) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    /// Multiplication by the rational scalar `num / den`.
    fn ratio(&self, num: i64, den: i64) -> Self;
    /// Frobenius norm as a float; exactly zero only for the zero matrix.
    fn size(&self) -> f64;
    /// Whether `residual` counts as zero relative to `scale`.
    fn negligible(residual: &Self, scale: f64, tol: &ToleranceConfig) -> bool;
    /// Floating mode reports tolerance-based verdicts; exact mode does not.
    fn is_exact() -> bool;
}

impl RingMatrix for Matrix {
    fn dim(&self) -> usize {
        Matrix::dim(self)
    }
    fn identity(n: usize) -> Self {
        Matrix::identity(n)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn ratio(&self, num: i64, den: i64) -> Self {
        self.scale(Complex64::new(num as f64 / den as f64, 0.0))
    }
    fn size(&self) -> f64 {
        self.norm_fro()
    }
    fn negligible(residual: &Self, scale: f64, tol: &ToleranceConfig) -> bool {
        residual.norm_fro() <= tol.eq_tol * scale
    }
    fn is_exact() -> bool {
        false
    }
}

impl RingMatrix for RationalMatrix {
    fn dim(&self) -> usize {
        RationalMatrix::dim(self)
    }
    fn identity(n: usize) -> Self {
        RationalMatrix::identity(n)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn size(&self) -> f64 {
        self.norm_fro()
    }
    fn negligible(residual: &Self, _scale: f64, _tol: &ToleranceConfig) -> bool {
        residual.is_zero()
    }
    fn is_exact() -> bool {
        true
    }
}

/// Outcome of testing a matrix identity: the verdict and the residual norm behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub residual: f64,
}

/// `ab − ba`.
pub fn commutator<M: RingMatrix>(a: &M, b: &M) -> Result<M, LinalgError> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.times(b).minus(&b.times(a)))
}

/// Tests `a² = a` against `eq_tol · max(1, ‖a‖²)`.
pub fn is_idempotent<M: RingMatrix>(a: &M, tol: &ToleranceConfig) -> IdentityCheck {
    let residual = a.times(a).minus(a);
    check_residual(&residual, a.size().powi(2).max(1.0), tol)
}

/// Tests `a² = I` against `eq_tol · max(1, ‖a‖²)`.
pub fn is_involution<M: RingMatrix>(a: &M, tol: &ToleranceConfig) -> IdentityCheck {
    let residual = a.times(a).minus(&M::identity(a.dim()));
    check_residual(&residual, a.size().powi(2).max(1.0), tol)
}

pub fn check_residual<M: RingMatrix>(residual: &M, scale: f64, tol: &ToleranceConfig) -> IdentityCheck {
    IdentityCheck {
        holds: M::negligible(residual, scale, tol),
        residual: residual.size(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> Matrix {
        Matrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn commutator_of_elementary_matrices() {
        let a = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let b = real(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(commutator(&a, &b).unwrap(), real(&[&[1.0, 0.0], &[0.0, -1.0]]));
    }

    #[test]
    fn trivial_commutators_vanish() {
        let a = real(&[&[1.0, 2.0, 0.5], &[-1.0, 0.0, 3.0], &[2.0, 2.0, 2.0]]);
        assert_eq!(commutator(&a, &a).unwrap(), Matrix::zeros(3));
        assert_eq!(commutator(&Matrix::identity(3), &a).unwrap(), Matrix::zeros(3));
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let err = commutator(&Matrix::identity(2), &Matrix::identity(3)).unwrap_err();
        assert_eq!(err, LinalgError::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn idempotent_and_involution_predicates() {
        let tol = ToleranceConfig::default();
        let p = is_idempotent(&Matrix::real_diagonal(&[1.0, 0.0]), &tol);
        assert!(p.holds);
        assert_eq!(p.residual, 0.0);
        let u = is_involution(&Matrix::real_diagonal(&[1.0, -1.0]), &tol);
        assert!(u.holds);
        assert_eq!(u.residual, 0.0);
        assert!(is_idempotent(&real(&[&[1.0, 1.0], &[0.0, 0.0]]), &tol).holds);
        assert!(!is_idempotent(&Matrix::real_diagonal(&[2.0, 0.0]), &tol).holds);
        assert!(!is_involution(&Matrix::real_diagonal(&[1.0, 0.5]), &tol).holds);
    }

    #[test]
    fn rational_checks_are_exact() {
        let tol = ToleranceConfig::default();
        let p = RationalMatrix::from_integer_rows(&[&[1, 1], &[0, 0]]).unwrap();
        let u = p.ratio(2, 1).minus(&RationalMatrix::identity(2));
        assert!(is_idempotent(&p, &tol).holds);
        let check = is_involution(&u, &tol);
        assert!(check.holds);
        assert_eq!(check.residual, 0.0);
    }
}
