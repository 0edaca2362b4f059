//! Dense matrix substrate: complex floating matrices, exact rational
//! matrices, spectral helpers and the primary matrix square root.

mod algebra;
mod matrix;
mod rational;
mod spectral;
mod sqrt;
pub mod text;

pub use algebra::{check_residual, commutator, is_idempotent, is_involution, IdentityCheck, RingMatrix};
pub use matrix::{CMat, Matrix};
pub use rational::RationalMatrix;
pub use spectral::{
    eigenvalues, kernel_dims, left_singular_vectors, rank_decision, singular_values, spectral_radius, KernelDims,
    RankDecision, SchurForm,
};
pub use sqrt::{
    denman_beavers_sqrt, primary_sqrt, primary_sqrt_auto, select_branch, BRANCH_SCAN_STEPS,
};

use num_complex::Complex64;
use thiserror::Error;

/// Tolerances shared by every floating-point identity and rank decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative tolerance for floating identity checks.
    pub eq_tol: f64,
    /// Relative singular-value threshold (against `sigma_max`) for rank decisions.
    pub rank_tol: f64,
}

impl ToleranceConfig {
    pub fn new(eq_tol: f64, rank_tol: f64) -> Result<Self, LinalgError> {
        for (name, value) in [("eq_tol", eq_tol), ("rank_tol", rank_tol)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(LinalgError::InvalidTolerance { name, value });
            }
        }
        Ok(Self { eq_tol, rank_tol })
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eq_tol: 1e-8,
            rank_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must have positive dimension")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("tolerance {name} must lie in (0, 1), got {value}")]
    InvalidTolerance { name: &'static str, value: f64 },
    #[error("eigenvalue {eigenvalue} lies on the branch cut at angle {angle}")]
    EigenvalueOnCut { angle: f64, eigenvalue: Complex64 },
    #[error("zero eigenvalue ({eigenvalue}); no primary square root")]
    SingularUnsupported { eigenvalue: Complex64 },
    #[error("Schur decomposition did not converge")]
    SchurFailed,
    #[error("singular value decomposition did not converge")]
    SvdFailed,
    #[error("iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },
}
