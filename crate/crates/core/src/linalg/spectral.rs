use nalgebra::linalg::Schur;
use num_complex::Complex64;

use super::{CMat, LinalgError, Matrix, ToleranceConfig};

const MAX_ITER: usize = 100_000;
/// Deflation threshold for the QR iteration; at `f64::EPSILON` the iteration
/// can stall on subdiagonal entries that rounding keeps just above it.
const SCHUR_EPS: f64 = 1e-15;
/// Relative reconstruction error above which a Schur form is rejected.
const SCHUR_CHECK: f64 = 1e-11;

/// How the triangular factor of a [`SchurForm`] relates to the original matrix.
#[derive(Debug, Clone)]
enum Basis {
    /// The input was already upper triangular.
    Identity,
    /// The input was lower triangular; the factor is its transpose.
    Transposed,
    /// `m = z · t · z*` with `z` unitary.
    Unitary(CMat),
}

/// Complex Schur form `m = z t z*` with `t` upper triangular.
///
/// Triangular inputs are used as their own Schur factor, so their
/// eigenvalues are read off the diagonal exactly.
#[derive(Debug, Clone)]
pub struct SchurForm {
    basis: Basis,
    t: CMat,
}

impl SchurForm {
    pub fn new(m: &Matrix) -> Result<Self, LinalgError> {
        if m.is_upper_triangular() {
            return Ok(Self {
                basis: Basis::Identity,
                t: m.as_cmat().clone(),
            });
        }
        if m.is_lower_triangular() {
            return Ok(Self {
                basis: Basis::Transposed,
                t: m.as_cmat().transpose(),
            });
        }
        let (z, mut t) = Schur::try_new(m.as_cmat().clone(), SCHUR_EPS, MAX_ITER)
            .ok_or(LinalgError::SchurFailed)?
            .unpack();
        let scale = m.norm_fro();
        if (&z * &t * z.adjoint() - m.as_cmat()).norm() > SCHUR_CHECK * scale {
            return Err(LinalgError::SchurFailed);
        }
        // Complex Schur leaves no 2x2 bumps; clear rounding residue below the diagonal.
        let n = t.nrows();
        for j in 0..n {
            for i in (j + 1)..n {
                t[(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
        Ok(Self {
            basis: Basis::Unitary(z),
            t,
        })
    }

    pub fn triangular(&self) -> &CMat {
        &self.t
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Maps `f(t)` (computed on the triangular factor) back to `f(m)`.
    pub fn lift(&self, ft: CMat) -> CMat {
        match &self.basis {
            Basis::Identity => ft,
            Basis::Transposed => ft.transpose(),
            Basis::Unitary(z) => z * ft * z.adjoint(),
        }
    }
}

pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>, LinalgError> {
    Ok(SchurForm::new(m)?.eigenvalues())
}

/// Maximum eigenvalue modulus.
pub fn spectral_radius(m: &Matrix) -> Result<f64, LinalgError> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Singular values in descending order; works for rectangular input.
///
/// faer's solver occasionally fails to converge on tightly clustered singular
/// values; the adjoint has the same values and is tried before giving up.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>, LinalgError> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    to_faer(m)
        .singular_values()
        .or_else(|_| to_faer(&m.adjoint()).singular_values())
        .map_err(|_| LinalgError::SvdFailed)
}

/// Left singular vectors (as columns) and the singular values, descending.
///
/// Falls back to the right singular vectors of the adjoint when the direct
/// decomposition does not converge.
pub fn left_singular_vectors(m: &CMat) -> Result<(CMat, Vec<f64>), LinalgError> {
    if m.is_empty() {
        return Ok((CMat::zeros(m.nrows(), 0), Vec::new()));
    }
    let collect = |u: faer::MatRef<'_, Complex64>, s: faer::diag::DiagRef<'_, Complex64>| {
        let sv = s.column_vector().iter().map(|z| z.re).collect();
        (CMat::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]), sv)
    };
    if let Ok(svd) = to_faer(m).thin_svd() {
        return Ok(collect(svd.U(), svd.S()));
    }
    let svd = to_faer(&m.adjoint()).thin_svd().map_err(|_| LinalgError::SvdFailed)?;
    Ok(collect(svd.V(), svd.S()))
}

// nalgebra's complex SVD can return factors that do not reconstruct the
// input, so singular values come from faer.
fn to_faer(m: &CMat) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// A rank decision together with the singular values on either side of the threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankDecision {
    pub rank: usize,
    pub sigma_max: f64,
    /// Smallest singular value counted as nonzero (`None` when rank is 0).
    pub smallest_kept: Option<f64>,
    /// Largest singular value counted as zero (`None` at full rank).
    pub largest_dropped: Option<f64>,
}

/// Counts singular values above `rank_tol · sigma_max`.
pub fn rank_decision(m: &CMat, tol: &ToleranceConfig) -> Result<RankDecision, LinalgError> {
    rank_decision_against(m, None, tol)
}

/// As [`rank_decision`], but thresholds against `rank_tol · reference` when given.
fn rank_decision_against(
    m: &CMat,
    reference: Option<f64>,
    tol: &ToleranceConfig,
) -> Result<RankDecision, LinalgError> {
    let sv = singular_values(m)?;
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let threshold = tol.rank_tol * reference.unwrap_or(sigma_max);
    let rank = if sigma_max == 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > threshold).count()
    };
    Ok(RankDecision {
        rank,
        sigma_max,
        smallest_kept: rank.checked_sub(1).map(|i| sv[i]),
        largest_dropped: sv.get(rank).copied(),
    })
}

/// `(dim ker a, dim ker a²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelDims {
    pub ker: usize,
    pub ker_sq: usize,
}

impl KernelDims {
    pub fn as_pair(self) -> (usize, usize) {
        (self.ker, self.ker_sq)
    }
}

/// Kernel dimensions of `a` and `a²` from rank-revealing SVDs.
///
/// The rank of `a²` is judged against `‖a‖₂²`, not against its own largest
/// singular value: a nilpotent `a²` computes as rounding noise whose
/// relative rank would otherwise look full. `ker a ⊆ ker a²` always holds,
/// so the second count is clamped to be at least the first.
pub fn kernel_dims(a: &Matrix, tol: &ToleranceConfig) -> Result<KernelDims, LinalgError> {
    let n = a.dim();
    let first = rank_decision(a.as_cmat(), tol)?;
    let ker = n - first.rank;
    let sq = a * a;
    let ker_sq = n - rank_decision_against(sq.as_cmat(), Some(first.sigma_max.powi(2)), tol)?.rank;
    Ok(KernelDims {
        ker,
        ker_sq: ker_sq.max(ker),
    })
}
