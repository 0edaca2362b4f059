//! Writing `T` as `[P, Q]` with `P = (U + I)/2` fixed.
//!
//! `T` must anticommute with the involution `U`. In a basis adapted to
//! the ±1 eigenspaces `X₁ ⊕ X₂` of `U` this forces
//!
//! ```text
//! U = [[I₁, 0], [0, −I₂]]      T = [[0, B], [C, 0]]
//! ```
//!
//! An idempotent `Q` with `[P, Q] = T` exists exactly when `T² + I/4`
//! has a square root `S` commuting with `T` and `U`; then
//! `V = 2U(S + T)` is an involution and `Q = (V + I)/2`. Here `S` is the
//! primary square root of `T² + I/4`, which is a polynomial in it and so
//! commutes with `T` and `U` automatically. When `T² + I/4` is singular
//! the construction is attempted only through the kernel-dimension
//! obstruction: a block `BC + I₁/4` or `CB + I₂/4` with
//! `dim ker = 1` and `dim ker² = 2` has no square root at all.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{
    is_involution, kernel_dims, left_singular_vectors, primary_sqrt_auto, spectral_radius, text, CMat, KernelDims,
    LinalgError, Matrix, ToleranceConfig,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("U is not an involution (residual {residual:e})")]
    NotInvolution { residual: f64 },
    #[error("eigenspace bases of U do not span the space ({dim1} + {dim2} != {n})")]
    EigenspaceDefect { dim1: usize, dim2: usize, n: usize },
    #[error("T does not anticommute with U (residual {residual:e})")]
    AnticommutationViolated { residual: f64 },
    #[error("{block} has kernel dimensions {dims:?} and no square root")]
    ObstructedNoSquareRoot { block: Block, dims: KernelDims },
    #[error("T^2 + I/4 is singular (kernel dimensions {dims:?}) and the obstruction test does not apply")]
    SingularUndecided { dims: KernelDims },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Diagonal block of `T² + I/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    /// `BC + I₁/4` on `X₁`.
    First,
    /// `CB + I₂/4` on `X₂`.
    Second,
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Block::First => "BC + I/4",
            Block::Second => "CB + I/4",
        })
    }
}

/// An involution with bases of its eigenspaces.
///
/// `change_of_basis = [basis1 | basis2]` and
/// `inverse · u · change_of_basis = diag(I₁, −I₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvolutionDecomposition {
    pub u: Matrix,
    /// `n × dim1`, spans the `+1` eigenspace `X₁`.
    pub basis1: CMat,
    /// `n × dim2`, spans the `−1` eigenspace `X₂`.
    pub basis2: CMat,
    pub change_of_basis: CMat,
    pub inverse: CMat,
}

impl InvolutionDecomposition {
    /// Builds the decomposition from explicit eigenspace bases.
    pub fn from_bases(u: Matrix, basis1: CMat, basis2: CMat) -> Result<Self, FactorError> {
        let n = u.dim();
        if basis1.ncols() + basis2.ncols() != n || basis1.nrows() != n || basis2.nrows() != n {
            return Err(FactorError::EigenspaceDefect {
                dim1: basis1.ncols(),
                dim2: basis2.ncols(),
                n,
            });
        }
        let mut w = CMat::zeros(n, n);
        w.view_mut((0, 0), (n, basis1.ncols())).copy_from(&basis1);
        w.view_mut((0, basis1.ncols()), (n, basis2.ncols())).copy_from(&basis2);
        let inverse = w.clone().lu().try_inverse().ok_or(LinalgError::Singular)?;
        Ok(Self {
            u,
            basis1,
            basis2,
            change_of_basis: w,
            inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn dim1(&self) -> usize {
        self.basis1.ncols()
    }

    pub fn dim2(&self) -> usize {
        self.basis2.ncols()
    }

    /// `inverse · m · change_of_basis`.
    pub fn to_adapted(&self, m: &Matrix) -> CMat {
        m.conjugate_by(&self.change_of_basis, &self.inverse)
    }

    /// `change_of_basis · m · inverse`.
    pub fn from_adapted(&self, m: &CMat) -> Result<Matrix, LinalgError> {
        Matrix::from_cmat(&self.change_of_basis * m * &self.inverse)
    }
}

/// Orthonormal basis of the range of a projector.
///
/// Nonzero singular values of a projector are at least 1, so the rank cut
/// sits at 1/2 rather than relative to the largest singular value (which
/// would keep rounding noise of a numerically zero projector).
fn projector_range(m: &CMat) -> Result<CMat, LinalgError> {
    let (u, sv) = left_singular_vectors(m)?;
    let rank = sv.iter().filter(|&&s| s > 0.5).count();
    Ok(u.columns(0, rank).into_owned())
}

/// Eigenspace bases of an involution from the ranges of `(I ± u)/2`.
pub fn decompose_involution(
    u: &Matrix,
    tol: &ToleranceConfig,
) -> Result<InvolutionDecomposition, FactorError> {
    let check = is_involution(u, tol);
    if !check.holds {
        return Err(FactorError::NotInvolution {
            residual: check.residual,
        });
    }
    let half = Complex64::new(0.5, 0.0);
    let plus = u.shift_identity(Complex64::new(1.0, 0.0)).scale(half);
    let minus = (&Matrix::identity(u.dim()) - u).scale(half);
    let basis1 = projector_range(plus.as_cmat())?;
    let basis2 = projector_range(minus.as_cmat())?;
    let d = InvolutionDecomposition::from_bases(u.clone(), basis1, basis2)?;
    let adapted = d.to_adapted(u);
    let target = CMat::from_fn(d.dim(), d.dim(), |i, j| {
        Complex64::new(if i != j { 0.0 } else if i < d.dim1() { 1.0 } else { -1.0 }, 0.0)
    });
    let residual = (adapted - target).norm();
    if residual > tol.eq_tol * u.norm_fro().powi(2).max(1.0) {
        return Err(FactorError::NotInvolution { residual });
    }
    Ok(d)
}

/// Off-diagonal blocks of `T` relative to an involution decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockForm {
    /// `X₂ → X₁`, `dim1 × dim2`.
    pub b: CMat,
    /// `X₁ → X₂`, `dim2 × dim1`.
    pub c: CMat,
}

impl BlockForm {
    pub fn dim1(&self) -> usize {
        self.b.nrows()
    }

    pub fn dim2(&self) -> usize {
        self.b.ncols()
    }

    /// `[[0, b], [c, 0]]`.
    pub fn reassemble(&self) -> CMat {
        let (k1, k2) = (self.dim1(), self.dim2());
        let mut m = CMat::zeros(k1 + k2, k1 + k2);
        m.view_mut((0, k1), (k1, k2)).copy_from(&self.b);
        m.view_mut((k1, 0), (k2, k1)).copy_from(&self.c);
        m
    }

    /// `BC + I₁/4` (`None` when `X₁` is trivial).
    pub fn first_block(&self) -> Option<Matrix> {
        quarter_shifted(&self.b * &self.c)
    }

    /// `CB + I₂/4` (`None` when `X₂` is trivial).
    pub fn second_block(&self) -> Option<Matrix> {
        quarter_shifted(&self.c * &self.b)
    }
}

fn quarter_shifted(m: CMat) -> Option<Matrix> {
    if m.is_empty() {
        return None;
    }
    Some(
        Matrix::from_cmat(m)
            .expect("square product of finite blocks")
            .shift_identity(Complex64::new(0.25, 0.0)),
    )
}

fn check_dims(t: &Matrix, n: usize) -> Result<(), FactorError> {
    if t.dim() == n {
        Ok(())
    } else {
        Err(FactorError::DimensionMismatch(t.dim(), n))
    }
}

/// Conjugates `t` into the adapted basis and reads off `B` and `C`.
pub fn block_form(
    t: &Matrix,
    d: &InvolutionDecomposition,
    tol: &ToleranceConfig,
) -> Result<BlockForm, FactorError> {
    check_dims(t, d.dim())?;
    let anti = (&(t * &d.u) + &(&d.u * t)).norm_fro();
    if anti > tol.eq_tol * (1.0 + t.norm_fro()) {
        return Err(FactorError::AnticommutationViolated { residual: anti });
    }
    let adapted = d.to_adapted(t);
    let (k1, k2) = (d.dim1(), d.dim2());
    let diag = adapted.view((0, 0), (k1, k1)).norm() + adapted.view((k1, k1), (k2, k2)).norm();
    if diag > tol.eq_tol * (1.0 + adapted.norm()) {
        return Err(FactorError::AnticommutationViolated { residual: diag });
    }
    Ok(BlockForm {
        b: adapted.view((0, k1), (k1, k2)).into_owned(),
        c: adapted.view((k1, 0), (k2, k1)).into_owned(),
    })
}

/// Whether `r(BC) < 1/4 − rank_tol`, which guarantees a factorization.
pub fn sufficient_radius_check(bf: &BlockForm, tol: &ToleranceConfig) -> Result<bool, LinalgError> {
    Ok(block_spectral_radius(bf)? < 0.25 - tol.rank_tol)
}

/// `r(BC)`; zero when either eigenspace is trivial.
pub fn block_spectral_radius(bf: &BlockForm) -> Result<f64, LinalgError> {
    let bc = &bf.b * &bf.c;
    if bc.is_empty() {
        return Ok(0.0);
    }
    spectral_radius(&Matrix::from_cmat(bc)?)
}

/// True when `dim ker a = 1` and `dim ker a² = 2`; then `a` has no square root.
pub fn square_root_obstruction(a: &Matrix, tol: &ToleranceConfig) -> Result<bool, LinalgError> {
    Ok(kernel_dims(a, tol)?.as_pair() == (1, 2))
}

/// A square root of `T² + I/4` commuting with `T` and `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingSqrt {
    pub s: Matrix,
    pub branch_angle: f64,
}

/// `S = sqrt(T² + I/4)` on an automatically chosen branch.
pub fn commuting_sqrt(
    t: &Matrix,
    u: &Matrix,
    tol: &ToleranceConfig,
) -> Result<CommutingSqrt, FactorError> {
    check_dims(t, u.dim())?;
    let d = decompose_involution(u, tol)?;
    let bf = block_form(t, &d, tol)?;
    commuting_sqrt_with(t, &bf, tol)
}

/// As [`commuting_sqrt`] with the block form already computed.
pub fn commuting_sqrt_with(
    t: &Matrix,
    bf: &BlockForm,
    tol: &ToleranceConfig,
) -> Result<CommutingSqrt, FactorError> {
    let m = (t * t).shift_identity(Complex64::new(0.25, 0.0));
    let dims = kernel_dims(&m, tol)?;
    if dims.ker > 0 {
        for (block, a) in [(Block::First, bf.first_block()), (Block::Second, bf.second_block())] {
            if let Some(a) = a {
                let block_dims = kernel_dims(&a, tol)?;
                if block_dims.as_pair() == (1, 2) {
                    return Err(FactorError::ObstructedNoSquareRoot {
                        block,
                        dims: block_dims,
                    });
                }
            }
        }
        return Err(FactorError::SingularUndecided { dims });
    }
    match primary_sqrt_auto(&m, tol) {
        Ok((s, branch_angle)) => Ok(CommutingSqrt { s, branch_angle }),
        Err(LinalgError::SingularUnsupported { .. }) => Err(FactorError::SingularUndecided { dims }),
        Err(e) => Err(e.into()),
    }
}

/// Outcome class of [`factorize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Constructed,
    ObstructedNoSquareRoot,
    SingularUndecided,
    IntertwinerMismatch,
    AnticommutationViolated,
    /// `Q` was built but a defining identity missed its tolerance.
    ResidualCheckFailed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Constructed => "Constructed",
            Verdict::ObstructedNoSquareRoot => "ObstructedNoSquareRoot",
            Verdict::SingularUndecided => "SingularUndecided",
            Verdict::IntertwinerMismatch => "IntertwinerMismatch",
            Verdict::AnticommutationViolated => "AnticommutationViolated",
            Verdict::ResidualCheckFailed => "ResidualCheckFailed",
        })
    }
}

pub mod residual {
    pub const Q_IDEMPOTENT: &str = "q^2-q";
    pub const P_IDEMPOTENT: &str = "p^2-p";
    pub const V_INVOLUTION: &str = "v^2-I";
    pub const COMMUTATOR: &str = "pq-qp-t";
    pub const V_FORMS: &str = "2u(s+t)-2(s-t)u";
    pub const S_SQUARE: &str = "s^2-(t^2+I/4)";
    pub const S_T: &str = "st-ts";
    pub const S_U: &str = "su-us";
    pub const S_OFF_DIAGONAL: &str = "s-offdiag";
    pub const INTERTWINE_B: &str = "s1b-bs2";
    pub const INTERTWINE_C: &str = "s2c-cs1";
    pub const ANTICOMMUTATION: &str = "tu+ut";
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationResult {
    pub verdict: Verdict,
    pub p: Option<Matrix>,
    pub q: Option<Matrix>,
    pub s: Option<Matrix>,
    pub branch_angle: Option<f64>,
    pub residuals: BTreeMap<&'static str, f64>,
    pub note: Option<String>,
}

impl FactorizationResult {
    fn verdict_only(verdict: Verdict, note: String) -> Self {
        Self {
            verdict,
            p: None,
            q: None,
            s: None,
            branch_angle: None,
            residuals: BTreeMap::new(),
            note: Some(note),
        }
    }

    pub fn is_constructed(&self) -> bool {
        self.verdict == Verdict::Constructed
    }

    /// Text report: verdict, notes, named residuals, then the matrices.
    pub fn to_report(&self) -> String {
        let mut out = format!("verdict: {}\n", self.verdict);
        if let Some(note) = &self.note {
            let _ = writeln!(out, "note: {note}");
        }
        if let Some(angle) = self.branch_angle {
            let _ = writeln!(out, "branch_angle: {}", text::format_real(angle));
        }
        for (name, value) in &self.residuals {
            let _ = writeln!(out, "residual {name}: {}", text::format_real(*value));
        }
        for (label, m) in [("P", &self.p), ("Q", &self.q), ("S", &self.s)] {
            if let Some(m) = m {
                let _ = writeln!(out, "matrix {label}");
                out.push_str(&text::write_matrix(m));
            }
        }
        out
    }
}

/// Factorizes `T = [P, Q]` with `P = (U + I)/2`.
pub fn factorize(
    t: &Matrix,
    u: &Matrix,
    tol: &ToleranceConfig,
) -> Result<FactorizationResult, FactorError> {
    check_dims(t, u.dim())?;
    let d = decompose_involution(u, tol)?;
    factorize_with(t, &d, tol)
}

/// As [`factorize`] with a precomputed decomposition of `U`.
pub fn factorize_with(
    t: &Matrix,
    d: &InvolutionDecomposition,
    tol: &ToleranceConfig,
) -> Result<FactorizationResult, FactorError> {
    let bf = match block_form(t, d, tol) {
        Ok(bf) => bf,
        Err(FactorError::AnticommutationViolated { residual }) => {
            let mut r = FactorizationResult::verdict_only(
                Verdict::AnticommutationViolated,
                "T does not anticommute with U".into(),
            );
            r.residuals.insert(residual::ANTICOMMUTATION, residual);
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    let root = match commuting_sqrt_with(t, &bf, tol) {
        Ok(root) => root,
        Err(e @ FactorError::ObstructedNoSquareRoot { .. }) => {
            return Ok(FactorizationResult::verdict_only(
                Verdict::ObstructedNoSquareRoot,
                format!("{e}; no idempotent Q exists for P = (U+I)/2 (other idempotent pairs are not ruled out)"),
            ));
        }
        Err(e @ FactorError::SingularUndecided { .. }) => {
            return Ok(FactorizationResult::verdict_only(
                Verdict::SingularUndecided,
                e.to_string(),
            ));
        }
        Err(e) => return Err(e),
    };
    let u = &d.u;
    let n = t.dim();
    let one = Matrix::identity(n);
    let s = root.s;
    let half = Complex64::new(0.5, 0.0);
    let p = (u + &one).scale(half);
    let v = (u * &(&s + t)).scale_real(2.0);
    let v_alt = (&(&s - t) * u).scale_real(2.0);
    let q = (&v + &one).scale(half);

    let t_norm = t.norm_fro();
    let s_norm = s.norm_fro();
    let s_scale = (1.0 + t_norm * t_norm).max(s_norm * s_norm);
    let target = (t * t).shift_identity(Complex64::new(0.25, 0.0));
    let fro = Matrix::norm_fro;
    let checks = [
        (residual::Q_IDEMPOTENT, fro(&(&(&q * &q) - &q)), fro(&q).powi(2)),
        (residual::P_IDEMPOTENT, fro(&(&(&p * &p) - &p)), fro(&p).powi(2)),
        (residual::V_INVOLUTION, fro(&(&(&v * &v) - &one)), fro(&v).powi(2)),
        (residual::COMMUTATOR, fro(&(&(&(&p * &q) - &(&q * &p)) - t)), fro(&p) * fro(&q)),
        (residual::V_FORMS, fro(&(&v - &v_alt)), fro(&v)),
        (residual::S_SQUARE, fro(&(&(&s * &s) - &target)), s_scale),
        (residual::S_T, fro(&(&(&s * t) - &(t * &s))), s_scale),
        (residual::S_U, fro(&(&(&s * u) - &(u * &s))), s_scale),
    ];
    let mut residuals = BTreeMap::new();
    let mut failed = Vec::new();
    for (name, value, scale) in checks {
        residuals.insert(name, value);
        if !(value <= tol.eq_tol * scale.max(1.0)) {
            failed.push(name);
        }
    }

    // Block-level cross-check: S is block diagonal with S₁B = BS₂, S₂C = CS₁.
    let adapted = d.to_adapted(&s);
    let (k1, k2) = (d.dim1(), d.dim2());
    let s1 = adapted.view((0, 0), (k1, k1));
    let s2 = adapted.view((k1, k1), (k2, k2));
    let off = adapted.view((0, k1), (k1, k2)).norm() + adapted.view((k1, 0), (k2, k1)).norm();
    let inter_b = (s1 * &bf.b - &bf.b * s2).norm();
    let inter_c = (s2 * &bf.c - &bf.c * s1).norm();
    residuals.insert(residual::S_OFF_DIAGONAL, off);
    residuals.insert(residual::INTERTWINE_B, inter_b);
    residuals.insert(residual::INTERTWINE_C, inter_c);
    let block_scale = intertwining_scale(&adapted, &bf);
    let mismatch = [off, inter_b, inter_c]
        .iter()
        .any(|&r| !(r <= tol.eq_tol * block_scale));

    let verdict = if mismatch {
        Verdict::IntertwinerMismatch
    } else if !failed.is_empty() {
        Verdict::ResidualCheckFailed
    } else {
        Verdict::Constructed
    };
    let note = (!failed.is_empty()).then(|| format!("out of tolerance: {}", failed.join(", ")));
    Ok(FactorizationResult {
        verdict,
        p: Some(p),
        q: Some(q),
        s: Some(s),
        branch_angle: Some(root.branch_angle),
        residuals,
        note,
    })
}

/// Scale for block residuals: `(1 + ‖S̃‖)(1 + ‖B‖ + ‖C‖)` with `S̃` in the adapted basis.
pub fn intertwining_scale(adapted_s: &CMat, bf: &BlockForm) -> f64 {
    (1.0 + adapted_s.norm()) * (1.0 + bf.b.norm() + bf.c.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_idempotent;

    fn real(rows: &[&[f64]]) -> Matrix {
        Matrix::from_real_rows(rows).unwrap()
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn cmat(rows: usize, cols: usize, data: &[f64]) -> CMat {
        CMat::from_row_slice(rows, cols, &data.iter().map(|&x| c(x)).collect::<Vec<_>>())
    }

    /// Whether the columns of `a` and `b` span the same subspace.
    fn same_span(a: &CMat, b: &CMat) -> bool {
        if a.ncols() != b.ncols() {
            return false;
        }
        if a.ncols() == 0 {
            return true;
        }
        let proj = |m: &CMat| m * (m.adjoint() * m).try_inverse().unwrap() * m.adjoint();
        (proj(a) - proj(b)).norm() < 1e-12
    }

    #[test]
    fn decompose_diagonal_involution() {
        let d = decompose_involution(&Matrix::real_diagonal(&[1.0, -1.0, 1.0]), &tol()).unwrap();
        assert!(same_span(&d.basis1, &cmat(3, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0])));
        assert!(same_span(&d.basis2, &cmat(3, 1, &[0.0, 1.0, 0.0])));
    }

    #[test]
    fn decompose_swap() {
        let d = decompose_involution(&real(&[&[0.0, 1.0], &[1.0, 0.0]]), &tol()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(same_span(&d.basis1, &cmat(2, 1, &[h, h])));
        assert!(same_span(&d.basis2, &cmat(2, 1, &[h, -h])));
        assert!((d.basis1.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn decompose_identity_and_reject_non_involution() {
        let d = decompose_involution(&Matrix::identity(3), &tol()).unwrap();
        assert_eq!((d.dim1(), d.dim2()), (3, 0));
        assert!(matches!(
            decompose_involution(&Matrix::real_diagonal(&[1.0, 2.0]), &tol()),
            Err(FactorError::NotInvolution { .. })
        ));
    }

    #[test]
    fn block_form_examples() {
        let u = Matrix::real_diagonal(&[1.0, -1.0]);
        let d = decompose_involution(&u, &tol()).unwrap();
        let bf = block_form(&Matrix::zeros(2), &d, &tol()).unwrap();
        assert_eq!((bf.b.norm(), bf.c.norm()), (0.0, 0.0));

        let mu = 0.7;
        let bf = block_form(&real(&[&[0.0, mu], &[mu, 0.0]]), &d, &tol()).unwrap();
        // SVD bases may flip signs; the product BC is basis-sign invariant.
        assert!(((&bf.b * &bf.c)[(0, 0)] - c(mu * mu)).norm() < 1e-15);
        assert!((bf.b[(0, 0)].norm() - mu).abs() < 1e-15);

        assert!(matches!(
            block_form(&Matrix::identity(2), &d, &tol()),
            Err(FactorError::AnticommutationViolated { .. })
        ));
    }

    #[test]
    fn radius_check_examples() {
        let bf = |b: CMat, c: CMat| BlockForm { b, c };
        assert!(sufficient_radius_check(&bf(cmat(1, 1, &[0.3]), cmat(1, 1, &[0.3])), &tol()).unwrap());
        assert!(!sufficient_radius_check(&bf(cmat(1, 1, &[1.0]), cmat(1, 1, &[1.0])), &tol()).unwrap());
        let jordan = cmat(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(sufficient_radius_check(&bf(CMat::identity(2, 2), jordan), &tol()).unwrap());
    }

    #[test]
    fn obstruction_examples() {
        let j2 = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(square_root_obstruction(&j2, &tol()).unwrap());
        assert!(!square_root_obstruction(&Matrix::identity(3), &tol()).unwrap());
        let j2_plus = real(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 5.0]]);
        assert!(square_root_obstruction(&j2_plus, &tol()).unwrap());
        // J₃(0) has kernel dims (1, 2) as well; J₂(0) ⊕ J₂(0) has (2, 4).
        let j22 = real(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 0.0, 0.0],
        ]);
        assert!(!square_root_obstruction(&j22, &tol()).unwrap());
    }

    #[test]
    fn commuting_sqrt_examples() {
        let u = Matrix::real_diagonal(&[1.0, -1.0]);
        let root = commuting_sqrt(&Matrix::zeros(2), &u, &tol()).unwrap();
        assert!((&root.s - &Matrix::identity(2).scale_real(0.5)).norm_fro() < 1e-15);

        let h = 3f64.sqrt() / 2.0;
        let t = real(&[&[0.0, h], &[h, 0.0]]);
        let root = commuting_sqrt(&t, &u, &tol()).unwrap();
        assert!((&root.s - &Matrix::identity(2)).norm_fro() < 1e-15);
    }

    fn obstructed_input() -> (Matrix, Matrix) {
        // B = I₂, C = J₂(0) − I/4, so BC + I/4 = J₂(0).
        let t = real(&[
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[-0.25, 1.0, 0.0, 0.0],
            &[0.0, -0.25, 0.0, 0.0],
        ]);
        (t, Matrix::real_diagonal(&[1.0, 1.0, -1.0, -1.0]))
    }

    #[test]
    fn commuting_sqrt_obstructed() {
        let (t, u) = obstructed_input();
        let err = commuting_sqrt(&t, &u, &tol()).unwrap_err();
        assert!(matches!(
            err,
            FactorError::ObstructedNoSquareRoot {
                dims: KernelDims { ker: 1, ker_sq: 2 },
                ..
            }
        ));
        let r = factorize(&t, &u, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::ObstructedNoSquareRoot);
        assert!(r.q.is_none());
    }

    #[test]
    fn singular_without_obstruction_is_undecided() {
        // BC + I/4 = 0 on a 1x1 block: kernel dims (1, 1), lemma does not apply.
        let t = real(&[&[0.0, 1.0], &[-0.25, 0.0]]);
        let r = factorize(&t, &Matrix::real_diagonal(&[1.0, -1.0]), &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::SingularUndecided);
    }

    #[test]
    fn factorize_zero() {
        let u = Matrix::real_diagonal(&[1.0, -1.0]);
        let r = factorize(&Matrix::zeros(2), &u, &tol()).unwrap();
        assert!(r.is_constructed());
        let p = Matrix::real_diagonal(&[1.0, 0.0]);
        assert_eq!(r.p.as_ref().unwrap(), &p);
        assert!((r.q.as_ref().unwrap() - &p).norm_fro() < 1e-15);
    }

    #[test]
    fn factorize_sqrt3_example() {
        let h = 3f64.sqrt() / 2.0;
        let t = real(&[&[0.0, h], &[h, 0.0]]);
        let u = Matrix::real_diagonal(&[1.0, -1.0]);
        let r = factorize(&t, &u, &tol()).unwrap();
        assert!(r.is_constructed(), "{:?}", r);
        let q = r.q.unwrap();
        let expected = real(&[&[1.5, h], &[-h, -0.5]]);
        assert!((&q - &expected).norm_fro() < 1e-14);
        assert!(is_idempotent(&q, &tol()).holds);
        assert!(r.residuals.values().all(|&x| x < 1e-14));
    }

    #[test]
    fn anticommutation_failure_is_a_verdict() {
        let r = factorize(&Matrix::identity(2), &Matrix::real_diagonal(&[1.0, -1.0]), &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::AnticommutationViolated);
        assert!(r.residuals[residual::ANTICOMMUTATION] > 1.0);
    }

    #[test]
    fn report_is_deterministic_and_parsable() {
        let u = Matrix::real_diagonal(&[1.0, -1.0]);
        let r = factorize(&Matrix::zeros(2), &u, &tol()).unwrap();
        let report = r.to_report();
        assert!(report.starts_with("verdict: Constructed\n"));
        assert_eq!(report, factorize(&Matrix::zeros(2), &u, &tol()).unwrap().to_report());
        let q_block: String = report
            .split("matrix Q\n")
            .nth(1)
            .unwrap()
            .lines()
            .take(3)
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(text::parse_matrix(&q_block).unwrap(), r.q.unwrap());
    }
}
