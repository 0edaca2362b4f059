//! Truncated unilateral shifts and μ-sweeps.
//!
//! Basis vectors are numbered from 1 in every report. Splitting the space
//! by parity, `X₁ = span{e₂, e₄, …}` and `X₂ = span{e₁, e₃, …}`, turns
//! the forward shift into `[[0, I], [S, 0]]` and the backward shift into
//! `[[0, B], [I, 0]]`. `μ·shift` anticommutes with the parity involution
//! `U = diag(−1, +1, −1, …)`, so the factorizer applies with
//! `P = (U + I)/2`.
//!
//! On the infinite sequence spaces `μ·shift` is a commutator of `P` and an
//! idempotent iff `|μ| ≤ 1/2`. Truncations are nilpotent, so every finite
//! case factorizes; what distinguishes `|μ| > 1/2` is that `‖Q‖` grows
//! geometrically with the truncation size.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::factorizer::{factorize_with, FactorError, InvolutionDecomposition, Verdict};
use crate::linalg::{kernel_dims, text, CMat, KernelDims, LinalgError, Matrix, RationalMatrix, ToleranceConfig};

/// Stated at the top of every sweep summary.
pub const SWEEP_FRAMING: &str = "finite truncations always factorize; for |mu| > 1/2 the infinite-dimensional \
obstruction shows up only as growth of ||Q|| with n, so growth ratios are reported, not divergence";

pub const CSV_HEADER: &str = "n,mu_re,mu_im,q_norm,res_comm,res_idem,s_cond";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShiftError {
    #[error("dimension {n} is below the minimum {min}")]
    DimensionTooSmall { n: usize, min: usize },
    #[error("|mu| = {abs} must exceed 1/2")]
    MuTooSmall { abs: f64 },
    #[error("sweep needs at least one dimension and one mu")]
    EmptySweep,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `e_k ↦ e_{k+1}`: ones on the subdiagonal.
    Forward,
    /// `e_k ↦ e_{k−1}`: ones on the superdiagonal.
    Backward,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedShift {
    pub n: usize,
    pub direction: Direction,
    pub matrix: Matrix,
}

impl TruncatedShift {
    pub fn new(n: usize, direction: Direction) -> Result<Self, ShiftError> {
        if n == 0 {
            return Err(ShiftError::DimensionTooSmall { n, min: 1 });
        }
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let data = CMat::from_fn(n, n, |i, j| match direction {
            Direction::Forward if i == j + 1 => one,
            Direction::Backward if j == i + 1 => one,
            _ => zero,
        });
        Ok(Self {
            n,
            direction,
            matrix: Matrix::from_cmat(data)?,
        })
    }
}

/// Parity decomposition: `U = −1` on odd-numbered `e_k`, `+1` on even-numbered.
pub fn interleave_decomposition(n: usize) -> Result<InvolutionDecomposition, ShiftError> {
    if n == 0 {
        return Err(ShiftError::DimensionTooSmall { n, min: 1 });
    }
    // 0-based index i holds e_{i+1}; even-numbered vectors sit at odd i.
    let signs: Vec<f64> = (0..n).map(|i| if i % 2 == 1 { 1.0 } else { -1.0 }).collect();
    let u = Matrix::real_diagonal(&signs);
    let unit_columns = |indices: Vec<usize>| {
        CMat::from_fn(n, indices.len(), |row, col| {
            Complex64::new(f64::from(u8::from(row == indices[col])), 0.0)
        })
    };
    let basis1 = unit_columns((1..n).step_by(2).collect());
    let basis2 = unit_columns((0..n).step_by(2).collect());
    Ok(InvolutionDecomposition::from_bases(u, basis1, basis2)?)
}

/// `t = μ · shift` and the parity involution `u`; `tu + ut = 0` exactly.
pub fn shift_block_operator(
    n: usize,
    mu: Complex64,
    direction: Direction,
) -> Result<(Matrix, Matrix), ShiftError> {
    if n < 2 {
        return Err(ShiftError::DimensionTooSmall { n, min: 2 });
    }
    let shift = TruncatedShift::new(n, direction)?;
    let d = interleave_decomposition(n)?;
    Ok((shift.matrix.scale(mu), d.u))
}

/// `binom(1/2, k)` for `k = 0..count`, exactly, by `c_k = c_{k−1} · (1/2 − k + 1)/k`.
pub fn half_binomial_exact(count: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(count);
    let mut c = BigRational::from_integer(BigInt::from(1));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for k in 0..count {
        if k > 0 {
            let kq = BigRational::from_integer(BigInt::from(k));
            c = c * (&half - &kq + BigRational::from_integer(BigInt::from(1))) / kq;
        }
        out.push(c.clone());
    }
    out
}

/// `binom(1/2, k)` for `k = 0..count` in floating point.
pub fn half_binomial(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 1.0;
    for k in 0..count {
        if k > 0 {
            c *= (0.5 - k as f64 + 1.0) / k as f64;
        }
        out.push(c);
    }
    out
}

/// `R = Σ_{k<n} binom(1/2, k) shiftᵏ`; nilpotency makes the series finite and `R² = I + shift`.
pub fn binomial_sqrt_series(shift: &TruncatedShift) -> Matrix {
    let coeffs = half_binomial(shift.n);
    let mut power = Matrix::identity(shift.n);
    let mut sum = Matrix::zeros(shift.n);
    for c in coeffs {
        sum = &sum + &power.scale_real(c);
        power = &power * &shift.matrix;
    }
    sum
}

/// Exact counterpart of [`binomial_sqrt_series`].
pub fn binomial_sqrt_series_exact(n: usize, direction: Direction) -> Result<RationalMatrix, ShiftError> {
    if n == 0 {
        return Err(ShiftError::DimensionTooSmall { n, min: 1 });
    }
    let mut shift = RationalMatrix::zeros(n);
    for k in 0..n - 1 {
        let (row, col) = match direction {
            Direction::Forward => (k + 1, k),
            Direction::Backward => (k, k + 1),
        };
        shift.set(row, col, BigRational::from_integer(BigInt::from(1)));
    }
    let mut power = RationalMatrix::identity(n);
    let mut sum = RationalMatrix::zeros(n);
    for c in half_binomial_exact(n) {
        sum = &sum + &power.scale(&c);
        power = &power * &shift;
    }
    Ok(sum)
}

/// Diagnostics for one `(n, μ)` cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub n: usize,
    pub mu: Complex64,
    /// `‖Q‖₂`.
    pub q_norm: f64,
    /// `‖[P, Q] − μ·shift‖_F`.
    pub residual_commutator: f64,
    /// `‖Q² − Q‖_F`.
    pub residual_idempotent: f64,
    /// `κ₂(S)`.
    pub s_condition: f64,
    pub verdict: Verdict,
    /// Set when the cell failed before a verdict was reached.
    pub error: Option<String>,
}

fn failed_record(n: usize, mu: Complex64, verdict: Verdict, error: Option<String>) -> SweepRecord {
    SweepRecord {
        n,
        mu,
        q_norm: f64::NAN,
        residual_commutator: f64::NAN,
        residual_idempotent: f64::NAN,
        s_condition: f64::NAN,
        verdict,
        error,
    }
}

fn sweep_cell(n: usize, mu: Complex64, direction: Direction, tol: &ToleranceConfig) -> SweepRecord {
    let run = || -> Result<SweepRecord, ShiftError> {
        let (t, _) = shift_block_operator(n, mu, direction)?;
        let d = interleave_decomposition(n)?;
        let result = factorize_with(&t, &d, tol)?;
        let (Some(p), Some(q), Some(s)) = (&result.p, &result.q, &result.s) else {
            return Ok(failed_record(n, mu, result.verdict, result.note.clone()));
        };
        Ok(SweepRecord {
            n,
            mu,
            q_norm: q.op_norm()?,
            residual_commutator: (&(&(p * q) - &(q * p)) - &t).norm_fro(),
            residual_idempotent: (&(q * q) - q).norm_fro(),
            s_condition: s.condition()?,
            verdict: result.verdict,
            error: result.note.clone(),
        })
    };
    run().unwrap_or_else(|e| failed_record(n, mu, Verdict::ResidualCheckFailed, Some(e.to_string())))
}

/// Factorizes `μ·shift` for every `(n, μ)`; rows sorted by `(n, Re μ, Im μ)`.
///
/// Cells are independent and evaluated in parallel. A failing cell is
/// recorded with its error and does not stop the sweep.
pub fn mu_sweep(
    dims: &[usize],
    mus: &[Complex64],
    direction: Direction,
    tol: &ToleranceConfig,
) -> Result<Vec<SweepRecord>, ShiftError> {
    if dims.is_empty() || mus.is_empty() {
        return Err(ShiftError::EmptySweep);
    }
    if let Some(&n) = dims.iter().find(|&&n| n < 2) {
        return Err(ShiftError::DimensionTooSmall { n, min: 2 });
    }
    let cells: Vec<(usize, Complex64)> = dims
        .iter()
        .flat_map(|&n| mus.iter().map(move |&mu| (n, mu)))
        .collect();
    let mut records: Vec<SweepRecord> = cells
        .par_iter()
        .map(|&(n, mu)| sweep_cell(n, mu, direction, tol))
        .collect();
    records.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then(a.mu.re.total_cmp(&b.mu.re))
            .then(a.mu.im.total_cmp(&b.mu.im))
    });
    Ok(records)
}

/// Growth of `‖Q‖` along increasing `n` for one μ.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSummary {
    pub mu: Complex64,
    pub dims: Vec<usize>,
    /// `q_norm(n_{k+1}) / q_norm(n_k)` for consecutive dimensions.
    pub ratios: Vec<f64>,
}

impl GrowthSummary {
    pub fn max_ratio(&self) -> Option<f64> {
        self.ratios.iter().copied().reduce(f64::max)
    }

    pub fn last_ratio(&self) -> Option<f64> {
        self.ratios.last().copied()
    }
}

/// Groups sorted sweep records by μ (in first-seen order).
pub fn growth_summaries(records: &[SweepRecord]) -> Vec<GrowthSummary> {
    let mut out: Vec<(GrowthSummary, Vec<f64>)> = Vec::new();
    for r in records {
        let idx = match out.iter().position(|(g, _)| g.mu == r.mu) {
            Some(i) => i,
            None => {
                out.push((
                    GrowthSummary {
                        mu: r.mu,
                        dims: Vec::new(),
                        ratios: Vec::new(),
                    },
                    Vec::new(),
                ));
                out.len() - 1
            }
        };
        out[idx].0.dims.push(r.n);
        out[idx].1.push(r.q_norm);
    }
    out.into_iter()
        .map(|(mut g, norms)| {
            g.ratios = norms.windows(2).map(|w| w[1] / w[0]).collect();
            g
        })
        .collect()
}

/// CSV with [`CSV_HEADER`]; floats carry 17 significant digits.
pub fn write_csv(records: &[SweepRecord]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            text::format_real(r.mu.re),
            text::format_real(r.mu.im),
            text::format_real(r.q_norm),
            text::format_real(r.residual_commutator),
            text::format_real(r.residual_idempotent),
            text::format_real(r.s_condition),
        );
    }
    out
}

/// Human-readable summary: framing line, then one line per μ.
pub fn summary(records: &[SweepRecord]) -> String {
    let mut out = format!("# {SWEEP_FRAMING}\n");
    for g in growth_summaries(records) {
        let ratio = g.max_ratio().map_or_else(|| "n/a".to_string(), text::format_real);
        let _ = writeln!(
            out,
            "mu={} dims={:?} max_growth_ratio={ratio}",
            text::format_complex(g.mu),
            g.dims
        );
    }
    for r in records.iter().filter(|r| r.verdict != Verdict::Constructed) {
        let _ = writeln!(
            out,
            "row n={} mu={}: {} {}",
            r.n,
            text::format_complex(r.mu),
            r.verdict,
            r.error.as_deref().unwrap_or("")
        );
    }
    out
}

/// gnuplot script plotting `q_norm` against `n` (log scale) for each μ in the CSV.
pub fn plot_script(csv_path: &str, records: &[SweepRecord]) -> String {
    let mut out = String::from(
        "set datafile separator ','\nset logscale y\nset xlabel 'n'\nset ylabel '||Q||_2'\nset key left top\n",
    );
    let plots: Vec<String> = growth_summaries(records)
        .iter()
        .map(|g| {
            format!(
                "'{csv_path}' using (($2=={re} && $3=={im}) ? $1 : 1/0):4 skip 1 with linespoints title 'mu={mu}'",
                re = text::format_real(g.mu.re),
                im = text::format_real(g.mu.im),
                mu = text::format_complex(g.mu),
            )
        })
        .collect();
    let _ = writeln!(out, "plot {}", plots.join(", \\\n     "));
    out
}

/// Finite-dimensional shadow of the `|μ| > 1/2` kernel argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Case3Report {
    pub n: usize,
    pub mu: Complex64,
    /// `λ = −1/(4μ²)`.
    pub lambda: Complex64,
    /// Kernel dimensions of the truncated `backward − λI`; `(0, 0)` since `λ ≠ 0`.
    pub kernel_dims: KernelDims,
    /// `‖(1, λ, …, λⁿ⁻¹)‖₂`.
    pub geometric_norm: f64,
    /// `‖(0, 1, 2λ, …, (n−1)λⁿ⁻²)‖₂`.
    pub derivative_norm: f64,
    /// `‖(B − λI) x‖` for the geometric vector `x`; equals `|λ|ⁿ`.
    pub geometric_residual: f64,
    /// `‖(B − λI) y − x‖` for the derivative vector `y`.
    pub chain_residual: f64,
}

pub fn case3_diagnostics(
    n: usize,
    mu: Complex64,
    tol: &ToleranceConfig,
) -> Result<Case3Report, ShiftError> {
    if mu.norm() <= 0.5 {
        return Err(ShiftError::MuTooSmall { abs: mu.norm() });
    }
    let shift = TruncatedShift::new(n, Direction::Backward)?;
    let lambda = -Complex64::new(1.0, 0.0) / (mu * mu * 4.0);
    let a = shift.matrix.shift_identity(-lambda);
    let dims = kernel_dims(&a, tol)?;
    let x = nalgebra::DVector::from_fn(n, |k, _| lambda.powu(k as u32));
    let y = nalgebra::DVector::from_fn(n, |k, _| {
        if k == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            lambda.powu(k as u32 - 1) * k as f64
        }
    });
    let ax = a.as_cmat() * &x;
    let ay = a.as_cmat() * &y;
    Ok(Case3Report {
        n,
        mu,
        lambda,
        kernel_dims: dims,
        geometric_norm: x.norm(),
        derivative_norm: y.norm(),
        geometric_residual: ax.norm(),
        chain_residual: (ay - &x).norm(),
    })
}
