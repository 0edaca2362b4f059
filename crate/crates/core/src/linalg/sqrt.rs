//! Primary matrix square roots.
//!
//! The reference route is the Schur recurrence: with `m = z t z*` and `t`
//! upper triangular, the root `r` of `t` is upper triangular with
//!
//! ```text
//! r_jj = sqrt(t_jj)
//! r_ij = (t_ij − Σ_{i<k<j} r_ik r_kj) / (r_ii + r_jj)
//! ```
//!
//! and `sqrt(m) = z r z*`. It handles defective input. A scaled
//! Denman–Beavers iteration is kept as an independent check.
//!
//! A branch is named by the angle `θ` of its cut ray `{r e^{iθ} : r ≥ 0}`;
//! square roots on that branch lie in the open half-plane of arguments
//! `(θ/2 − π, θ/2)`. `θ = π` is the principal branch.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{CMat, LinalgError, Matrix, SchurForm, ToleranceConfig};

/// Multiples of `π/8` tried on each side of `π` when choosing a cut.
pub const BRANCH_SCAN_STEPS: usize = 8;

/// Angular clearance the scan demands between the cut and every eigenvalue.
const SCAN_CLEARANCE: f64 = PI / 32.0;

/// Eigenvalues closer than this (in radians) to an explicitly requested cut are rejected.
const CUT_MARGIN: f64 = 1.5e-8;

const DB_MAX_ITER: usize = 100;

fn unrotate(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, -(angle - PI))
}

fn half_rotate(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, (angle - PI) / 2.0)
}

/// Square root of a scalar on the branch cut at `angle`.
fn branch_sqrt(z: Complex64, angle: f64) -> Complex64 {
    (z * unrotate(angle)).sqrt() * half_rotate(angle)
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn zero_threshold(scale: f64, tol: &ToleranceConfig) -> f64 {
    tol.rank_tol * scale.max(f64::MIN_POSITIVE)
}

fn check_spectrum(
    eigs: &[Complex64],
    angle: f64,
    scale: f64,
    tol: &ToleranceConfig,
) -> Result<(), LinalgError> {
    let zero = zero_threshold(scale, tol);
    for &z in eigs {
        if z.norm() <= zero {
            return Err(LinalgError::SingularUnsupported { eigenvalue: z });
        }
        if angular_distance(z.arg(), angle) < CUT_MARGIN {
            return Err(LinalgError::EigenvalueOnCut {
                angle,
                eigenvalue: z,
            });
        }
    }
    Ok(())
}

/// Picks a cut ray that clears the nonzero eigenvalues.
///
/// Scans `π, π ± π/8, π ± π/4, …` and returns the first ray with at
/// least `π/32` of angular clearance. If every scanned ray is crowded it
/// falls back to the bisector of the widest gap between eigenvalue
/// arguments, which exists for any finite spectrum.
pub fn select_branch(eigs: &[Complex64], scale: f64, tol: &ToleranceConfig) -> f64 {
    let zero = zero_threshold(scale, tol);
    let mut args: Vec<f64> = eigs
        .iter()
        .filter(|z| z.norm() > zero)
        .map(|z| z.arg())
        .collect();
    if args.is_empty() {
        return PI;
    }
    let clearance = |angle: f64| {
        args.iter()
            .map(|&a| angular_distance(a, angle))
            .fold(f64::INFINITY, f64::min)
    };
    let step = PI / BRANCH_SCAN_STEPS as f64;
    let mut candidates = vec![PI];
    for k in 1..=BRANCH_SCAN_STEPS {
        candidates.push(PI + k as f64 * step);
        if k < BRANCH_SCAN_STEPS {
            candidates.push(PI - k as f64 * step);
        }
    }
    if let Some(&angle) = candidates.iter().find(|&&a| clearance(a) >= SCAN_CLEARANCE) {
        return angle;
    }
    args.sort_by(f64::total_cmp);
    let mut best = (args[0] + 2.0 * PI - args[args.len() - 1], args[args.len() - 1]);
    for pair in args.windows(2) {
        let gap = pair[1] - pair[0];
        if gap > best.0 {
            best = (gap, pair[0]);
        }
    }
    best.1 + best.0 / 2.0
}

fn sqrt_triangular(t: &CMat, angle: f64) -> CMat {
    let n = t.nrows();
    let mut r = CMat::zeros(n, n);
    for j in 0..n {
        r[(j, j)] = branch_sqrt(t[(j, j)], angle);
        for i in (0..j).rev() {
            let mut acc = t[(i, j)];
            for k in (i + 1)..j {
                acc -= r[(i, k)] * r[(k, j)];
            }
            r[(i, j)] = acc / (r[(i, i)] + r[(j, j)]);
        }
    }
    r
}

fn sqrt_from_schur(
    form: &SchurForm,
    scale: f64,
    angle: f64,
    tol: &ToleranceConfig,
) -> Result<Matrix, LinalgError> {
    check_spectrum(&form.eigenvalues(), angle, scale, tol)?;
    Matrix::from_cmat(form.lift(sqrt_triangular(form.triangular(), angle)))
}

/// Primary square root of `m` on the branch cut at `branch_angle`.
///
/// The result is a polynomial in `m`, so it commutes with everything that
/// commutes with `m`.
pub fn primary_sqrt(
    m: &Matrix,
    branch_angle: f64,
    tol: &ToleranceConfig,
) -> Result<Matrix, LinalgError> {
    let form = SchurForm::new(m)?;
    sqrt_from_schur(&form, m.norm_fro(), branch_angle, tol)
}

/// Primary square root with the cut chosen by [`select_branch`]; returns the root and the angle used.
pub fn primary_sqrt_auto(m: &Matrix, tol: &ToleranceConfig) -> Result<(Matrix, f64), LinalgError> {
    let form = SchurForm::new(m)?;
    let scale = m.norm_fro();
    let angle = select_branch(&form.eigenvalues(), scale, tol);
    Ok((sqrt_from_schur(&form, scale, angle, tol)?, angle))
}

fn log_abs_det(m: &CMat) -> Result<f64, LinalgError> {
    let lu = m.clone().lu();
    let u = lu.u();
    let mut acc = 0.0;
    for i in 0..u.nrows() {
        let d = u[(i, i)].norm();
        if d == 0.0 {
            return Err(LinalgError::Singular);
        }
        acc += d.ln();
    }
    Ok(acc)
}

/// Scaled Denman–Beavers iteration on the branch cut at `branch_angle`.
///
/// Determinant scaling is applied until successive iterates agree to
/// `1e-2`, then the plain iteration finishes quadratically.
pub fn denman_beavers_sqrt(
    m: &Matrix,
    branch_angle: f64,
    tol: &ToleranceConfig,
) -> Result<Matrix, LinalgError> {
    check_spectrum(&super::eigenvalues(m)?, branch_angle, m.norm_fro(), tol)?;
    let n = m.dim();
    let mut y = m.scale(unrotate(branch_angle)).into_cmat();
    let mut z = CMat::identity(n, n);
    let mut scaling = true;
    let mut finishing = false;
    for _ in 0..DB_MAX_ITER {
        let y_inv = y.clone().lu().try_inverse().ok_or(LinalgError::Singular)?;
        let z_inv = z.clone().lu().try_inverse().ok_or(LinalgError::Singular)?;
        let gamma = if scaling {
            (-(log_abs_det(&y)? + log_abs_det(&z)?) / (2.0 * n as f64)).exp()
        } else {
            1.0
        };
        let g = Complex64::new(gamma, 0.0);
        let half = Complex64::new(0.5, 0.0);
        let y_next = (&y * g + z_inv / g) * half;
        let z_next = (&z * g + y_inv / g) * half;
        let change = (&y_next - &y).norm() / y_next.norm();
        y = y_next;
        z = z_next;
        if finishing {
            return Matrix::from_cmat(y * half_rotate(branch_angle));
        }
        if change < 1e-2 {
            scaling = false;
        }
        if change < 1e-10 {
            finishing = true;
        }
    }
    Err(LinalgError::NoConvergence {
        iterations: DB_MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> Matrix {
        Matrix::from_real_rows(rows).unwrap()
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn identity_root_is_identity() {
        for angle in [PI, PI / 2.0, 3.0 * PI / 2.0] {
            let r = primary_sqrt(&Matrix::identity(3), angle, &tol()).unwrap();
            assert!((&r - &Matrix::identity(3)).norm_fro() < 1e-15);
        }
    }

    #[test]
    fn diagonal_root() {
        let r = primary_sqrt(&Matrix::real_diagonal(&[4.0, 9.0]), PI, &tol()).unwrap();
        assert_eq!(r, Matrix::real_diagonal(&[2.0, 3.0]));
    }

    #[test]
    fn jordan_root_matches_binomial() {
        let m = real(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let r = primary_sqrt(&m, PI, &tol()).unwrap();
        let expected = real(&[&[1.0, 0.5], &[0.0, 1.0]]);
        assert!((&r - &expected).norm_fro() < 1e-15);
        assert!((&(&r * &r) - &m).norm_fro() < 1e-15);
    }

    #[test]
    fn branch_determines_half_plane() {
        // -4 sits on the principal cut; rotating the cut gives ±2i.
        let m = Matrix::real_diagonal(&[-4.0]);
        assert!(matches!(
            primary_sqrt(&m, PI, &tol()),
            Err(LinalgError::EigenvalueOnCut { .. })
        ));
        let up = primary_sqrt(&m, PI / 2.0, &tol()).unwrap().get(0, 0);
        let down = primary_sqrt(&m, 3.0 * PI / 2.0, &tol()).unwrap().get(0, 0);
        assert!((up - Complex64::new(0.0, -2.0)).norm() < 1e-15);
        assert!((down - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_is_rejected() {
        let m = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            primary_sqrt(&m, PI, &tol()),
            Err(LinalgError::SingularUnsupported { .. })
        ));
        assert!(matches!(
            primary_sqrt_auto(&m, &tol()),
            Err(LinalgError::SingularUnsupported { .. })
        ));
    }

    #[test]
    fn auto_branch_avoids_negative_axis() {
        let m = Matrix::real_diagonal(&[-1.0, 4.0, -9.0]);
        let (r, angle) = primary_sqrt_auto(&m, &tol()).unwrap();
        assert!(angular_distance(angle, PI) > 0.1);
        assert!((&(&r * &r) - &m).norm_fro() < 1e-13);
    }

    #[test]
    fn scan_falls_back_to_widest_gap() {
        // Sixteen eigenvalues sitting on the sixteen scanned rays.
        let eigs: Vec<Complex64> = (0..16)
            .map(|k| Complex64::from_polar(1.0, k as f64 * PI / 8.0))
            .collect();
        let angle = select_branch(&eigs, 1.0, &tol());
        let clearance = eigs
            .iter()
            .map(|z| angular_distance(z.arg(), angle))
            .fold(f64::INFINITY, f64::min);
        assert!((clearance - PI / 16.0).abs() < 1e-12);
    }

    #[test]
    fn denman_beavers_agrees_with_schur() {
        let m = real(&[&[4.0, 1.0, 0.0], &[-1.0, 3.0, 2.0], &[0.5, 0.0, 5.0]]);
        let a = primary_sqrt(&m, PI, &tol()).unwrap();
        let b = denman_beavers_sqrt(&m, PI, &tol()).unwrap();
        assert!((&a - &b).norm_fro() < 1e-12);
        let rotated = m.scale_real(-1.0);
        let a = primary_sqrt(&rotated, PI / 2.0, &tol()).unwrap();
        let b = denman_beavers_sqrt(&rotated, PI / 2.0, &tol()).unwrap();
        assert!((&a - &b).norm_fro() < 1e-12);
    }
}
