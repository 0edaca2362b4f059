//! Random test data: idempotents, invertible matrices, anticommuting pairs.
//!
//! Idempotents are generated as `g · diag(1, …, 1, 0, …, 0) · g⁻¹` with a
//! random invertible `g`, which reaches every similarity class (the rank
//! is the only invariant).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;

use crate::linalg::{CMat, Matrix, RationalMatrix};

/// Random integer matrix with entries in `-range..=range` and its exact inverse.
pub fn random_invertible_rational<R: Rng>(
    n: usize,
    range: i64,
    rng: &mut R,
) -> (RationalMatrix, RationalMatrix) {
    loop {
        let entries = (0..n * n)
            .map(|_| BigRational::from_integer(BigInt::from(rng.random_range(-range..=range))))
            .collect();
        let g = RationalMatrix::new(n, entries).expect("n > 0");
        if let Some(inv) = g.inverse() {
            return (g, inv);
        }
    }
}

/// Exact idempotent of the given rank.
pub fn random_rational_idempotent<R: Rng>(n: usize, rank: usize, rng: &mut R) -> RationalMatrix {
    let (g, g_inv) = random_invertible_rational(n, 3, rng);
    let d: Vec<BigRational> = (0..n)
        .map(|i| BigRational::from_integer(BigInt::from(i64::from(i < rank))))
        .collect();
    &(&g * &RationalMatrix::diagonal(&d)) * &g_inv
}

/// Two independent exact idempotents with uniformly random ranks.
pub fn random_rational_idempotent_pair<R: Rng>(
    n: usize,
    rng: &mut R,
) -> (RationalMatrix, RationalMatrix) {
    let p = random_rational_idempotent(n, rng.random_range(0..=n), rng);
    let q = random_rational_idempotent(n, rng.random_range(0..=n), rng);
    (p, q)
}

/// Entries with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_complex<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    })
}

/// `2I + R/√n` with `R` from [`random_complex`]; invertible with moderate condition number.
pub fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let r = random_complex(n, n, rng) / Complex64::new((n as f64).sqrt(), 0.0);
    CMat::identity(n, n) * Complex64::new(2.0, 0.0) + r
}

pub fn random_float_idempotent<R: Rng>(n: usize, rank: usize, rng: &mut R) -> Matrix {
    let g = random_invertible(n, rng);
    let g_inv = g.clone().lu().try_inverse().expect("diagonally dominant");
    let d = CMat::from_fn(n, n, |i, j| Complex64::new(f64::from(u8::from(i == j && i < rank)), 0.0));
    Matrix::from_cmat(&g * d * g_inv).expect("finite")
}

pub fn random_float_idempotent_pair<R: Rng>(n: usize, rng: &mut R) -> (Matrix, Matrix) {
    let p = random_float_idempotent(n, rng.random_range(0..=n), rng);
    let q = random_float_idempotent(n, rng.random_range(0..=n), rng);
    (p, q)
}

/// `T` anticommuting with `U`, built from off-diagonal blocks in a random basis.
#[derive(Debug, Clone)]
pub struct AnticommutingSample {
    pub t: Matrix,
    pub u: Matrix,
    /// Block `X₂ → X₁`, `dim1 × dim2`.
    pub b: CMat,
    /// Block `X₁ → X₂`, `dim2 × dim1`.
    pub c: CMat,
    /// Basis change `w` with `u = w · diag(I₁, −I₂) · w⁻¹`.
    pub w: CMat,
}

/// `t = w [[0, b], [c, 0]] w⁻¹` and `u = w diag(I, −I) w⁻¹` for random `b`, `c`, `w`.
pub fn random_anticommuting_pair<R: Rng>(
    dim1: usize,
    dim2: usize,
    rng: &mut R,
) -> AnticommutingSample {
    let b = random_complex(dim1, dim2, rng);
    let c = random_complex(dim2, dim1, rng);
    let w = random_invertible(dim1 + dim2, rng);
    anticommuting_from_blocks(b, c, w)
}

/// Assembles `t` and `u` from given blocks and basis change.
pub fn anticommuting_from_blocks(b: CMat, c: CMat, w: CMat) -> AnticommutingSample {
    let (k1, k2) = (b.nrows(), b.ncols());
    let n = k1 + k2;
    let mut block = CMat::zeros(n, n);
    block.view_mut((0, k1), (k1, k2)).copy_from(&b);
    block.view_mut((k1, 0), (k2, k1)).copy_from(&c);
    let signs = CMat::from_fn(n, n, |i, j| {
        Complex64::new(if i != j { 0.0 } else if i < k1 { 1.0 } else { -1.0 }, 0.0)
    });
    let w_inv = w.clone().lu().try_inverse().expect("basis change must be invertible");
    AnticommutingSample {
        t: Matrix::from_cmat(&w * block * &w_inv).expect("finite"),
        u: Matrix::from_cmat(&w * signs * &w_inv).expect("finite"),
        b,
        c,
        w,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_idempotent, is_involution, RingMatrix, ToleranceConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_idempotents_are_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tol = ToleranceConfig::default();
        for n in 1..=5 {
            for rank in 0..=n {
                let p = random_rational_idempotent(n, rank, &mut rng);
                assert!(is_idempotent(&p, &tol).holds);
                let f = random_float_idempotent(n, rank, &mut rng);
                assert!(is_idempotent(&f, &tol).holds);
            }
        }
    }

    #[test]
    fn anticommuting_sample_anticommutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = random_anticommuting_pair(3, 2, &mut rng);
        let tol = ToleranceConfig::default();
        assert!(is_involution(&s.u, &tol).holds);
        let anti = s.t.times(&s.u).plus(&s.u.times(&s.t));
        assert!(anti.norm_fro() < 1e-12);
    }
}
