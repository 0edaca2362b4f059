//! Factorization of matrices as commutators of idempotents `[P, Q] = PQ − QP`.
//!
//! * [`linalg`]: complex and exact rational matrices, Schur-based primary
//!   square roots, kernel dimensions.
//! * [`ring`]: conversions between idempotent pairs, involution pairs and
//!   commuting square-root witnesses, exact or floating.
//! * [`factorizer`]: given `T` anticommuting with an involution `U`, builds
//!   an idempotent `Q` with `[(U + I)/2, Q] = T`, or reports why it cannot.
//! * [`shift`]: truncated unilateral shifts and μ-sweeps of `μ·S`.
//! * [`cli`]: the `idemcomm` command-line front end.

pub mod linalg;
pub mod ring;
pub mod factorizer;
pub mod sample;
pub mod shift;
pub mod cli;
