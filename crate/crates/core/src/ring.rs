//! Idempotent pairs, involution pairs and square-root witnesses.
//!
//! In a ring where 2 is invertible the following carry the same
//! information about an element `t`:
//!
//! 1. idempotents `p, q` with `t = pq − qp`;
//! 2. involutions `u, v` with `4t = uv − vu` (`u = 2p − 1`, `v = 2q − 1`);
//! 3. a witness `(u, s, t)` with `u² = 1`, `ut + tu = 0`, `us = su`,
//!    `st = ts` and `s² = t² + 1/4` (`s = (uv + vu)/4`).
//!
//! From a witness the involution `v = 2u(s + t) = 2(s − t)u` is recovered.
//! Every function here works for [`RationalMatrix`] (exact, zero residual
//! required) and [`Matrix`] (residuals against `eq_tol`).
//!
//! [`RationalMatrix`]: crate::linalg::RationalMatrix
//! [`Matrix`]: crate::linalg::Matrix

use std::fmt;

use thiserror::Error;

use crate::linalg::{check_residual, is_idempotent, is_involution, RingMatrix, ToleranceConfig};

/// Which argument of a two-argument conversion failed its precondition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    First,
    Second,
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operand::First => "first",
            Operand::Second => "second",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RingError {
    #[error("{which} operand is not idempotent (residual {residual:e})")]
    NotIdempotent { which: Operand, residual: f64 },
    #[error("{which} operand is not an involution (residual {residual:e})")]
    NotInvolution { which: Operand, residual: f64 },
    #[error("witness fails `{identity}` (residual {residual:e})")]
    WitnessInvalid {
        identity: &'static str,
        residual: f64,
    },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// `(u, s, t)` certifying that `t` is a commutator of idempotents.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtWitness<M> {
    pub u: M,
    pub s: M,
    pub t: M,
}

/// Involutions `u, v` with `4t = uv − vu`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvolutionPair<M> {
    pub u: M,
    pub v: M,
    pub t: M,
}

/// Idempotents `p, q` with `t = pq − qp`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdempotentPair<M> {
    pub p: M,
    pub q: M,
    pub t: M,
}

/// Names of the five witness identities, in report order.
pub const WITNESS_IDENTITIES: [&str; 5] = [
    "u^2 = 1",
    "ut + tu = 0",
    "us = su",
    "st = ts",
    "s^2 = t^2 + 1/4",
];

/// Residuals of the five witness identities.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub residuals: Vec<(&'static str, f64)>,
    /// First identity that failed, if any.
    pub failed: Option<&'static str>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.failed.is_none()
    }
}

fn same_dim<M: RingMatrix>(a: &M, b: &M) -> Result<(), RingError> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(RingError::DimensionMismatch(a.dim(), b.dim()))
    }
}

fn require_involution<M: RingMatrix>(
    m: &M,
    which: Operand,
    tol: &ToleranceConfig,
) -> Result<(), RingError> {
    let c = is_involution(m, tol);
    if c.holds {
        Ok(())
    } else {
        Err(RingError::NotInvolution {
            which,
            residual: c.residual,
        })
    }
}

/// `u = 2p − 1`, `v = 2q − 1`, `t = pq − qp`.
pub fn idempotents_to_involutions<M: RingMatrix>(
    p: &M,
    q: &M,
    tol: &ToleranceConfig,
) -> Result<InvolutionPair<M>, RingError> {
    same_dim(p, q)?;
    for (m, which) in [(p, Operand::First), (q, Operand::Second)] {
        let c = is_idempotent(m, tol);
        if !c.holds {
            return Err(RingError::NotIdempotent {
                which,
                residual: c.residual,
            });
        }
    }
    let one = M::identity(p.dim());
    Ok(InvolutionPair {
        u: p.ratio(2, 1).minus(&one),
        v: q.ratio(2, 1).minus(&one),
        t: p.times(q).minus(&q.times(p)),
    })
}

/// `t = (uv − vu)/4`, `s = (uv + vu)/4`.
pub fn involutions_to_sqrt_witness<M: RingMatrix>(
    u: &M,
    v: &M,
    tol: &ToleranceConfig,
) -> Result<SqrtWitness<M>, RingError> {
    same_dim(u, v)?;
    require_involution(u, Operand::First, tol)?;
    require_involution(v, Operand::Second, tol)?;
    let uv = u.times(v);
    let vu = v.times(u);
    Ok(SqrtWitness {
        u: u.clone(),
        s: uv.plus(&vu).ratio(1, 4),
        t: uv.minus(&vu).ratio(1, 4),
    })
}

/// Residuals of the five identities a witness must satisfy.
///
/// Floating residuals are judged against `eq_tol · max(1, ‖u‖, ‖s‖, ‖t‖)²`.
pub fn verify_witness<M: RingMatrix>(w: &SqrtWitness<M>, tol: &ToleranceConfig) -> WitnessReport {
    let SqrtWitness { u, s, t } = w;
    let one = M::identity(u.dim());
    let scale = [1.0, u.size(), s.size(), t.size()]
        .into_iter()
        .fold(0.0, f64::max)
        .powi(2);
    let differences = [
        u.times(u).minus(&one),
        u.times(t).plus(&t.times(u)),
        u.times(s).minus(&s.times(u)),
        s.times(t).minus(&t.times(s)),
        s.times(s).minus(&t.times(t)).minus(&one.ratio(1, 4)),
    ];
    let mut failed = None;
    let residuals = WITNESS_IDENTITIES
        .iter()
        .zip(&differences)
        .map(|(&name, diff)| {
            let c = check_residual(diff, scale, tol);
            if !c.holds && failed.is_none() {
                failed = Some(name);
            }
            (name, c.residual)
        })
        .collect();
    WitnessReport { residuals, failed }
}

/// `v = 2u(s + t)`, cross-checked against `2(s − t)u`.
pub fn witness_to_involution<M: RingMatrix>(
    w: &SqrtWitness<M>,
    tol: &ToleranceConfig,
) -> Result<M, RingError> {
    same_dim(&w.u, &w.s)?;
    same_dim(&w.u, &w.t)?;
    let report = verify_witness(w, tol);
    if let Some(identity) = report.failed {
        let residual = report
            .residuals
            .iter()
            .find(|(name, _)| *name == identity)
            .map_or(f64::NAN, |r| r.1);
        return Err(RingError::WitnessInvalid { identity, residual });
    }
    let v = w.u.times(&w.s.plus(&w.t)).ratio(2, 1);
    let alt = w.s.minus(&w.t).times(&w.u).ratio(2, 1);
    let c = check_residual(&v.minus(&alt), v.size().max(1.0), tol);
    if !c.holds {
        return Err(RingError::WitnessInvalid {
            identity: "2u(s+t) = 2(s-t)u",
            residual: c.residual,
        });
    }
    Ok(v)
}

/// `p = (u + 1)/2`, `q = (v + 1)/2`, `t = pq − qp`.
pub fn involutions_to_idempotents<M: RingMatrix>(
    u: &M,
    v: &M,
    tol: &ToleranceConfig,
) -> Result<IdempotentPair<M>, RingError> {
    same_dim(u, v)?;
    require_involution(u, Operand::First, tol)?;
    require_involution(v, Operand::Second, tol)?;
    let one = M::identity(u.dim());
    let p = u.plus(&one).ratio(1, 2);
    let q = v.plus(&one).ratio(1, 2);
    let t = p.times(&q).minus(&q.times(&p));
    Ok(IdempotentPair { p, q, t })
}

/// Every stage of the chain idempotents → involutions → witness → involution → idempotents.
#[derive(Debug, Clone, PartialEq)]
pub struct RingChain<M> {
    pub involutions: InvolutionPair<M>,
    pub witness: SqrtWitness<M>,
    pub witness_report: WitnessReport,
    pub recovered_v: M,
    pub recovered: IdempotentPair<M>,
    /// `‖4t − (uv − vu)‖`.
    pub involution_commutator_residual: f64,
    /// `‖[p′, q′] − t‖` for the recovered idempotents.
    pub final_commutator_residual: f64,
}

pub fn run_chain<M: RingMatrix>(
    p: &M,
    q: &M,
    tol: &ToleranceConfig,
) -> Result<RingChain<M>, RingError> {
    let involutions = idempotents_to_involutions(p, q, tol)?;
    let InvolutionPair { u, v, t } = &involutions;
    let involution_commutator_residual = t
        .ratio(4, 1)
        .minus(&u.times(v).minus(&v.times(u)))
        .size();
    let witness = involutions_to_sqrt_witness(u, v, tol)?;
    let witness_report = verify_witness(&witness, tol);
    let recovered_v = witness_to_involution(&witness, tol)?;
    let recovered = involutions_to_idempotents(u, &recovered_v, tol)?;
    let final_commutator_residual = recovered.t.minus(t).size();
    Ok(RingChain {
        involutions,
        witness,
        witness_report,
        recovered_v,
        recovered,
        involution_commutator_residual,
        final_commutator_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Matrix, RationalMatrix};

    fn r(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_integer_rows(rows).unwrap()
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn half_identity(n: usize) -> RationalMatrix {
        RationalMatrix::identity(n).ratio(1, 2)
    }

    #[test]
    fn worked_example_forward() {
        let p = r(&[&[1, 0], &[0, 0]]);
        let q = r(&[&[1, 1], &[0, 0]]);
        let pair = idempotents_to_involutions(&p, &q, &tol()).unwrap();
        assert_eq!(pair.u, r(&[&[1, 0], &[0, -1]]));
        assert_eq!(pair.v, r(&[&[1, 2], &[0, -1]]));
        assert_eq!(pair.t, r(&[&[0, 1], &[0, 0]]));
        let uv = pair.u.times(&pair.v).minus(&pair.v.times(&pair.u));
        assert_eq!(uv, r(&[&[0, 4], &[0, 0]]));

        let w = involutions_to_sqrt_witness(&pair.u, &pair.v, &tol()).unwrap();
        assert_eq!(w.t, pair.t);
        assert_eq!(w.s, half_identity(2));
        let report = verify_witness(&w, &tol());
        assert!(report.passed());
        assert!(report.residuals.iter().all(|&(_, x)| x == 0.0));

        assert_eq!(witness_to_involution(&w, &tol()).unwrap(), pair.v);
    }

    #[test]
    fn worked_example_inverse() {
        let u = r(&[&[1, 0], &[0, -1]]);
        let v = r(&[&[1, 2], &[0, -1]]);
        let back = involutions_to_idempotents(&u, &v, &tol()).unwrap();
        assert_eq!(back.p, r(&[&[1, 0], &[0, 0]]));
        assert_eq!(back.q, r(&[&[1, 1], &[0, 0]]));
        assert_eq!(back.t, r(&[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn trivial_pairs() {
        let one = RationalMatrix::identity(3);
        let zero = RationalMatrix::zeros(3);
        let neg = zero.minus(&one);

        let pair = idempotents_to_involutions(&one, &one, &tol()).unwrap();
        assert_eq!((pair.u.clone(), pair.v.clone(), pair.t.clone()), (one.clone(), one.clone(), zero.clone()));
        let pair = idempotents_to_involutions(&one, &zero, &tol()).unwrap();
        assert_eq!((pair.u, pair.v, pair.t), (one.clone(), neg.clone(), zero.clone()));

        let w = involutions_to_sqrt_witness(&neg, &neg, &tol()).unwrap();
        assert_eq!((w.t, w.s), (zero.clone(), half_identity(3)));

        let v = r(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]);
        let w = involutions_to_sqrt_witness(&one, &v, &tol()).unwrap();
        assert_eq!((w.t, w.s), (zero.clone(), v.ratio(1, 2)));

        let back = involutions_to_idempotents(&one, &one, &tol()).unwrap();
        assert_eq!((back.p, back.q, back.t), (one.clone(), one.clone(), zero.clone()));
        let back = involutions_to_idempotents(&one, &neg, &tol()).unwrap();
        assert_eq!((back.p, back.q, back.t), (one.clone(), zero.clone(), zero.clone()));
    }

    #[test]
    fn zero_target_recovers_u() {
        let u = r(&[&[1, 0], &[0, -1]]);
        let w = SqrtWitness {
            u: u.clone(),
            s: half_identity(2),
            t: RationalMatrix::zeros(2),
        };
        assert_eq!(witness_to_involution(&w, &tol()).unwrap(), u);
        let w = SqrtWitness {
            u: RationalMatrix::identity(2),
            s: half_identity(2),
            t: RationalMatrix::zeros(2),
        };
        assert_eq!(witness_to_involution(&w, &tol()).unwrap(), RationalMatrix::identity(2));
    }

    #[test]
    fn witness_with_wrong_square_fails() {
        let w = SqrtWitness {
            u: RationalMatrix::identity(2),
            s: RationalMatrix::identity(2),
            t: RationalMatrix::zeros(2),
        };
        let report = verify_witness(&w, &tol());
        assert_eq!(report.failed, Some("s^2 = t^2 + 1/4"));
        assert!(matches!(
            witness_to_involution(&w, &tol()),
            Err(RingError::WitnessInvalid {
                identity: "s^2 = t^2 + 1/4",
                ..
            })
        ));
    }

    #[test]
    fn precondition_errors_name_the_operand() {
        let p = r(&[&[1, 0], &[0, 0]]);
        let bad = r(&[&[2, 0], &[0, 0]]);
        assert!(matches!(
            idempotents_to_involutions(&p, &bad, &tol()),
            Err(RingError::NotIdempotent { which: Operand::Second, .. })
        ));
        assert!(matches!(
            involutions_to_sqrt_witness(&p, &RationalMatrix::identity(2), &tol()),
            Err(RingError::NotInvolution { which: Operand::First, .. })
        ));
        assert!(matches!(
            involutions_to_idempotents(&RationalMatrix::identity(2), &bad, &tol()),
            Err(RingError::NotInvolution { which: Operand::Second, .. })
        ));
        assert_eq!(
            idempotents_to_involutions(&p, &RationalMatrix::identity(3), &tol()),
            Err(RingError::DimensionMismatch(2, 3))
        );
    }

    #[test]
    fn float_chain_on_worked_example() {
        let p = Matrix::real_diagonal(&[1.0, 0.0]);
        let q = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
        let chain = run_chain(&p, &q, &tol()).unwrap();
        assert!(chain.witness_report.passed());
        assert_eq!(chain.final_commutator_residual, 0.0);
        assert_eq!(chain.recovered.q, q);
    }
}
