//! Exact arithmetic: Gaussian rationals, Laurent polynomials in `v = q^{1/2}`,
//! multivariate Laurent polynomials in `X_j = q^{z_j}`, and their quotients.

mod gaussian;
mod laurent;
mod ratfn;
mod scalar;

pub use gaussian::GaussianRational;
pub use laurent::{exact_divide, exact_divide_by_factors, MultiLaurent, NumericLaurent};
pub use ratfn::{CompiledRationalFn, RationalFn, DEFAULT_POLE_THRESHOLD};
pub use scalar::Scalar;

use crate::weyl_roots::SignedPermutation;

#[derive(Debug, thiserror::Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("inexact division (remainder has {} terms)", .remainder.num_flat_terms())]
    InexactDivision { remainder: Box<MultiLaurent> },
    #[error("inexact division (scalar remainder {remainder})")]
    InexactScalar { remainder: String },
    #[error("near-pole evaluation (|denominator| = {magnitude:e})")]
    NearPole { magnitude: f64 },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("negative power of a non-unit")]
    NotUnit,
}

/// `X^a -> X^{sigma(a)}`, extended linearly.
pub fn weyl_substitute(p: &MultiLaurent, s: &SignedPermutation) -> Result<MultiLaurent, ArithError> {
    if s.rank() != p.n() {
        return Err(ArithError::RankMismatch {
            expected: p.n(),
            got: s.rank(),
        });
    }
    Ok(p.map_exponents(|a| s.act(a)))
}
