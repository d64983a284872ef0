//! Truncated p-adic arithmetic over `k = Q_p` and its unramified quadratic
//! extension, representatives `x_lambda`, orbit invariants, the constructive
//! Cartan reduction for odd `m`, and a brute-force `m = 2` integral.

mod matrix;
mod oracle;
mod padic;
mod quad;
mod reduce;
pub mod sample;

use thiserror::Error;

pub use matrix::{
    act, conj_transpose, ell, identity, is_in_group, j_matrix, make_x_lambda, mat_mul,
    orbit_invariants, parse_k, OrbitInvariants, PadicHermitian, QMat,
};
pub use oracle::{omega_bruteforce_m2, valuation_distribution_m2};
pub use padic::{max_precision, PadicNum};
pub use quad::{solve_norm, Field, QuadExt};
pub use reduce::{cartan_reduce, cartan_reduce_m3, cartan_reduce_odd};

#[derive(Debug, Error)]
pub enum CartanError {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("not hermitian at precision")]
    NotHermitian,
    #[error("not in X: {0}")]
    NotInX(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal reduction error: {0}")]
    Internal(String),
}
