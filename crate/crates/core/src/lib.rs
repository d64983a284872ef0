//! Exact computation of type-C Hall-Littlewood polynomials and of spherical
//! functions on the space of unitary hermitian matrices over a p-adic field.

pub mod exact_arith;
pub mod weyl_roots;
pub mod hall_littlewood;
pub mod padic_cartan;
pub mod spherical;
pub mod schwartz_plancherel;
