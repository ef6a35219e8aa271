//! Polynomials: dense univariate over the rationals and sparse multivariate over the integers.

mod multi;
mod upoly;

pub use multi::{IntPolynomial, MonomialOrder};
pub use upoly::UPoly;
