//! Exact coefficient arithmetic: rational functions in named symbols over Q.

mod poly;
mod ratfunc;

pub use poly::{gcd, Poly};
pub use ratfunc::{parse_rational, Coeff, CoefficientField};
