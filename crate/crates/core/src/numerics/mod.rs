//! Extreme-dynamic-range arithmetic and stable special functions.
//!
//! All operations here are pure functions of their arguments and safe to call
//! from any number of threads.

mod log_complex;
mod quadrature;
mod special;

pub use log_complex::LogComplex;
pub use quadrature::QuadratureRule;
pub use special::{
    hermite_complex_log, hermite_function, hermite_function_sequence, hermite_log,
    hermite_log_sequence, legendre_p, legendre_with_derivatives, ln_factorial, log_binomial,
};
