//! Exact arithmetic kernels: Laurent polynomials, cyclotomic integers, finite
//! fields and dense linear algebra over them.

pub mod cyclo;
pub mod field;
pub mod laurent;
pub mod lucas;
pub mod matrix;

pub use cyclo::{lp_eval_cyclotomic, CycloElement};
pub use field::{is_prime, Field};
pub use laurent::LaurentPoly;
pub use lucas::{base_digits, lucas_binomial};
pub use matrix::{solve_linear, FFMatrix, RowEchelon, Solution};

/// Product of Laurent polynomials.
pub fn lp_mul(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    a * b
}
