//! Coefficient rings: `k[x_1..x_d]`, its localization `R` at the origin,
//! the fraction field `K`, valuations, and divisors.

pub mod divisor;
pub mod field;
pub mod frac;
pub mod parse;
pub mod poly;
mod upoly;

pub use divisor::{
    check_hints, factor_element, field_divisor, ord_at, Certification, Divisor, DvrView,
    FactorError, Factorization, PrimeElem,
};
pub use field::{BaseField, FieldError, Scalar};
pub use frac::{fractional_gcd, FieldElem, LocalElem, Valuation};
pub use parse::{parse_expr, ParseError};
pub use poly::{default_var_names, gcd, poly_sqrt, Monomial, Poly};

/// `true` iff `e` is a unit of `R`.
pub fn is_unit(e: &LocalElem) -> bool {
    e.is_unit()
}

/// Reduction `R -> R/m`.
pub fn residue(e: &LocalElem) -> Scalar {
    e.residue()
}

/// Alias kept for symmetry with the other ring operations.
pub fn gcd_poly(a: &Poly, b: &Poly) -> Poly {
    gcd(a, b)
}
