//! Exact multivariate polynomial arithmetic and ideal operations over `𝔽_p`.

mod field;
mod groebner;
mod ideal;
mod monomial;
pub mod mulmap;
mod parse;
mod polynomial;

pub use field::{is_prime, PrimeField};
pub use groebner::{exact_division, groebner_basis, reduce};
pub use ideal::{
    buchberger, colon_ideal, colon_ideal_by_elimination, colon_ideal_with_budget,
    count_standard_monomials, frobenius_power, normal_form, quotient_length, Ideal, Length,
};
pub use monomial::{default_names, Monomial, MonomialOrder};
pub use parse::{parse_polynomial, parse_polynomial_with};
pub use polynomial::Polynomial;
