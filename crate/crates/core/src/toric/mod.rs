//! Toric rings `k[σ^∨ ∩ M]`, cyclic quotient singularities and their exact
//! F-signatures.

mod cone;
mod divisor;
mod splitting;

pub use cone::{for_each_lattice_point, QuotientData, ToricRing, ToricSummary};
pub use divisor::{canonical_divisor, divisor_round, RoundMode, TorusQDivisor};
pub use splitting::{
    fitted_constant, toric_fsig_exact, toric_fsig_sequence, toric_splitting_count, toric_splitting_number,
    verify_certificate, ClassStatus, FreeClassCertificate, ToricSplitting,
};
