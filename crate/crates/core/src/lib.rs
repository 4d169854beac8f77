//! Frobenius splitting numbers, F-signature and finite covers of
//! positive-characteristic singularities.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`]: exact polynomial arithmetic over a prime field, Gröbner bases,
//!   colon ideals, Frobenius powers and colengths.
//! * [`frobenius`]: splitting ideals and splitting numbers of regular and
//!   hypersurface rings (and pairs), F-signature sequences, Hilbert–Kunz
//!   lengths and strong F-regularity witnesses.
//! * [`toric`]: affine semigroup rings and cyclic quotient singularities with
//!   exact F-signatures from polytope volumes.
//! * [`covers`]: toric finite covers, their trace maps and ramification
//!   divisors, and checks of the F-signature transformation rules.
//! * [`bounds`]: fundamental-group order bounds, purity of the branch locus,
//!   index and Veronese degree bounds.

#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod budget;
pub mod covers;
pub mod error;
pub mod frobenius;
pub mod lattice;
pub mod poly;
pub mod rational;
pub mod toric;

pub use budget::Budget;
pub use error::{Error, Result};
pub use rational::Rational;

pub use poly::{Ideal, Monomial, MonomialOrder, Polynomial, PrimeField};
pub use toric::{ToricRing, TorusQDivisor};

/// Default cap on the Frobenius exponent `e` for sequence computations.
pub const DEFAULT_E_MAX: u32 = 4;
