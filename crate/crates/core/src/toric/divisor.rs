use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ToricRing;
use crate::error::{Error, Result};
use crate::rational::{ceil_i64, floor_i64, int, serde_fraction, Rational};

/// `Σ c_i D_i` over the facet divisors of a toric ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusQDivisor {
    #[serde(rename = "facet_coeffs", with = "serde_fraction::vec")]
    pub coefficients: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundMode {
    Floor,
    Ceil,
}

impl TorusQDivisor {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        TorusQDivisor { coefficients }
    }

    pub fn zero(facets: usize) -> Self {
        TorusQDivisor { coefficients: vec![Rational::zero(); facets] }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn is_effective(&self) -> bool {
        self.coefficients.iter().all(|c| !c.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_integer())
    }

    /// Usable as a pair boundary: every coefficient in `[0, 1)`.
    pub fn check_boundary(&self, ring: &ToricRing) -> Result<()> {
        if self.len() != ring.num_facets() {
            return Err(Error::InvalidInput(format!(
                "divisor has {} coefficients but the ring has {} facets",
                self.len(),
                ring.num_facets()
            )));
        }
        for c in &self.coefficients {
            if c.is_negative() || *c >= Rational::one() {
                return Err(Error::InvalidInput(format!("boundary coefficient {c} is outside [0, 1)")));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        TorusQDivisor { coefficients: self.coefficients.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        TorusQDivisor { coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        TorusQDivisor { coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a - b).collect() }
    }
}

/// `K_R = −Σ D_i`.
pub fn canonical_divisor(ring: &ToricRing) -> TorusQDivisor {
    TorusQDivisor { coefficients: vec![-Rational::one(); ring.num_facets()] }
}

/// Componentwise `⌊s·c_i⌋` or `⌈s·c_i⌉`.
pub fn divisor_round(delta: &TorusQDivisor, scalar: &Rational, mode: RoundMode) -> TorusQDivisor {
    let coefficients = delta
        .coefficients
        .iter()
        .map(|c| {
            let x = c * scalar;
            int(match mode {
                RoundMode::Floor => floor_i64(&x),
                RoundMode::Ceil => ceil_i64(&x),
            })
        })
        .collect();
    TorusQDivisor { coefficients }
}
