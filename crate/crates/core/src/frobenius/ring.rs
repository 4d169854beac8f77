use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{default_names, parse_polynomial_with, Polynomial, PrimeField};
use crate::rational::{ceil_i64, floor_i64, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingKind {
    /// `𝔽_p[x_1..x_n]` localised at the origin.
    Regular,
    /// `𝔽_p[x_1..x_n]/(f)` localised at the origin.
    Hypersurface(Polynomial),
}

/// A local ring over `𝔽_p` presented as a polynomial ring or a hypersurface
/// in one, with maximal ideal generated by all variables.
///
/// Residue fields are perfect, so the `p^{eα}` normalisation is always 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    nvars: usize,
    field: PrimeField,
    kind: RingKind,
    names: Vec<String>,
}

impl RingPresentation {
    pub fn regular(nvars: usize, p: u64) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidInput("a regular ring needs at least one variable".into()));
        }
        Ok(RingPresentation {
            nvars,
            field: PrimeField::new(p)?,
            kind: RingKind::Regular,
            names: default_names(nvars),
        })
    }

    /// `P/(f)`; `f` must be a nonzero non-unit vanishing at the origin.
    pub fn hypersurface(f: Polynomial) -> Result<Self> {
        let nvars = f.nvars();
        Self::hypersurface_named(f, default_names(nvars))
    }

    pub fn hypersurface_named(f: Polynomial, names: Vec<String>) -> Result<Self> {
        if f.is_zero() || !f.in_maximal_ideal() {
            return Err(Error::InvalidInput(
                "hypersurface equation must be nonzero and vanish at the origin".into(),
            ));
        }
        if f.nvars() < 2 {
            return Err(Error::InvalidInput("hypersurface needs at least two variables".into()));
        }
        if names.len() != f.nvars() {
            return Err(Error::InvalidInput("variable names do not match the ring".into()));
        }
        Ok(RingPresentation { nvars: f.nvars(), field: f.field(), kind: RingKind::Hypersurface(f), names })
    }

    /// Parses `text` as a hypersurface equation in the given variables.
    pub fn parse_hypersurface(text: &str, names: Vec<String>, p: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let f = parse_polynomial_with(text, &names, field)?;
        Self::hypersurface_named(f, names)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.nvars {
            return Err(Error::InvalidInput("variable names do not match the ring".into()));
        }
        self.names = names;
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn equation(&self) -> Option<&Polynomial> {
        match &self.kind {
            RingKind::Regular => None,
            RingKind::Hypersurface(f) => Some(f),
        }
    }

    /// Krull dimension `d`.
    pub fn dim(&self) -> u32 {
        match self.kind {
            RingKind::Regular => self.nvars as u32,
            RingKind::Hypersurface(_) => self.nvars as u32 - 1,
        }
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        parse_polynomial_with(text, &self.names, self.field)
    }

    /// Whether `c` is nonzero in the ring.
    pub fn is_nonzero(&self, c: &Polynomial) -> bool {
        match &self.kind {
            RingKind::Regular => !c.is_zero(),
            RingKind::Hypersurface(f) => {
                !crate::poly::Ideal::new(self.nvars, self.field, vec![f.clone()]).contains(c)
            }
        }
    }
}

/// Which rounding of `p^e Δ` twists the maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Exponents `⌊p^e t⌋`.
    #[default]
    FloorPe,
    /// Exponents `⌈(p^e − 1) t⌉`.
    CeilPeMinus1,
}

impl Convention {
    pub fn exponent(self, t: &Rational, q: u64) -> i64 {
        let q = Rational::from_integer(q.into());
        match self {
            Convention::FloorPe => floor_i64(&(q * t)),
            Convention::CeilPeMinus1 => ceil_i64(&((q - Rational::one()) * t)),
        }
    }
}

/// `Δ = Σ t_j·div(g_j)` with `0 ≤ t_j < 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDivisorSpec {
    pub components: Vec<(Polynomial, Rational)>,
    pub convention: Convention,
}

impl PairDivisorSpec {
    pub fn empty() -> Self {
        PairDivisorSpec { components: Vec::new(), convention: Convention::FloorPe }
    }

    pub fn new(components: Vec<(Polynomial, Rational)>, convention: Convention) -> Result<Self> {
        for (g, t) in &components {
            if g.is_zero() || g.is_unit() || !g.in_maximal_ideal() {
                return Err(Error::InvalidInput(format!(
                    "pair component `{g}` must be a nonzero non-unit vanishing at the origin"
                )));
            }
            if t.is_negative() || *t >= Rational::one() {
                return Err(Error::InvalidInput(format!(
                    "pair coefficient {t} must lie in [0, 1) so that the round-down vanishes"
                )));
            }
        }
        Ok(PairDivisorSpec { components, convention })
    }

    pub fn is_empty(&self) -> bool {
        self.components.iter().all(|(_, t)| t.is_zero())
    }

    /// Rounded exponents `r_j` at `q = p^e` for the spec's convention.
    pub fn exponents(&self, q: u64) -> Vec<i64> {
        self.components.iter().map(|(_, t)| self.convention.exponent(t, q)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn conventions_round_as_documented() {
        assert_eq!(Convention::FloorPe.exponent(&rat(1, 2), 5), 2);
        assert_eq!(Convention::CeilPeMinus1.exponent(&rat(1, 2), 5), 2);
        assert_eq!(Convention::FloorPe.exponent(&rat(2, 3), 3), 2);
        assert_eq!(Convention::CeilPeMinus1.exponent(&rat(2, 3), 3), 2);
        assert_eq!(Convention::FloorPe.exponent(&rat(1, 3), 5), 1);
        assert_eq!(Convention::CeilPeMinus1.exponent(&rat(1, 3), 5), 2);
    }

    #[test]
    fn pair_coefficients_are_validated() {
        let f = PrimeField::new(5).unwrap();
        let x = Polynomial::var(2, f, 0);
        assert!(PairDivisorSpec::new(vec![(x.clone(), rat(1, 1))], Convention::FloorPe).is_err());
        assert!(PairDivisorSpec::new(vec![(x.clone(), rat(-1, 2))], Convention::FloorPe).is_err());
        assert!(PairDivisorSpec::new(vec![(Polynomial::one(2, f), rat(1, 2))], Convention::FloorPe).is_err());
        assert!(PairDivisorSpec::new(vec![(x, rat(1, 2))], Convention::FloorPe).is_ok());
    }

    #[test]
    fn dimensions() {
        assert_eq!(RingPresentation::regular(3, 5).unwrap().dim(), 3);
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let r = RingPresentation::parse_hypersurface("x*y - z^2", names.clone(), 3).unwrap();
        assert_eq!(r.dim(), 2);
        assert!(RingPresentation::parse_hypersurface("x*y - 1", names, 3).is_err());
    }
}
