use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::ring::{Convention, PairDivisorSpec, RingKind, RingPresentation};
use super::splitting::{colon_multiplier, normalize, rank_in_frobenius_box};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poly::mulmap::{multiplication_rank, MonomialQuotient};
use crate::poly::{frobenius_power, quotient_length, Ideal, Length, Monomial, Polynomial};
use crate::rational::{serde_fraction, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundingReport {
    pub q: u64,
    /// `⌊q·t_j⌋` per component.
    pub floor_exponents: Vec<i64>,
    /// `⌈(q−1)·t_j⌉` per component.
    pub ceil_exponents: Vec<i64>,
    /// Components where `(q−1)·t_j` is an integer.
    pub integral: Vec<bool>,
    pub inequality_holds: bool,
    pub equality_holds_where_integral: bool,
}

impl RoundingReport {
    pub fn passed(&self) -> bool {
        self.inequality_holds && self.equality_holds_where_integral
    }
}

pub fn rounding_gap_check(pair: &PairDivisorSpec, p: u64, e: u32) -> Result<RoundingReport> {
    let q = crate::poly::PrimeField::new(p)?.checked_power(e)?;
    let ts: Vec<Rational> = pair.components.iter().map(|(_, t)| t.clone()).collect();
    Ok(rounding_gap_for(&ts, q))
}

/// The rounding comparison for bare coefficients at a given `q`.
pub fn rounding_gap_for(coefficients: &[Rational], q: u64) -> RoundingReport {
    let floor_exponents: Vec<i64> = coefficients.iter().map(|t| Convention::FloorPe.exponent(t, q)).collect();
    let ceil_exponents: Vec<i64> = coefficients.iter().map(|t| Convention::CeilPeMinus1.exponent(t, q)).collect();
    let qm1 = Rational::from_integer(BigInt::from(q - 1));
    let integral: Vec<bool> = coefficients.iter().map(|t| (&qm1 * t).is_integer()).collect();
    let inequality_holds = floor_exponents.iter().zip(&ceil_exponents).all(|(a, b)| a <= b);
    let equality_holds_where_integral = floor_exponents
        .iter()
        .zip(&ceil_exponents)
        .zip(&integral)
        .all(|((a, b), &int)| !int || a == b);
    RoundingReport { q, floor_exponents, ceil_exponents, integral, inequality_holds, equality_holds_where_integral }
}

fn require_nonzero(ring: &RingPresentation, c: &Polynomial) -> Result<()> {
    if c.nvars() != ring.nvars() {
        return Err(Error::InvalidInput("element lives in another ring".into()));
    }
    if !ring.is_nonzero(c) {
        return Err(Error::InvalidInput("the test element must be nonzero in the ring".into()));
    }
    Ok(())
}

/// `λ(J_e/I_e)/q^d` for `I_e` the splitting ideal and `J_e = (I_e : c)`.
///
/// `λ(P/I_e)` is the rank of `F` on the Frobenius box and `λ(P/J_e)` is the
/// rank of `c·F`, so the gap is their difference.
pub fn ctrick_gap_sequence(ring: &RingPresentation, c: &Polynomial, e_max: u32, budget: &Budget) -> Result<Vec<Rational>> {
    require_nonzero(ring, c)?;
    let d = ring.dim();
    (1..=e_max)
        .map(|e| {
            budget.check()?;
            let (q, f) = colon_multiplier(ring, &PairDivisorSpec::empty(), e)?;
            let cf = f.mul_filtered(c, |m| m.in_box(q));
            let a = rank_in_frobenius_box(ring.nvars(), q, &f, budget)?;
            let b = rank_in_frobenius_box(ring.nvars(), q, &cf, budget)?;
            Ok(normalize(a - b, q, d))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationReport {
    #[serde(with = "serde_fraction::vec")]
    pub base: Vec<Rational>,
    #[serde(with = "serde_fraction::vec")]
    pub perturbed: Vec<Rational>,
    #[serde(with = "serde_fraction::vec")]
    pub gaps: Vec<Rational>,
    #[serde(with = "serde_fraction")]
    pub threshold: Rational,
    pub passed: bool,
}

/// Compares `a_e^Δ/q^d` with the sequence whose colon multiplier carries the
/// extra fixed factor `Π h_k^{n_k}`. Default threshold is `2/q` at `e_max`.
pub fn perturbed_limit_check(
    ring: &RingPresentation,
    pair: &PairDivisorSpec,
    extra: &[(Polynomial, u32)],
    e_max: u32,
    threshold: Option<Rational>,
    budget: &Budget,
) -> Result<PerturbationReport> {
    if e_max == 0 {
        return Err(Error::InvalidInput("e_max must be at least 1".into()));
    }
    for (h, _) in extra {
        if h.nvars() != ring.nvars() || h.is_zero() {
            return Err(Error::InvalidInput("extra divisor components must be nonzero ring elements".into()));
        }
    }
    let d = ring.dim();
    let (mut base, mut perturbed, mut gaps) = (Vec::new(), Vec::new(), Vec::new());
    let mut q_last = 1;
    for e in 1..=e_max {
        budget.check()?;
        let (q, f) = colon_multiplier(ring, pair, e)?;
        let keep = |m: &Monomial| m.in_box(q);
        let mut g = f.clone();
        for (h, n) in extra {
            g = g.mul_filtered(&h.pow_filtered(u64::from(*n), keep)?, keep);
        }
        let a = normalize(rank_in_frobenius_box(ring.nvars(), q, &f, budget)?, q, d);
        let b = normalize(rank_in_frobenius_box(ring.nvars(), q, &g, budget)?, q, d);
        gaps.push(&a - &b);
        base.push(a);
        perturbed.push(b);
        q_last = q;
    }
    let threshold = threshold.unwrap_or_else(|| Rational::new(BigInt::from(2), BigInt::from(q_last)));
    let last = gaps.last().expect("e_max ≥ 1");
    let passed = gaps.iter().all(|g| !num_traits::Signed::is_negative(g)) && *last <= threshold;
    Ok(PerturbationReport { base, perturbed, gaps, threshold, passed })
}

/// `λ_R(R/I^{[q]}R)/q^d` for `e = 1..=e_max`.
pub fn hk_length_sequence(ring: &RingPresentation, ideal: &Ideal, e_max: u32, budget: &Budget) -> Result<Vec<Rational>> {
    if ideal.nvars() != ring.nvars() {
        return Err(Error::InvalidInput("ideal lives in another ring".into()));
    }
    let in_ring = match ring.equation() {
        Some(f) => ideal.plus(std::slice::from_ref(f)),
        None => ideal.clone(),
    };
    if quotient_length(&in_ring) == Length::Infinite {
        return Err(Error::InfiniteLength);
    }
    let d = ring.dim();
    (1..=e_max)
        .map(|e| {
            budget.check()?;
            let q = ring.field().checked_power(e)?;
            let bracket = frobenius_power(ideal, q)?;
            let len = bracket_length(ring, &bracket, budget)?;
            Ok(normalize(len, q, d))
        })
        .collect()
}

fn bracket_length(ring: &RingPresentation, bracket: &Ideal, budget: &Budget) -> Result<u64> {
    let monomial_quotient = if bracket.is_monomial() {
        let mons: Vec<Monomial> = bracket.generators().iter().map(|g| g.terms()[0].0.clone()).collect();
        MonomialQuotient::new(ring.nvars(), &mons).ok()
    } else {
        None
    };
    match (ring.kind(), monomial_quotient) {
        (RingKind::Regular, Some(quot)) => Ok(quot.len() as u64),
        (RingKind::Hypersurface(f), Some(quot)) => {
            let rank = multiplication_rank(&quot, f, budget)?;
            Ok(quot.len() as u64 - rank)
        }
        (kind, None) => {
            let full = match kind {
                RingKind::Regular => bracket.clone(),
                RingKind::Hypersurface(f) => bracket.plus(std::slice::from_ref(f)),
            };
            quotient_length(&full).finite().ok_or(Error::InfiniteLength)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SfrWitness {
    /// `c` survives some splitting at this `e`.
    Found { e: u32 },
    /// No witness up to `e_max`; says nothing about strong F-regularity.
    Inconclusive { e_max: u32 },
}

impl SfrWitness {
    pub fn e(self) -> Option<u32> {
        match self {
            SfrWitness::Found { e } => Some(e),
            SfrWitness::Inconclusive { .. } => None,
        }
    }
}

/// Least `e ≤ e_max` with `c·f^{q−1} ∉ 𝔪^{[q]}` (just `c ∉ 𝔪^{[q]}` when regular).
pub fn sfr_witness(ring: &RingPresentation, c: &Polynomial, e_max: u32, budget: &Budget) -> Result<SfrWitness> {
    require_nonzero(ring, c)?;
    for e in 1..=e_max {
        budget.check()?;
        let (q, f) = colon_multiplier(ring, &PairDivisorSpec::empty(), e)?;
        if !f.mul_filtered(c, |m| m.in_box(q)).is_zero() {
            return Ok(SfrWitness::Found { e });
        }
    }
    Ok(SfrWitness::Inconclusive { e_max })
}

/// Whether `a_e` hits zero, in which case every later `a_e` vanishes too.
pub fn first_vanishing(records: &[super::SplittingRecord]) -> Option<u32> {
    records.iter().find(|r| r.a_e == 0).map(|r| r.e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use crate::rational::rat;

    fn unit_fraction(q: u64) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(q))
    }

    fn is_zero_seq(v: &[Rational]) -> bool {
        v.iter().all(Zero::is_zero)
    }

    fn a1() -> RingPresentation {
        let names = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        RingPresentation::parse_hypersurface("x*y - z^2", names, 3).unwrap()
    }

    #[test]
    fn rounding_examples() {
        let r = rounding_gap_for(&[rat(1, 2)], 5);
        assert_eq!((r.floor_exponents[0], r.ceil_exponents[0], r.integral[0]), (2, 2, true));
        let r = rounding_gap_for(&[rat(2, 3)], 3);
        assert_eq!((r.floor_exponents[0], r.ceil_exponents[0]), (2, 2));
        assert!(r.passed());
    }

    #[test]
    fn ctrick_on_the_plane_is_one_over_q() {
        let r = RingPresentation::regular(2, 3).unwrap();
        let x = r.parse("x0").unwrap();
        let gaps = ctrick_gap_sequence(&r, &x, 3, &Budget::unlimited()).unwrap();
        assert_eq!(gaps, vec![unit_fraction(3), unit_fraction(9), unit_fraction(27)]);
        let one = r.parse("1").unwrap();
        assert!(is_zero_seq(&ctrick_gap_sequence(&r, &one, 2, &Budget::unlimited()).unwrap()));
        assert!(ctrick_gap_sequence(&r, &r.parse("0").unwrap(), 1, &Budget::unlimited()).is_err());
    }

    #[test]
    fn perturbation_by_a_coordinate() {
        let r = RingPresentation::regular(2, 3).unwrap();
        let x = r.parse("x0").unwrap();
        let rep = perturbed_limit_check(&r, &PairDivisorSpec::empty(), &[(x, 1)], 3, None, &Budget::unlimited()).unwrap();
        assert_eq!(rep.gaps, vec![unit_fraction(3), unit_fraction(9), unit_fraction(27)]);
        assert!(rep.passed);
        let none = perturbed_limit_check(&r, &PairDivisorSpec::empty(), &[], 2, None, &Budget::unlimited()).unwrap();
        assert!(is_zero_seq(&none.gaps));
    }

    #[test]
    fn hilbert_kunz_lengths() {
        let r = RingPresentation::regular(2, 3).unwrap();
        let i = Ideal::new(2, r.field(), vec![r.parse("x0^2").unwrap(), r.parse("x1").unwrap()]);
        assert_eq!(hk_length_sequence(&r, &i, 3, &Budget::unlimited()).unwrap(), vec![rat(2, 1); 3]);
        let a = a1();
        let m = Ideal::maximal(3, a.field());
        // λ(P/(x^q, y^q, z^q, xy − z²)) = (3q² − 1)/2 for odd q.
        let v = hk_length_sequence(&a, &m, 2, &Budget::unlimited()).unwrap();
        assert_eq!(v, vec![rat(13, 9), rat(121, 81)]);
        let partial = Ideal::new(3, a.field(), vec![a.parse("x").unwrap()]);
        assert!(matches!(hk_length_sequence(&a, &partial, 1, &Budget::unlimited()), Err(Error::InfiniteLength)));
    }

    #[test]
    fn witnesses() {
        let r = RingPresentation::regular(2, 3).unwrap();
        let c = r.parse("x0^2*x1^2").unwrap();
        assert_eq!(sfr_witness(&r, &c, 3, &Budget::unlimited()).unwrap(), SfrWitness::Found { e: 1 });
        let c = r.parse("x0^5").unwrap();
        assert_eq!(sfr_witness(&r, &c, 3, &Budget::unlimited()).unwrap(), SfrWitness::Found { e: 2 });
        let a = a1();
        assert_eq!(sfr_witness(&a, &a.parse("x").unwrap(), 3, &Budget::unlimited()).unwrap().e(), Some(1));
        assert!(sfr_witness(&a, &a.parse("x*y - z^2").unwrap(), 2, &Budget::unlimited()).is_err());
    }
}
